// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. argv[1] is the path of the mk executable.

#include "mk/cli_report.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace rep = mk::report;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [" << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& o) {
    std::cout << "criterion " << id << ": " << (o.ok ? "PASS" : "FAIL") << "  " << title << ";" << o.detail.str() << std::endl;
    if (!o.ok) ++failures;
}

const std::array<int, 3> dims{2, 3, 4};
const std::array<double, 3> heights{0.5, 0.9, 0.95};

void criterion_1() {
    Outcome o;
    const auto t0 = Clock::now();
    int bad = 0;
    for (int n : dims)
        for (double s : heights)
            if (mk::maslov(mk::bishop_boundary_loop(n, s, 256)) != 2) ++bad;
    const double t = seconds_since(t0);
    o.detail << " mismatches=" << bad << " time=" << t << "s";
    o.require(bad == 0, "maslov != 2");
    o.require(t < 0.1, "runtime >= 0.1 s");
    report(1, "Maslov index of the Bishop boundary frame", o);
}

struct KernelCase {
    int n;
    double s;
    int K;
    mk::KernelResult r;
};

std::vector<KernelCase> kernel_cases;

void criterion_2() {
    Outcome o;
    const auto t0 = Clock::now();
    for (int n : dims)
        for (double s : heights)
            for (int K : {16, 32})
                kernel_cases.push_back({n, s, K, mk::kernel(mk::build_system(s, n, K, mk::min_collocation_angles(K)))});
    const double t = seconds_since(t0);
    double min_gap = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (const auto& c : kernel_cases) {
        min_gap = std::min(min_gap, c.r.sigma_gap);
        if (c.r.dimension != c.n + 2) ++bad;
    }
    o.detail << " cases=" << kernel_cases.size() << " mismatches=" << bad << " min_sigma_gap=" << min_gap << " time=" << t << "s";
    o.require(bad == 0, "kernel dimension != n+2");
    o.require(min_gap > 1e4, "sigma_gap <= 1e4");
    o.require(t < 5.0, "runtime >= 5 s");
    report(2, "kernel dimension of the linearized problem", o);
}

void criterion_3() {
    Outcome o;
    int bad = 0;
    for (const auto& c : kernel_cases)
        if (mk::fredholm_index({c.n, 1, 2}) - c.r.dimension != 0) ++bad;
    o.detail << " cases=" << kernel_cases.size() << " nonzero_cokernel=" << bad;
    o.require(!kernel_cases.empty() && bad == 0, "index != kernel dimension");
    report(3, "index consistency (numerical cokernel zero)", o);
}

void criterion_4() {
    Outcome o;
    for (int n = 2; n <= 6; ++n) {
        const int ind = mk::fredholm_index({n, 1, 2});
        o.require(mk::moduli_dimension(ind, 1, 0, mk::disk_automorphisms).total() == n + 1, "interior-marked != n+1");
        o.require(mk::moduli_dimension(ind, 0, 1, mk::disk_automorphisms).total() == n, "boundary-marked != n");
        for (int c1 = 0; c1 <= 3; ++c1)
            o.require(mk::moduli_dimension(mk::fredholm_index({n, 2, 2 * c1}), 0, 0, mk::sphere_automorphisms).total() ==
                          2 * (n - 3) + 2 * c1,
                      "sphere moduli != 2(n-3)+2c1");
    }
    std::mt19937_64 rng(rep::seed_from_env());
    int bad = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 4;
        const auto b = rep::detail::random_bubble_tree(n, rng);
        if (mk::bubble_tree_dimension(b, false).total() > n + 1 - 2L * b.k) ++bad;
    }
    o.detail << " random_trees=50 violations=" << bad;
    o.require(bad == 0, "bubble tree above n+1-2k");
    report(4, "moduli dimension ledger", o);
}

void criterion_5() {
    Outcome o;
    const auto t0 = Clock::now();
    double worst = 0.0;
    bool bounded = true;
    for (double s : {0.0, 0.5, 0.9, 0.95, 0.999}) {
        const double e = mk::disk_energy(mk::BishopDisk(s, 2), 64).value();
        worst = std::max(worst, std::abs(e - mk::bishop_energy_closed_form(s)));
        bounded = bounded && e <= mk::energy_bound(1.0);
    }
    const double t = seconds_since(t0);
    o.detail << " max_error=" << worst << " time=" << t << "s";
    o.require(worst <= 1e-6, "energy error > 1e-6");
    o.require(bounded, "energy above 2 pi");
    o.require(t < 1.0, "runtime >= 1 s");
    report(5, "disk energy against 2 pi (1 - s^2) and the bound", o);
}

void criterion_6() {
    Outcome o;
    const auto g = mk::aux_profile_check({0.75, 1.0, 26, 64});
    o.require(g.max_laplacian_error <= 1e-6, "Laplacian of g off by > 1e-6");
    o.require(g.max_boundary_value <= 1e-12, "g(1) != 0");
    o.require(g.max_radial_rate < 0.0, "r d_r g >= 0 in the annulus");
    const auto lattice = mk::cartesian_disk_grid(64);
    double min_lap = std::numeric_limits<double>::infinity();
    bool boundary_max = true;
    for (double s : rep::psh_disk_heights()) {
        const mk::BishopDisk u(s, 3);
        const mk::PlaneFunction F = [&u](double x, double y) { return mk::psh_f(u({x, y})); };
        min_lap = std::min(min_lap, mk::min_laplacian(F, lattice, 1e-3));
        const auto r = mk::max_principle_check(F, mk::PolarGrid{}, 1e-3);
        boundary_max = boundary_max && r.max_on_boundary && r.consistent();
    }
    o.detail << " g_lap_err=" << g.max_laplacian_error << " min_laplacian=" << min_lap;
    o.require(min_lap >= -1e-6, "negative Laplacian of psh_f o u");
    o.require(boundary_max, "maximum not on the boundary");
    report(6, "subharmonicity suite", o);
}

void criterion_7() {
    Outcome o;
    const int bad = rep::antisymmetry_failures(1000, rep::seed_from_env());
    const auto rich = rep::dd_richardson();
    const double leib = rep::leibniz_defect();
    o.detail << " antisymmetry_failures=" << bad << " max|dd a|(h)=" << rich.coarse << " max|dd a|(h/2)=" << rich.fine
             << " ratio=" << rich.ratio() << " leibniz=" << leib;
    o.require(bad == 0, "antisymmetry not exact");
    o.require(rich.ratio() >= 3.5, "dd a does not shrink by 3.5x when h halves");
    o.require(leib <= 1e-6, "Leibniz identity off by > 1e-6");
    report(7, "exterior-calculus property suite", o);
}

void criterion_8() {
    Outcome o;
    const auto grid = mk::uniform_grid(3, -1.0, 1.0);
    const double ell = mk::frobenius_residual(mk::FoliationModel(mk::elliptic_form(), grid));
    const double cod = mk::frobenius_residual(mk::FoliationModel(mk::codim1_form(), grid));
    const auto deform = mk::codim1_deform(0.1);
    const bool s2_fails = !mk::regular_equation_check(mk::FoliationModel(mk::codim1_form(2), grid)).passed();
    o.detail << " elliptic=" << ell << " codim1=" << cod;
    o.require(ell <= 1e-9 && cod <= 1e-9, "integrable model residual > 1e-9");
    o.require(mk::regular_equation_check(mk::FoliationModel(mk::elliptic_form(), grid)).passed(), "elliptic not regular");
    o.require(mk::min_form_norm(deform) > 0.0, "deformation vanishes somewhere");
    o.require(mk::closed_leaf_check(deform).is_leaf(), "{s=0} not a leaf");
    o.require(s2_fails, "s^2 dphi accepted as regular");
    report(8, "Frobenius and regular-equation catalog", o);
}

void criterion_9() {
    Outcome o;
    for (int kappa = -3; kappa <= 3; ++kappa) {
        const auto r = mk::rh_scalar_dims(kappa, 32);
        o.detail << " k" << kappa << "=" << r.kernel << "-" << r.cokernel;
        o.require(r.index() == 1 + 2 * kappa, "index != 1+2kappa at kappa=" + std::to_string(kappa));
    }
    report(9, "scalar Riemann-Hilbert index", o);
}

struct RunResult {
    std::string out;
    int status;
};

RunResult run(const std::string& cmd) {
    RunResult r{{}, -1};
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string strip_runtime(const std::string& lines) {
    std::istringstream in(lines);
    std::string line, out;
    while (std::getline(in, line)) {
        auto j = rep::json::parse(line);
        j.erase("runtime_ms");
        out += j.dump() + "\n";
    }
    return out;
}

void criterion_10(const std::string& tool) {
    Outcome o;
    const std::string cmd = "'" + tool + "' report --n 3";
    const auto a = run(cmd), b = run(cmd);
    bool same = false;
    try {
        same = !a.out.empty() && strip_runtime(a.out) == strip_runtime(b.out);
    } catch (const std::exception& e) {
        o.detail << " parse_error=" << e.what();
    }
    std::size_t records = 0, failed = 0;
    std::istringstream in(a.out);
    for (std::string line; std::getline(in, line); ++records)
        if (line.find("\"verdict\":\"fail\"") != std::string::npos) {
            ++failed;
            o.detail << " failing_record=" << rep::json::parse(line)["check_name"].get<std::string>();
        }
    o.detail << " records=" << records << " identical=" << (same ? "yes" : "no") << " exit=" << a.status << "," << b.status;
    o.require(same, "outputs differ");
    o.require(a.status == 0 && b.status == 0, "exit code != 0");
    report(10, "CLI determinism of mk report --n 3", o);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-mk>\n";
        return 1;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(argv[1]);
    std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : std::string("all criteria passed")) << std::endl;
    return failures ? 1 : 0;
}
