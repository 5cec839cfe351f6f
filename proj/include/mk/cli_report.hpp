#pragma once

// Run configuration, report records and the check catalog behind the `mk`
// command-line tool. Every command returns its records in a fixed order;
// nothing here touches stdout.

#include "mk/bishop_model.hpp"
#include "mk/chart_forms.hpp"
#include "mk/contact_foliation.hpp"
#include "mk/error.hpp"
#include "mk/fredholm_dim.hpp"
#include "mk/grids.hpp"
#include "mk/linearized_cr.hpp"
#include "mk/maslov_index.hpp"
#include "mk/subharmonic_check.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mk::report {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration

inline std::map<std::string, double> default_tolerances() {
    return {
        {"contact", 1e-9},      {"frobenius", 1e-9},  {"energy", 1e-6},     {"laplacian", 1e-6},
        {"structure", 1e-8},    {"rank_ratio", 1e-8}, {"sigma_gap", 1e4},   {"leibniz", 1e-6},
        {"richardson", 3.5},    {"holomorphy", 1e-8},
    };
}

/// Named 1-forms on R^3 that a config may add to the foliation catalog.
inline const std::map<std::string, std::function<KForm()>>& extra_foliations() {
    static const std::map<std::string, std::function<KForm()>> m{
        {"dz_plus_xdy",
         [] {
             PolyForm b = PolyForm::basis(3, {2});
             b += PolyForm::monomial(Polynomial::coordinate(3, 0), {1});
             return KForm::exact(std::move(b));
         }},
        {"elliptic", [] { return elliptic_form(3); }},
        {"codim1", [] { return codim1_form(1, 3); }},
        {"s2dphi", [] { return codim1_form(2, 3); }},
    };
    return m;
}

struct RunConfig {
    int n = 2;
    std::vector<double> s_values{0.5, 0.9, 0.95};
    int K = 16;
    int samples = default_loop_samples;
    std::map<std::string, double> tolerances = default_tolerances();
    std::string output_path;  // empty: stdout
    std::string format = "json_lines";
    std::vector<std::string> foliations;

    double tol(const std::string& name) const { return tolerances.at(name); }

    void validate() const {
        if (n < 2 || n > 8) throw ConfigError("n must lie in [2, 8]");
        if (s_values.empty()) throw ConfigError("s list is empty");
        for (double s : s_values)
            if (!(s >= 0.0 && s < 1.0)) throw ConfigError("every s must lie in [0, 1)");
        if (K < 4 || K > 128) throw ConfigError("K must lie in [4, 128]");
        if (samples < 8) throw ConfigError("samples must be >= 8");
        if (format != "json_lines" && format != "csv") throw ConfigError("format must be json_lines or csv");
        for (const auto& [k, v] : tolerances)
            if (!(v > 0.0)) throw ConfigError("tolerance '" + k + "' must be positive");
        for (const auto& f : foliations)
            if (!extra_foliations().count(f)) throw ConfigError("unknown foliation model '" + f + "'");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string_view v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace detail

inline double parse_real(std::string_view v, const std::string& key) {
    v = detail::trim(v);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) throw ConfigError("bad real value for '" + key + "'");
    return x;
}

inline int parse_int(std::string_view v, const std::string& key) {
    v = detail::trim(v);
    int x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) throw ConfigError("bad integer value for '" + key + "'");
    return x;
}

/// Flat key = value text. Sections: [run] (also the implicit leading
/// section), [tolerances], [models]. '#' and ';' start comment lines.
inline RunConfig parse_config(std::istream& in, RunConfig cfg = {}) {
    std::string line;
    std::string section = "run";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view t = detail::trim(line);
        if (t.empty() || t.front() == '#' || t.front() == ';') continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(detail::trim(t.substr(1, t.size() - 2)));
            if (section != "run" && section != "tolerances" && section != "models")
                throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        const std::string key(detail::trim(t.substr(0, eq)));
        const std::string_view val = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");

        if (section == "tolerances") {
            if (!cfg.tolerances.count(key)) throw ConfigError(where + "unknown tolerance '" + key + "'");
            cfg.tolerances[key] = parse_real(val, key);
        } else if (section == "models") {
            if (key != "foliations") throw ConfigError(where + "unknown key '" + key + "'");
            cfg.foliations = detail::split_list(val);
        } else if (key == "n") {
            cfg.n = parse_int(val, key);
        } else if (key == "s") {
            cfg.s_values.clear();
            for (const auto& s : detail::split_list(val)) cfg.s_values.push_back(parse_real(s, key));
        } else if (key == "K") {
            cfg.K = parse_int(val, key);
        } else if (key == "samples") {
            cfg.samples = parse_int(val, key);
        } else if (key == "out") {
            cfg.output_path = std::string(val);
        } else if (key == "format") {
            cfg.format = std::string(val);
        } else {
            throw ConfigError(where + "unknown key '" + key + "'");
        }
    }
    return cfg;
}

inline RunConfig parse_config(const std::string& text, RunConfig cfg = {}) {
    std::istringstream in(text);
    return parse_config(in, std::move(cfg));
}

/// Seed for randomized sampling; MK_SEED overrides the fixed default.
inline constexpr std::uint64_t default_seed = 20150417;

inline std::uint64_t seed_from_env() {
    const char* v = std::getenv("MK_SEED");
    if (!v || !*v) return default_seed;
    const std::string_view s(v);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("MK_SEED must be a non-negative integer");
    return x;
}

// ---------------------------------------------------------------------------
// Records

enum class Verdict { pass, fail, info };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::info: return "info";
    }
    return "?";
}

enum class Cmp { eq, le, ge, lt, gt };

inline const char* to_string(Cmp c) {
    switch (c) {
        case Cmp::eq: return "==";
        case Cmp::le: return "<=";
        case Cmp::ge: return ">=";
        case Cmp::lt: return "<";
        case Cmp::gt: return ">";
    }
    return "?";
}

/// Expected value, how `actual` is compared with it, and where the value
/// comes from: "literature" (stated in the source), "oracle" (independent
/// computation) or "exact" (holds by construction).
struct Expectation {
    Cmp cmp = Cmp::eq;
    json value;
    double tol = 0.0;
    std::string provenance;

    json to_json() const {
        json j;
        j["op"] = to_string(cmp);
        j["value"] = value;
        if (cmp == Cmp::eq && value.is_number()) j["tol"] = tol;
        return j;
    }
};

struct ReportRecord {
    std::string check_name;
    json inputs = json::object();
    std::optional<Expectation> expected;
    json actual;
    Verdict verdict = Verdict::info;
    long runtime_ms = 0;

    json to_json() const {
        json j;
        j["check_name"] = check_name;
        j["inputs"] = inputs;
        j["expected"] = expected ? expected->to_json() : json(nullptr);
        j["provenance"] = expected ? expected->provenance : std::string();
        j["actual"] = actual;
        j["verdict"] = to_string(verdict);
        j["runtime_ms"] = runtime_ms;
        return j;
    }
};

/// Pass iff actual satisfies the expectation. Booleans and strings compare
/// by equality; numbers with the tolerance for ==.
inline Verdict judge(const Expectation& e, const json& actual) {
    if (e.value.is_boolean() || e.value.is_string()) return actual == e.value ? Verdict::pass : Verdict::fail;
    if (!actual.is_number() || !e.value.is_number()) return Verdict::fail;
    const double a = actual.get<double>(), x = e.value.get<double>();
    bool ok = false;
    switch (e.cmp) {
        case Cmp::eq: ok = std::abs(a - x) <= e.tol; break;
        case Cmp::le: ok = a <= x; break;
        case Cmp::ge: ok = a >= x; break;
        case Cmp::lt: ok = a < x; break;
        case Cmp::gt: ok = a > x; break;
    }
    return ok ? Verdict::pass : Verdict::fail;
}

/// Runs `body`, which returns the actual value, and fills in verdict and
/// runtime. Library exceptions turn into failed records.
inline ReportRecord run_check(std::string name, json inputs, std::optional<Expectation> expected,
                              const std::function<json()>& body) {
    ReportRecord r;
    r.check_name = std::move(name);
    r.inputs = std::move(inputs);
    r.expected = std::move(expected);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.actual = body();
        r.verdict = r.expected ? judge(*r.expected, r.actual) : Verdict::info;
    } catch (const std::exception& ex) {
        r.actual = json{{"error", ex.what()}};
        r.verdict = Verdict::fail;
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return r;
}

inline Expectation expect(Cmp c, json v, std::string provenance, double tol = 0.0) {
    return {c, std::move(v), tol, std::move(provenance)};
}

inline bool any_failed(const std::vector<ReportRecord>& rs) {
    return std::any_of(rs.begin(), rs.end(), [](const ReportRecord& r) { return r.verdict == Verdict::fail; });
}

// ---------------------------------------------------------------------------
// Emitters

inline void write_json_lines(std::ostream& os, const std::vector<ReportRecord>& rs) {
    for (const auto& r : rs) os << r.to_json().dump() << '\n';
}

/// RFC 4180 field: quoted when it holds a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline constexpr const char* csv_header = "check_name,inputs,expected,provenance,actual,verdict,runtime_ms";

inline void write_csv(std::ostream& os, const std::vector<ReportRecord>& rs) {
    os << csv_header << "\r\n";
    for (const auto& r : rs) {
        const json j = r.to_json();
        os << csv_field(r.check_name) << ',' << csv_field(j["inputs"].dump()) << ','
           << csv_field(r.expected ? j["expected"].dump() : std::string()) << ',' << csv_field(j["provenance"].get<std::string>())
           << ',' << csv_field(r.actual.is_string() ? r.actual.get<std::string>() : r.actual.dump()) << ','
           << to_string(r.verdict) << ',' << r.runtime_ms << "\r\n";
    }
}

inline void write_records(std::ostream& os, const std::vector<ReportRecord>& rs, const std::string& format) {
    if (format == "csv")
        write_csv(os, rs);
    else
        write_json_lines(os, rs);
}

// ---------------------------------------------------------------------------
// Check catalog

namespace detail {

inline void append(std::vector<ReportRecord>& to, std::vector<ReportRecord> from) {
    to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

inline json frobenius_and_regular(std::vector<ReportRecord>& out, const std::string& name, const FoliationModel& f,
                                  const RunConfig& cfg, bool expect_regular) {
    out.push_back(run_check("frobenius:" + name, json::object(), expect(Cmp::le, cfg.tol("frobenius"), "exact"),
                            [&] { return json(frobenius_residual(f)); }));
    out.push_back(run_check("regular:" + name, {{"tol_sing", default_tol_sing}}, expect(Cmp::eq, expect_regular, "literature"),
                            [&] {
                                const SingularReport r = regular_equation_check(f);
                                return json(r.passed());
                            }));
    return json();
}

}  // namespace detail

/// Frobenius, regular-equation and deformation checks of the foliation
/// catalog, plus any extra models named in the config.
inline std::vector<ReportRecord> cmd_frobenius(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const auto grid = uniform_grid(3, -1.0, 1.0);
    detail::frobenius_and_regular(out, "elliptic", FoliationModel(elliptic_form(3), grid), cfg, true);
    detail::frobenius_and_regular(out, "codim1", FoliationModel(codim1_form(1, 3), grid), cfg, true);
    // s^2 dphi vanishes to second order on {s=0}: not a regular equation.
    out.push_back(run_check("regular:s2dphi", {{"tol_sing", default_tol_sing}}, expect(Cmp::eq, false, "literature"), [&] {
        return json(regular_equation_check(FoliationModel(codim1_form(2, 3), grid)).passed());
    }));

    const double delta = 0.1;
    const FoliationModel deform = codim1_deform(delta);
    out.push_back(run_check("frobenius:deformation", {{"delta", delta}}, expect(Cmp::le, cfg.tol("frobenius"), "literature"),
                            [&] { return json(frobenius_residual(deform)); }));
    out.push_back(run_check("nonzero:deformation", {{"delta", delta}}, expect(Cmp::gt, 0.0, "literature"),
                            [&] { return json(min_form_norm(deform)); }));
    out.push_back(run_check("leaf:deformation", {{"delta", delta}}, expect(Cmp::eq, true, "literature"),
                            [&] { return json(closed_leaf_check(deform).is_leaf()); }));

    for (const auto& name : cfg.foliations) {
        const FoliationModel f(extra_foliations().at(name)(), grid);
        out.push_back(run_check("frobenius:" + name, {{"source", "config"}}, expect(Cmp::le, cfg.tol("frobenius"), "exact"),
                                [&] { return json(frobenius_residual(f)); }));
    }
    return out;
}

inline std::vector<ReportRecord> cmd_contact(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const std::vector<std::pair<int, double>> models{{1, 2.0}, {2, 8.0}};
    for (const auto& [n, value] : models) {
        const ContactChart c = standard_contact(n);
        const int per_axis = n == 1 ? 21 : 5;
        out.push_back(run_check("contact:R" + std::to_string(2 * n + 1), {{"grid", per_axis}},
                                expect(Cmp::eq, value, "exact", cfg.tol("contact")),
                                [&] { return json(contact_residual(c, uniform_grid(c.chart_dim(), -1.0, 1.0, per_axis))); }));
    }
    out.push_back(run_check("reeb:R3", {{"point", {0.3, -0.2, 1.0}}}, expect(Cmp::le, 1e-9, "exact"), [] {
        Point p(3);
        p << 0.3, -0.2, 1.0;
        return json((reeb_field(standard_contact(1), p) - basis_vector(3, 2)).norm());
    }));
    detail::append(out, cmd_frobenius(cfg));
    return out;
}

inline std::vector<ReportRecord> cmd_maslov(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    for (double s : cfg.s_values)
        out.push_back(run_check("maslov:bishop", {{"n", cfg.n}, {"s", s}, {"samples", cfg.samples}},
                                expect(Cmp::eq, 2, "literature"),
                                [&] { return json(maslov(bishop_boundary_loop(cfg.n, s, cfg.samples))); }));
    return out;
}

namespace detail {

/// Random admissible tree: simple spheres with c_1 >= 0, each covered at
/// least once.
inline BubbleTreeData random_bubble_tree(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kd(0, 3), cd(0, 3), md(1, 3), extra(0, 2);
    const int k = kd(rng);
    std::vector<long> c1;
    std::vector<BubbleTreeData::Cover> covers;
    for (int i = 0; i < k; ++i) {
        c1.push_back(cd(rng));
        covers.push_back({i, md(rng)});
    }
    if (k > 0)
        for (int e = extra(rng); e > 0; --e) covers.push_back({std::uniform_int_distribution<int>(0, k - 1)(rng), md(rng)});
    return BubbleTreeData::from_spheres(n, c1, covers);
}

}  // namespace detail

inline std::vector<ReportRecord> cmd_index(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const int n = cfg.n;
    const int ind = fredholm_index({n, 1, 2});
    out.push_back(run_check("index:disk", {{"n", n}, {"mu", 2}}, expect(Cmp::eq, n + 2, "literature"), [&] { return json(ind); }));
    out.push_back(run_check("moduli:interior_marked", {{"n", n}}, expect(Cmp::eq, n + 1, "literature"),
                            [&] { return json(moduli_dimension(ind, 1, 0, disk_automorphisms).total()); }));
    out.push_back(run_check("moduli:boundary_marked", {{"n", n}}, expect(Cmp::eq, n, "literature"),
                            [&] { return json(moduli_dimension(ind, 0, 1, disk_automorphisms).total()); }));
    for (int c1 = 0; c1 <= 2; ++c1)
        out.push_back(run_check("moduli:sphere", {{"n", n}, {"c1", c1}}, expect(Cmp::eq, 2 * (n - 3) + 2 * c1, "literature"), [&] {
            return json(moduli_dimension(fredholm_index({n, 2, 2 * c1}), 0, 0, sphere_automorphisms).total());
        }));
    for (int k = 0; k <= 3; ++k) {
        std::vector<long> c1(static_cast<std::size_t>(k), 1);
        std::vector<BubbleTreeData::Cover> covers;
        for (int i = 0; i < k; ++i) covers.push_back({i, 1});
        const BubbleTreeData b = BubbleTreeData::from_spheres(n, c1, covers);
        out.push_back(run_check("bubble_tree", {{"n", n}, {"k", k}, {"c1B", b.c1B_total}, {"c1A", b.c1A_total}},
                                expect(Cmp::eq, n + 1 - 2 * k, "literature"), [&] { return json(bubble_tree_dimension(b, false).total()); }));
    }
    const std::uint64_t seed = seed_from_env();
    out.push_back(run_check("bubble_tree:random", {{"n", n}, {"trees", 50}, {"seed", seed}}, expect(Cmp::eq, 0, "literature"), [&] {
        std::mt19937_64 rng(seed);
        int violations = 0;
        for (int t = 0; t < 50; ++t) {
            const BubbleTreeData b = detail::random_bubble_tree(n, rng);
            const long d = bubble_tree_dimension(b, false).total();
            if (d != bubble_tree_closed_form(b, false) || d > n + 1 - 2L * b.k) ++violations;
        }
        return json(violations);
    }));
    for (int kappa = -3; kappa <= 3; ++kappa)
        out.push_back(run_check("rh:scalar", {{"kappa", kappa}, {"K", 32}}, expect(Cmp::eq, 1 + 2 * kappa, "oracle"),
                                [&] { return json(rh_scalar_dims(kappa, 32).index()); }));
    return out;
}

inline std::vector<ReportRecord> cmd_kernel(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const int n = cfg.n;
    const int m = min_collocation_angles(cfg.K);
    const int ind = fredholm_index({n, 1, 2});
    for (double s : cfg.s_values) {
        const json in{{"n", n}, {"s", s}, {"K", cfg.K}, {"m", m}};
        std::optional<KernelResult> r;
        out.push_back(run_check("kernel:dim", in, expect(Cmp::eq, n + 2, "literature"), [&] {
            r = kernel(build_system(s, n, cfg.K, m), cfg.tol("rank_ratio"));
            return json(r->dimension);
        }));
        out.push_back(run_check("kernel:sigma_gap", in, expect(Cmp::gt, cfg.tol("sigma_gap"), "exact"), [&] {
            if (!r) throw NumericalError("kernel unavailable");
            return json(r->sigma_gap);
        }));
        out.push_back(run_check("kernel:index_consistency", in, expect(Cmp::eq, ind, "literature"), [&] {
            if (!r) throw NumericalError("kernel unavailable");
            return json(r->dimension);
        }));
        out.push_back(run_check("kernel:structure", in, expect(Cmp::le, cfg.tol("structure"), "literature"), [&] {
            if (!r) throw NumericalError("kernel unavailable");
            const KernelStructureReport rep = kernel_structure_check(*r, s, cfg.tol("structure"));
            if (rep.free_parameters != rep.expected_parameters) throw NumericalError("kernel does not span the free parameters");
            return json(rep.max_violation);
        }));
    }
    return out;
}

inline std::vector<ReportRecord> cmd_bishop(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const int quad_n = 64;
    const auto grid = cartesian_disk_grid(16);
    for (double s : cfg.s_values) {
        const BishopDisk u(s, cfg.n);
        const json in{{"n", cfg.n}, {"s", s}};
        out.push_back(run_check("bishop:boundary_in_N", in, expect(Cmp::eq, true, "literature"),
                                [&] { return json(boundary_in_N(u, cfg.samples)); }));
        out.push_back(run_check("bishop:holomorphy", in, expect(Cmp::le, cfg.tol("holomorphy"), "exact"),
                                [&] { return json(holomorphy_residual(u, grid)); }));
        out.push_back(run_check("energy:disk", {{"s", s}, {"quad_n", quad_n}},
                                expect(Cmp::eq, bishop_energy_closed_form(s), "oracle", cfg.tol("energy")),
                                [&] { return json(disk_energy(u, quad_n).value()); }));
        out.push_back(run_check("energy:bound", {{"s", s}, {"f_max", 1.0}}, expect(Cmp::le, bishop_energy_bound(), "literature"),
                                [&] { return json(disk_energy(u, quad_n).value()); }));
    }
    return out;
}

inline const std::vector<double>& psh_disk_heights() {
    static const std::vector<double> s{0.0, 0.3, 0.5, 0.9, 0.95};
    return s;
}

inline std::vector<ReportRecord> cmd_psh(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const PolarGrid annulus{0.75, 1.0, 26, 64};
    std::optional<AuxProfileReport> g;
    auto aux = [&] {
        if (!g) g = aux_profile_check(annulus, 1e-4);
        return *g;
    };
    out.push_back(run_check("aux_g:laplacian", {{"r", {0.75, 1.0}}}, expect(Cmp::le, cfg.tol("laplacian"), "literature"),
                            [&] { return json(aux().max_laplacian_error); }));
    out.push_back(run_check("aux_g:boundary", json::object(), expect(Cmp::le, 1e-12, "literature"),
                            [&] { return json(aux().max_boundary_value); }));
    out.push_back(run_check("aux_g:radial", {{"r", {0.75, 1.0}}}, expect(Cmp::lt, 0.0, "literature"),
                            [&] { return json(aux().max_radial_rate); }));

    const int n = cfg.n;
    out.push_back(run_check("psh:model", {{"n", n}}, expect(Cmp::gt, 0.0, "literature"), [&] {
        const int m = 2 * n;
        std::vector<Point> pts;
        for (const auto& p : uniform_grid(m, -0.5, 0.5, 3)) pts.push_back(p);
        std::vector<Vec> dirs;
        for (int i = 0; i < m; ++i) dirs.push_back(basis_vector(m, i));
        Vec d = Vec::Ones(m);
        dirs.push_back(d.normalized());
        return json(psh_report([](const Point& x) { return psh_f(from_real_coords(x)); }, standard_complex_structure(n), pts, dirs));
    }));

    const auto lattice = cartesian_disk_grid(64);
    for (double s : psh_disk_heights()) {
        const BishopDisk u(s, n);
        const PlaneFunction F = [&u](double x, double y) { return psh_f(u(cplx(x, y))); };
        out.push_back(run_check("psh:laplacian", {{"s", s}, {"grid", 64}}, expect(Cmp::ge, -cfg.tol("laplacian"), "literature"),
                                [&] { return json(min_laplacian(F, lattice, 1e-3)); }));
        out.push_back(run_check("psh:max_on_boundary", {{"s", s}}, expect(Cmp::eq, true, "literature"), [&] {
            const MaxPrincipleReport r = max_principle_check(F, PolarGrid{}, 1e-3);
            return json(r.max_on_boundary && r.consistent());
        }));
    }
    return out;
}

namespace detail {

/// Nonlinear 1-form on R^3 for the exterior-calculus property checks.
inline KForm sample_one_form() {
    return KForm::from_callable(1, 3, [](const Point& p, std::span<const Vec> v) {
        return std::sin(p[0]) * p[1] * v[0][2] + std::exp(p[2]) * p[0] * v[0][1] + std::cos(p[1] * p[2]) * v[0][0];
    });
}

inline double max_dd(const KForm& a, double h) {
    const KForm dd = exterior_derivative(exterior_derivative(a, h), h);
    double worst = 0.0;
    for (const auto& p : uniform_grid(3, -1.0, 1.0, 5)) worst = std::max(worst, std::abs(dd.on_basis(p, {0, 1, 2})));
    return worst;
}

}  // namespace detail

/// max |dd a| at h and at h/2, and the ratio of the two.
struct DDRichardson {
    double coarse;
    double fine;
    double ratio() const { return fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity(); }
};

inline DDRichardson dd_richardson(double h = default_h_fd) {
    const KForm a = detail::sample_one_form();
    return {detail::max_dd(a, h), detail::max_dd(a, h / 2.0)};
}

/// Number of random swaps (out of `trials`) after which a 3-form callable
/// does not flip sign bit for bit.
inline int antisymmetry_failures(int trials, std::uint64_t seed) {
    const KForm f = KForm::from_callable(3, 4, [](const Point& p, std::span<const Vec> v) {
        return std::sin(p[0]) * v[0][0] * v[1][1] * v[2][2] + p[3] * v[0][3] * v[1][0] * v[2][1] + v[0][1] * v[1][1];
    });
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> pick(0, 2);
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
        const Point p = Point::NullaryExpr(4, [&] { return u(rng); });
        std::vector<Vec> v(3);
        for (auto& x : v) x = Vec::NullaryExpr(4, [&] { return u(rng); });
        const double before = f(p, v);
        const int i = pick(rng);
        const int j = (i + 1 + pick(rng) % 2) % 3;
        std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        if (f(p, v) != -before) ++bad;
    }
    return bad;
}

/// max |i_X(b ^ db) - b(X) db + b ^ i_X db| on the elliptic model, X = d/ds + 2 d/dt.
/// The model is passed as a plain callable so db goes through differencing.
inline double leibniz_defect() {
    const KForm b = KForm::from_callable(1, 3, [](const Point& p, std::span<const Vec> v) {
        return p[0] * v[0][1] - p[1] * v[0][0];
    });
    const Vec xv = (Vec(3) << 1.0, 2.0, 0.0).finished();
    const auto X = constant_field(xv);
    const KForm db = exterior_derivative(b);
    const KForm lhs = interior_product(X, wedge(b, db));
    const KForm tail = wedge(b, interior_product(X, db));
    double worst = 0.0;
    for (const auto& p : uniform_grid(3, -1.0, 1.0, 7))
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double rhs = b(p, {xv}) * db.on_basis(p, {i, j}) - tail.on_basis(p, {i, j});
                worst = std::max(worst, std::abs(lhs.on_basis(p, {i, j}) - rhs));
            }
    return worst;
}

inline std::vector<ReportRecord> cmd_exterior(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    const std::uint64_t seed = seed_from_env();
    out.push_back(run_check("exterior:antisymmetry", {{"trials", 1000}, {"seed", seed}}, expect(Cmp::eq, 0, "exact"),
                            [&] { return json(antisymmetry_failures(1000, seed)); }));
    out.push_back(run_check("exterior:dd_richardson", {{"h_fd", default_h_fd}}, expect(Cmp::ge, cfg.tol("richardson"), "exact"),
                            [&] { return json(dd_richardson().ratio()); }));
    out.push_back(run_check("exterior:leibniz", {{"model", "elliptic"}}, expect(Cmp::le, cfg.tol("leibniz"), "literature"),
                            [&] { return json(leibniz_defect()); }));
    return out;
}

/// Full pipeline in a fixed order.
inline std::vector<ReportRecord> cmd_report(const RunConfig& cfg) {
    std::vector<ReportRecord> out;
    detail::append(out, cmd_maslov(cfg));
    detail::append(out, cmd_index(cfg));
    detail::append(out, cmd_kernel(cfg));
    detail::append(out, cmd_bishop(cfg));
    detail::append(out, cmd_psh(cfg));
    detail::append(out, cmd_exterior(cfg));
    detail::append(out, cmd_contact(cfg));
    return out;
}

inline const std::map<std::string, std::function<std::vector<ReportRecord>(const RunConfig&)>>& commands() {
    static const std::map<std::string, std::function<std::vector<ReportRecord>(const RunConfig&)>> m{
        {"contact", cmd_contact}, {"frobenius", cmd_frobenius}, {"maslov", cmd_maslov}, {"index", cmd_index},
        {"bishop", cmd_bishop},   {"kernel", cmd_kernel},       {"psh", cmd_psh},       {"report", cmd_report},
    };
    return m;
}

/// Exit status of a run: 2 if any record failed, 0 otherwise.
inline int exit_code(const std::vector<ReportRecord>& rs) { return any_failed(rs) ? 2 : 0; }

}  // namespace mk::report
