// mk: run a verification command and emit its records.
//
//   mk <command> [--config PATH] [--n INT] [--s FLOAT...] [--K INT]
//                [--samples INT] [--format json_lines|csv] [--out PATH]

#include "mk/cli_report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace rep = mk::report;

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for Legendrian open books and holomorphic disks"};
    app.set_help_all_flag("--help-all");

    std::string command;
    std::string config_path;
    int n = 0, K = 0, samples = 0;
    std::vector<double> s_values;
    std::string format, out_path;

    std::vector<std::string> names;
    for (const auto& [name, fn] : rep::commands()) names.push_back(name);
    app.add_option("command", command, "Check to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "Config file (key = value with [sections])")->check(CLI::ExistingFile);
    auto* n_opt = app.add_option("--n", n, "Half dimension of the ambient manifold");
    auto* s_opt = app.add_option("--s", s_values, "Bishop disk heights")->expected(1, -1);
    auto* k_opt = app.add_option("--K", K, "Fourier truncation order");
    auto* samples_opt = app.add_option("--samples", samples, "Boundary samples");
    auto* format_opt = app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json_lines", "csv"}));
    auto* out_opt = app.add_option("--out", out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    rep::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw rep::ConfigError("cannot open " + config_path);
            cfg = rep::parse_config(in);
        }
        if (*n_opt) cfg.n = n;
        if (*s_opt) cfg.s_values = s_values;
        if (*k_opt) cfg.K = K;
        if (*samples_opt) cfg.samples = samples;
        if (*format_opt) cfg.format = format;
        if (*out_opt) cfg.output_path = out_path;
        cfg.validate();
        rep::seed_from_env();
    } catch (const rep::ConfigError& e) {
        std::cerr << "mk: config error: " << e.what() << '\n';
        return 1;
    }

    const auto records = rep::commands().at(command)(cfg);
    if (cfg.output_path.empty()) {
        rep::write_records(std::cout, records, cfg.format);
    } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
            std::cerr << "mk: cannot write " << cfg.output_path << '\n';
            return 1;
        }
        rep::write_records(out, records, cfg.format);
    }
    return rep::exit_code(records);
}
