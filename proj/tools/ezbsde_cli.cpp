// command-line front end: solve / sweep / verify / plotdata

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ezbsde/runner.hpp"

namespace {

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string tok = csv.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const char* s = tok.c_str();
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw std::runtime_error("--values: '" + tok +
                                     "' is not a number");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "constrained consumption-investment solver "
        "(recursive utility, quadratic BSDE with projection driver)"};
    app.require_subcommand(1);

    std::string cfg_path, plots_dir, param, values_csv;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths, steps;
    std::optional<std::string> outdir;
    bool generate = false;
    int rc = 0;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "override mc.seed");
        cmd->add_option("--paths", paths, "override mc.M (number of paths)");
        cmd->add_option("--steps", steps, "override grid.N (time steps)");
        cmd->add_option("--out", outdir, "override run.out (output directory)");
    };
    auto overrides = [&] {
        ezbsde::RunOverrides ov;
        ov.seed = seed;
        ov.paths = paths;
        ov.steps = steps;
        ov.out = outdir;
        return ov;
    };
    auto load = [&] {
        ezbsde::ExperimentConfig cfg = ezbsde::load_config(cfg_path);
        ezbsde::apply_overrides(cfg, overrides());
        return cfg;
    };

    CLI::App* solve = app.add_subcommand(
        "solve", "solve the BSDE, extract the optimal strategy, verify bounds");
    solve->add_option("config", cfg_path, "experiment config")->required();
    add_overrides(solve);
    solve->callback([&] { rc = ezbsde::run_solve(load()); });

    CLI::App* sweep = app.add_subcommand(
        "sweep", "re-solve over a list of parameter values");
    sweep->add_option("config", cfg_path, "experiment config")->required();
    sweep->add_option("--param", param,
                      "pi_upper / pi_lower / gamma / psi")->required();
    sweep->add_option("--values", values_csv, "comma-separated list")
        ->required();
    add_overrides(sweep);
    sweep->callback([&] {
        rc = ezbsde::run_sweep(load(), param, parse_value_list(values_csv));
    });

    CLI::App* verify = app.add_subcommand(
        "verify", "evaluate parameter conditions and a priori bounds");
    verify->add_option("config", cfg_path, "experiment config")->required();
    add_overrides(verify);
    verify->callback([&] { rc = ezbsde::run_verify(load()); });

    CLI::App* plot = app.add_subcommand(
        "plotdata", "assemble per-figure data files from run artifacts");
    plot->add_option("dir", plots_dir, "artifacts directory")->required();
    plot->add_flag("--generate", generate,
                   "perform the runs first (otherwise they must exist)");
    add_overrides(plot);
    plot->callback([&] {
        rc = ezbsde::emit_plotdata(plots_dir, generate, paths.value_or(20000),
                                   steps.value_or(50), seed.value_or(42));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}
