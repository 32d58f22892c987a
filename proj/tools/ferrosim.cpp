#include "ferro/commands.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>
#include <optional>

int main(int argc, char** argv)
{
    CLI::App app{"ferrosim: stochastic Galerkin ferrofluid simulator on the 3-torus"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::vector<std::string> files;

    auto common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("-c,--config", config_path, "experiment config file");
        if (need_config) c->required();
        sub->add_option("--seed", seed, "override run.seed");
        sub->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
        sub->add_option("-o,--out", out, "output directory (default: output.dir)");
    };
    auto* sim = app.add_subcommand("simulate", "run the ensemble and write trajectories");
    auto* ver = app.add_subcommand("verify", "run the property and estimate audits");
    auto* swp = app.add_subcommand("sweep", "scan lambda against the admissibility window");
    auto* ins = app.add_subcommand("inspect", "print trajectory or ledger file summaries");
    common(sim, true);
    common(ver, true);
    common(swp, true);
    common(ins, false);
    ins->add_option("files", files, "trajectory .bin or ledger .csv files")->required();

    CLI11_PARSE(app, argc, argv);
    if (threads) omp_set_num_threads(*threads);

    try {
        std::optional<ferro::ExperimentConfig> cfg;
        if (!config_path.empty()) {
            cfg = ferro::load_config(config_path);
            if (seed) cfg->run.seed = *seed;
        }
        const std::string dir = out ? *out : (cfg ? cfg->output_dir : std::string("out"));
        if (*sim) return ferro::cmd_simulate(*cfg, dir, std::cout);
        if (*ver) return ferro::cmd_verify(*cfg, dir, std::cout);
        if (*swp) return ferro::cmd_sweep(*cfg, dir, std::cout);
        return ferro::cmd_inspect(files, cfg ? &*cfg : nullptr, std::cout);
    } catch (const ferro::ConfigError& e) {
        std::cerr << "invalid config:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
