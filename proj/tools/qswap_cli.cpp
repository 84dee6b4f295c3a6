// qswap - command-line front end.
//
//   qswap spectrum|efficiency-map|asymmetric-map|consistency|oracle
//         --config <path> --out <dir> [--seed <u64>] [--threads <n>]

#include "qswap/commands.hpp"
#include "qswap/parallel.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"Quantum fluctuation swapping in a cavity with a coherent Lambda medium"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = qswap::default_thread_count();

    const std::map<std::string, std::string> help{
        {"spectrum", "output quadrature spectra over the omega axis"},
        {"efficiency-map", "swap efficiency over (omega, cooperativity)"},
        {"asymmetric-map", "swap efficiency over (Omega1, Omega2) at analysis_omega"},
        {"consistency", "numeric against closed-form spectra"},
        {"oracle", "time-domain Monte Carlo check of the spectra"}};
    for (const auto& name : qswap::commands::command_names()) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (default: the config's \"output\")");
        sub->add_option("--seed", seed, "random seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (default: QSWAP_THREADS or all cores)")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : qswap::commands::kConfigFailure;
    }

    const auto* sub = app.get_subcommands().front();
    qswap::commands::CommandOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    if (sub->count("--seed") > 0) opt.seed = seed;
    return qswap::commands::run_command_file(sub->get_name(), config_path, opt, std::cerr);
}
