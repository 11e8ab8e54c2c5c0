// hops_main.cpp — Command-line entry point: expand-bath, ensemble, spectrum, validate

#include <iostream>

#include <CLI11.hpp>

#include "hops/cli_commands.hpp"
#include "hops/version.hpp"

int main(int argc, char** argv) {
    using namespace hops::cli;
    CLI::App app{"Hierarchy of pure states solver for non-Markovian open quantum systems"};
    app.set_version_flag("--version", std::string(hops::kVersion));
    app.require_subcommand(1);

    Options opts;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Override ensemble.seed");
        sub->add_option("--workers", workers, "Override ensemble.workers")->check(CLI::PositiveNumber);
    };

    auto* expand = app.add_subcommand("expand-bath", "Expand the configured bath into exponential terms");
    auto* ensemble = app.add_subcommand("ensemble", "Run a trajectory ensemble and write density.csv, observables.csv");
    auto* spectrum = app.add_subcommand("spectrum", "Absorption spectrum from the z* = 0 linear trajectory");
    auto* validate = app.add_subcommand("validate", "Run a validation suite");
    std::string suite;
    validate->add_option("suite", suite, "noise | oracle | convergence")->required();
    for (auto* sub : {expand, ensemble, spectrum, validate}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }
    for (auto* sub : {expand, ensemble, spectrum, validate}) {
        if (sub->count("--seed")) opts.seed = seed;
        if (sub->count("--workers")) opts.workers = workers;
    }

    return run_guarded(
        [&]() {
            if (*expand) return cmd_expand_bath(opts, std::cerr);
            if (*ensemble) return cmd_ensemble(opts, std::cerr);
            if (*spectrum) return cmd_spectrum(opts, std::cerr);
            return cmd_validate(opts, suite, std::cerr);
        },
        std::cerr);
}
