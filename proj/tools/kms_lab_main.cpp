#include <iostream>

#include <CLI11.hpp>

#include "kmslab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"kms-lab: numerical verification suites for modular theory, "
                 "trace inequalities and perturbed thermal states"};
    app.require_subcommand(1);

    std::string config_path, suite_override, out_override;
    std::uint64_t seed_override = 0;
    bool have_seed = false;

    CLI::App* run = app.add_subcommand("run", "run a verification suite from a config file");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--suite", suite_override, "override the configured suite");
    run->add_option("--seed", seed_override, "override the configured seed")
        ->each([&](const std::string&) { have_seed = true; });
    run->add_option("--out", out_override, "override the output directory");

    CLI::App* examples =
        app.add_subcommand("examples", "print the built-in step-function examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (examples->parsed()) {
            std::cout << kmslab::builtin_example_definitions().dump(2) << std::endl;
            return 0;
        }
        kmslab::ExperimentConfig cfg = kmslab::load_config(config_path);
        if (!suite_override.empty()) cfg.suite = kmslab::suite_from_name(suite_override);
        if (have_seed) cfg.seed = seed_override;
        if (!out_override.empty()) cfg.output_path = out_override;

        kmslab::SuiteReport report = kmslab::run_suite(cfg);
        std::cout << "suite " << kmslab::suite_name(cfg.suite) << ": " << report.passed
                  << " passed, " << report.failed << " failed, " << report.inconclusive
                  << " inconclusive (" << report.wall_seconds << " s)" << std::endl;
        std::cout << "report: " << cfg.output_path << "/report.csv" << std::endl;
        return report.failed > 0 ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
