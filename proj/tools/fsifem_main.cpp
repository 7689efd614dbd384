// Command line front end: one subcommand per mode family, configuration from
// a JSON file, artifacts written to the output directory.

#include "fsifem/log.hpp"
#include "fsifem/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"coupled Stokes/wave and heat/wave finite element experiments"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config;
        std::string out;
        unsigned long long seed = 0;
        bool seed_given = false;
        int jobs = 1;
    };

    // subcommand name -> config mode hint
    const std::pair<const char*, const char*> kinds[] = {
        {"run", "run"},
        {"convergence", "convergence"},
        {"ritz", "ritz"},
        {"verify-sources", "verify_sources"},
        {"self-convergence", "self_convergence"},
    };

    std::map<std::string, SubArgs> args;
    std::map<std::string, std::string> hints;
    for (const auto& [name, hint] : kinds) {
        CLI::App* sub = app.add_subcommand(name);
        SubArgs& a = args[name];
        hints[name] = hint;
        sub->add_option("--config", a.config, "JSON configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", a.out, "output directory (overrides the config)");
        sub->add_option("--seed", a.seed, "sampling seed (overrides the config)")
            ->each([&a](const std::string&) { a.seed_given = true; });
        sub->add_option("--jobs", a.jobs, "parallel sweep members")->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const SubArgs& a = args[name];
    try {
        fsifem::RunConfig cfg = fsifem::parse_config(a.config, hints[name]);
        if (!a.out.empty()) cfg.out_dir = a.out;
        if (a.seed_given) cfg.seed = a.seed;
        fsifem::ExecOutcome outcome = fsifem::execute(cfg, a.jobs);
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " (" << outcome.summary_path << ")\n";
        return outcome.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
