#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dloc_cli/modes.hpp"

int main(int argc, char** argv) {
    using namespace dloc::cli;
    CLI::App app{"Decaying-disorder lattice simulator and bound checker"};
    app.set_version_flag("--version", artifact_version());
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = 1;
    std::uint64_t seed_base = 0;
    int realizations = 0;
    for (const auto& mode : known_modes()) {
        auto* sub = app.add_subcommand(mode);
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 1024));
        sub->add_option("--seed-base", seed_base, "first disorder seed (overrides the config)");
        sub->add_option("--realizations", realizations, "number of seeds (overrides the config)")->check(CLI::NonNegativeNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string mode = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = load_config(config_path);
            if (cfg.mode != mode) throw ConfigError("mode", "config says '" + cfg.mode + "' but subcommand is '" + mode + "'");
        } else {
            cfg.mode = mode;
        }
        if (sub->count("--out")) cfg.output = out_dir;
        if (sub->count("--seed-base")) cfg.seed_base = seed_base;
        if (sub->count("--realizations")) cfg.realizations = realizations;
        validate(cfg);
    } catch (const ConfigError& e) {
        nlohmann::json err{{"status", "config-error"}, {"field", e.field()}, {"reason", e.what()}};
        std::cerr << err.dump() << '\n';
        return 2;
    }

    try {
        const RunManifest m = run(cfg, cfg.output, workers);
        for (const auto& [name, sha] : m.files) std::cout << cfg.output << '/' << name << "  " << sha << '\n';
        if (!m.checks_pass) {
            nlohmann::json rep{{"status", "check-failure"}, {"failures", m.to_json()["failures"]}};
            std::cerr << rep.dump() << '\n';
            return 1;
        }
        std::cout << "checks passed\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << nlohmann::json{{"status", "config-error"}, {"field", e.field()}, {"reason", e.what()}}.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"status", "error"}, {"reason", e.what()}}.dump() << '\n';
        return 1;
    }
}
