// extlab: seeded extension-operator experiments from TOML configs.
// Subcommands: run, verify, list, describe.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extlab/acceptance.hpp"
#include "extlab/harness.hpp"
#include "extlab/parallel.hpp"
#include "extlab/toml.hpp"

namespace {

std::string artifact_root() {
    if (const char* env = std::getenv("EXTLAB_OUT")) return env;
    return "results";
}

std::string timestamp_dir() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%S", std::gmtime(&t));
    return buf;
}

int do_run(const std::string& config_path, bool list_only, const std::string& out_override) {
    if (list_only) {
        for (const auto& n : extlab::harness::experiment_names()) std::cout << n << '\n';
        return 0;
    }
    extlab::TomlFile cfg;
    try {
        cfg = extlab::TomlFile::parse_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        const std::string name = cfg.get_string("experiment.name");
        const std::string started = timestamp_dir();
        const auto out = extlab::harness::run_by_name(name, cfg);
        const std::string dir =
            (out_override.empty() ? artifact_root() : out_override) + "/" + name + "/" + started;
        nlohmann::json manifest;
        manifest["command"] = "run " + config_path;
        manifest["config"] = config_path;
        manifest["config_hash"] = cfg.stable_hash();
        manifest["seed0"] = cfg.get_int_or("experiment.seed0", 1);
        manifest["seeds"] = cfg.get_int_or("experiment.seeds", 8);
        manifest["started"] = started;
        manifest["finished"] = timestamp_dir();
        extlab::harness::write_artifacts(out, dir, manifest);
        std::cout << "artifacts: " << dir << '\n';
        if (out.violation) {
            std::cerr << "non-violation assertion failed for " << name << '\n';
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int do_verify(const std::string& suite, const std::string& out_override) {
    const std::string dir = (out_override.empty() ? artifact_root() : out_override) + "/verify";
    std::vector<extlab::acceptance::CriterionResult> results;
    try {
        results = extlab::acceptance::run_suite(
            suite == "full" ? extlab::acceptance::Suite::full : extlab::acceptance::Suite::fast,
            std::cout, dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    bool all_pass = true;
    std::string first_fail;
    for (const auto& r : results) {
        if (!r.pass && first_fail.empty()) first_fail = r.name;
        all_pass = all_pass && r.pass;
    }
    if (!all_pass) {
        std::cerr << "FAILED criterion: " << first_fail << '\n';
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extension-operator numerical laboratory"};
    app.require_subcommand(1);

    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (default: hardware)");

    std::string config_path, out_override;
    bool list_only = false;
    auto* run = app.add_subcommand("run", "run an experiment from a TOML config");
    run->add_option("config", config_path, "config file");
    run->add_flag("--list", list_only, "print experiment names");
    run->add_option("--out", out_override, "artifact root (overrides EXTLAB_OUT)");

    std::string suite = "fast";
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    verify->add_option("--out", out_override, "artifact root");

    auto* list = app.add_subcommand("list", "print experiment names");

    std::string describe_name;
    auto* describe = app.add_subcommand("describe", "describe an experiment");
    describe->add_option("experiment", describe_name, "experiment name")->required();

    CLI11_PARSE(app, argc, argv);
    if (jobs > 0) extlab::set_parallel_jobs(jobs);

    if (run->parsed()) {
        if (!list_only && config_path.empty()) {
            std::cerr << "run: config file required (or --list)\n";
            return 1;
        }
        return do_run(config_path, list_only, out_override);
    }
    if (verify->parsed()) return do_verify(suite, out_override);
    if (list->parsed()) {
        for (const auto& n : extlab::harness::experiment_names()) std::cout << n << '\n';
        return 0;
    }
    if (describe->parsed()) {
        try {
            std::cout << extlab::harness::describe(describe_name) << '\n';
        } catch (const std::exception& e) {
            std::cerr << e.what() << '\n';
            return 1;
        }
        return 0;
    }
    return 0;
}
