#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "extlab/toml.hpp"

namespace extlab::harness {

// One experiment run: a summary (config, fits, goldens, violations) plus
// plot-ready CSV rows. Identical config + seeds give byte-identical rows.
struct ExperimentOutput {
    std::string name;
    nlohmann::json summary;
    std::string csv_header;
    std::vector<std::string> csv_rows;
    bool violation = false;
};

const std::vector<std::string>& experiment_names();
std::string describe(const std::string& name);

ExperimentOutput run_weighted_l2(const std::vector<double>& R_list, int n_seeds,
                                 std::uint64_t seed0);
ExperimentOutput run_weighted_lq(const std::vector<double>& R_list, int n_seeds,
                                 std::uint64_t seed0, double q);
ExperimentOutput run_mt(const std::vector<double>& R_list, int n_seeds, std::uint64_t seed0,
                        double p);
ExperimentOutput run_gauss(const std::vector<int>& q0_list, int A);
ExperimentOutput run_sigma_p(const std::vector<double>& R_list, const std::vector<double>& p_list);
ExperimentOutput run_maximal_schrodinger(const std::vector<double>& R_list, double q);
ExperimentOutput run_furstenberg(const std::vector<double>& deltas, int n_seeds,
                                 std::uint64_t seed0);

inline constexpr const char* kToolVersion = "0.1.0";

// dispatch on [experiment] name with per-experiment defaults
ExperimentOutput run_by_name(const std::string& name, const TomlFile& cfg);

// write summary.json, data.csv and manifest.json under dir (created);
// manifest carries command, config hash, seeds, tool version and timestamps
void write_artifacts(const ExperimentOutput& out, const std::string& dir,
                     const nlohmann::json& manifest);

}  // namespace extlab::harness
