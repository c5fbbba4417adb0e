#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nondecomp/estimator.hpp"
#include "nondecomp/sampler.hpp"

namespace nondecomp {

/// Flat "key = value" configuration. '#' starts a comment; lists are
/// comma-separated.
class ConfigFile {
  public:
    static ConfigFile parse(std::istream &in);
    static ConfigFile from_file(const std::string &path);

    void set(std::string key, std::string value);
    /// Accepts "--key=value".
    void apply_override(std::string_view arg);

    bool has(const std::string &key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string> &values() const { return values_; }

    /// Sorted "key=value" lines.
    std::string canonical() const;
    std::string hash() const;

  private:
    std::map<std::string, std::string> values_;
};

/// Typed view of a configuration for one task.
struct ExperimentConfig {
    std::string task;
    std::uint64_t seed = 1;

    SyntheticSpec synthetic;
    int n_test = 0;
    std::optional<std::string> dataset;
    std::optional<std::string> test_dataset;

    double ratio = 0.2;
    std::vector<double> ratios{0.05, 0.1, 0.2, 0.3, 0.5};
    std::vector<std::size_t> omega_sizes;

    std::string solver = "alt_min";
    std::string loss = "logistic";
    double pu_rho = 0.0;
    std::optional<double> lambda;
    double lambda_c = 1.0;
    RegularizerMode regularizer = RegularizerMode::param_norm;
    std::optional<double> gamma_clip;
    int max_iters = 500;
    double rel_tol = 1e-6;
    int k = 0; // 0 = round(0.4 L) clamped to [1, min(d, L)]
    double ridge = 1e-4;

    std::string metric = "micro_f1";
    std::vector<std::string> metrics{"micro_f1", "accuracy"};
    int repeats = 5;

    std::string out_dir = ".";
    std::string model_path;
    std::string trace_path;
    std::string results_path;
    bool append = false;

    std::string config_hash;

    static ExperimentConfig from(const ConfigFile &file, std::string task);

    SolverConfig solver_config(std::size_t num_observations) const;
    int rank_for(int d, int L) const;
};

std::vector<std::string> task_names();

} // namespace nondecomp
