#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nondecomp/estimator.hpp"
#include "nondecomp/observations.hpp"
#include "nondecomp/sampler.hpp"

namespace nondecomp {

/// Multi-label dataset with sparse features.
///
/// Text format: a header line "n d L", then one line per instance holding
/// comma-separated positive label indices, a space, and space-separated
/// "index:value" features. All indices are 0-based; an instance without
/// labels starts with the space.
struct SparseDataset {
    int n = 0, d = 0, L = 0;
    std::vector<std::vector<std::pair<int, double>>> features;
    std::vector<std::vector<int>> labels; // sorted

    void validate() const;
    Eigen::MatrixXd dense_features() const;
    /// n x L matrix of 0/1.
    Eigen::MatrixXd label_matrix() const;
};

SparseDataset parse_dataset(std::istream &in);
void write_dataset(const SparseDataset &data, std::ostream &out);
SparseDataset read_dataset_file(const std::string &path);
void write_dataset_file(const SparseDataset &data, const std::string &path);

/// Builds a dataset from dense features and a binary label matrix.
SparseDataset dataset_from_dense(const Eigen::MatrixXd &X, const Eigen::MatrixXd &Y);

/// Observes round(ratio * n * L) cells drawn by sample_omega; labels come
/// from Y (absent labels in a sparse dataset are 0).
ObservationSet mask_observations(const Eigen::MatrixXd &Y, double ratio,
                                 const OmegaDistribution &dist, std::uint64_t seed);
ObservationSet mask_observations(const SparseDataset &data, double ratio,
                                 const OmegaDistribution &dist, std::uint64_t seed);

/// Text model format, numbers at 17 significant digits:
///   nondecomp-model 1
///   kind dense|factored
///   dims <d> <L> [<k>]
///   theta <value>|none
///   gamma <value>|none
/// followed by the row-major rows of W (dense) or W1 then W2 (factored).
void save_model(const Model &model, std::ostream &out);
Model load_model(std::istream &in);
void save_model_file(const Model &model, const std::string &path);
Model load_model_file(const std::string &path);

struct ResultRow {
    std::string method;
    std::string metric_name;
    std::string split;
    double value = 0;
    double std_error = 0;
    std::string config_hash;
};

using ResultTable = std::vector<ResultRow>;

/// Columns: method,metric_name,split,value,stderr,config_hash.
void write_results_csv(const ResultTable &table, std::ostream &out,
                       bool header = true);
ResultTable parse_results_csv(std::istream &in);

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// SVG line chart, one polyline per series.
void emit_plot(const std::vector<PlotSeries> &series, std::string_view x_label,
               std::string_view y_label, std::ostream &out);

/// Stable 64-bit FNV-1a digest as 16 hex digits.
std::string stable_hash(std::string_view text);

/// "%.17g" formatting.
std::string format_double(double v);

} // namespace nondecomp
