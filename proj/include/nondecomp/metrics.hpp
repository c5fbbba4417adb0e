#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nondecomp/types.hpp"

namespace nondecomp {

/// Binary labels, stored as 0/1.
using BinaryLabels = std::vector<std::uint8_t>;

enum class Averaging { micro, instance, macro };
enum class GroupBy { row, col };

/// Confusion fractions of a group of observed entries.
struct ConfusionAggregate {
    double tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t count = 0;

    static ConfusionAggregate from_counts(std::size_t tp, std::size_t fp,
                                          std::size_t fn, std::size_t tn);
};

struct GroupedConfusion {
    std::vector<ConfusionAggregate> groups; // non-empty groups, ascending id
    std::vector<int> group_ids;
    std::size_t empty_groups = 0;
};

/// Linear-fractional metric
///   (a0 + a11 tp + a01 fp + a10 fn + a00 tn) / (b0 + b11 tp + b01 fp + b10 fn + b00 tn)
/// averaged over all entries (micro), per row (instance) or per column (macro).
struct MetricSpec {
    std::string name;
    double a0 = 0, a11 = 0, a01 = 0, a10 = 0, a00 = 0;
    double b0 = 0, b11 = 0, b01 = 0, b10 = 0, b00 = 0;
    Averaging mode = Averaging::micro;
    double denominator_floor = 1e-12;

    void validate() const;
};

/// Registry: micro_f1, instance_f1, macro_f1, accuracy, jaccard.
MetricSpec metric_by_name(std::string_view name);
std::vector<std::string> metric_names();

struct MetricValue {
    double value = 0;
    /// Some group had denominator below the floor and contributed 0.
    bool degenerate = false;
    std::size_t degenerate_groups = 0;
};

ConfusionAggregate confusion_micro(std::span<const std::uint8_t> yhat,
                                   std::span<const std::uint8_t> y);

GroupedConfusion confusion_grouped(std::span<const std::uint8_t> yhat,
                                   std::span<const std::uint8_t> y,
                                   std::span<const Cell> cells, GroupBy by,
                                   std::size_t num_groups);

/// Micro mode only.
MetricValue eval_metric(const MetricSpec &spec, const ConfusionAggregate &conf);
/// Instance/macro modes: mean of per-group ratios.
MetricValue eval_metric(const MetricSpec &spec,
                        std::span<const ConfusionAggregate> groups);

/// Computes confusion aggregates according to spec.mode and evaluates.
MetricValue evaluate_labeling(const MetricSpec &spec,
                              std::span<const std::uint8_t> yhat,
                              std::span<const std::uint8_t> y,
                              std::span<const Cell> cells, int n_rows,
                              int n_cols);

/// yhat_i = [z_i >= theta].
BinaryLabels apply_threshold(std::span<const double> z, double theta);

struct ThresholdResult {
    double theta_hat = 0;
    double value = 0;
    std::size_t candidates_evaluated = 0;
    /// Chosen labeling hit a degenerate denominator, or the sweep was flat.
    bool degenerate = false;
};

/// Maximizes the metric over every labeling reachable by a shared threshold.
/// Candidates are the distinct scores plus a sentinel above the maximum; ties
/// resolve to the smallest threshold. If every candidate scores the same the
/// sentinel (predict nothing) is returned and the result is flagged degenerate.
ThresholdResult threshold_sweep(const MetricSpec &spec,
                                std::span<const double> z,
                                std::span<const std::uint8_t> y,
                                std::span<const Cell> cells, int n_rows,
                                int n_cols);

/// Threshold used for the "nothing is positive" candidate.
double sentinel_above(double max_score);

} // namespace nondecomp
