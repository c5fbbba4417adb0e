#include "nondecomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nondecomp {
namespace {

struct GroupRatio {
    double value = 0;
    bool degenerate = false;
};

GroupRatio group_ratio(const MetricSpec &s, const ConfusionAggregate &c) {
    const double num =
        s.a0 + s.a11 * c.tp + s.a01 * c.fp + s.a10 * c.fn + s.a00 * c.tn;
    const double den =
        s.b0 + s.b11 * c.tp + s.b01 * c.fp + s.b10 * c.fn + s.b00 * c.tn;
    if (den < s.denominator_floor)
        return {0.0, true};
    return {num / den, false};
}

struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
    ConfusionAggregate aggregate() const {
        return ConfusionAggregate::from_counts(tp, fp, fn, tn);
    }
    void add(std::uint8_t yhat, std::uint8_t y) {
        if (yhat && y)
            ++tp;
        else if (yhat)
            ++fp;
        else if (y)
            ++fn;
        else
            ++tn;
    }
    /// Entry switches from predicted negative to predicted positive.
    void flip_to_positive(std::uint8_t y) {
        if (y) {
            --fn;
            ++tp;
        } else {
            --tn;
            ++fp;
        }
    }
};

void check_same_length(std::size_t a, std::size_t b) {
    if (a != b)
        throw InputError("prediction and label vectors differ in length");
    if (a == 0)
        throw InputError("empty observation set");
}

int group_of(const Cell &c, GroupBy by) { return by == GroupBy::row ? c.row : c.col; }

} // namespace

ConfusionAggregate ConfusionAggregate::from_counts(std::size_t tp, std::size_t fp,
                                                   std::size_t fn, std::size_t tn) {
    ConfusionAggregate a;
    a.count = tp + fp + fn + tn;
    if (a.count == 0)
        return a;
    const auto n = static_cast<double>(a.count);
    a.tp = static_cast<double>(tp) / n;
    a.fp = static_cast<double>(fp) / n;
    a.fn = static_cast<double>(fn) / n;
    a.tn = static_cast<double>(tn) / n;
    return a;
}

void MetricSpec::validate() const {
    for (double v : {a0, a11, a01, a10, a00, b0, b11, b01, b10, b00})
        if (!std::isfinite(v))
            throw InputError("metric '" + name + "' has a non-finite coefficient");
    if (!(denominator_floor > 0))
        throw InputError("metric denominator_floor must be positive");
}

MetricSpec metric_by_name(std::string_view name) {
    MetricSpec s;
    s.name = std::string(name);
    if (name == "micro_f1" || name == "instance_f1" || name == "macro_f1") {
        s.a11 = 2;
        s.b11 = 2;
        s.b01 = 1;
        s.b10 = 1;
        s.mode = name == "micro_f1"      ? Averaging::micro
                 : name == "instance_f1" ? Averaging::instance
                                         : Averaging::macro;
    } else if (name == "accuracy") {
        s.a0 = 1;
        s.a01 = -1;
        s.a10 = -1;
        s.b0 = 1;
    } else if (name == "jaccard") {
        s.a11 = 1;
        s.b11 = 1;
        s.b01 = 1;
        s.b10 = 1;
    } else {
        throw InputError("unknown metric '" + std::string(name) + "'");
    }
    return s;
}

std::vector<std::string> metric_names() {
    return {"micro_f1", "instance_f1", "macro_f1", "accuracy", "jaccard"};
}

ConfusionAggregate confusion_micro(std::span<const std::uint8_t> yhat,
                                   std::span<const std::uint8_t> y) {
    check_same_length(yhat.size(), y.size());
    Counts c;
    for (std::size_t k = 0; k < y.size(); ++k)
        c.add(yhat[k], y[k]);
    return c.aggregate();
}

GroupedConfusion confusion_grouped(std::span<const std::uint8_t> yhat,
                                   std::span<const std::uint8_t> y,
                                   std::span<const Cell> cells, GroupBy by,
                                   std::size_t num_groups) {
    check_same_length(yhat.size(), y.size());
    if (cells.size() != y.size())
        throw InputError("cell list and label vector differ in length");
    std::vector<Counts> counts(num_groups);
    for (std::size_t k = 0; k < y.size(); ++k) {
        const int g = group_of(cells[k], by);
        if (g < 0 || static_cast<std::size_t>(g) >= num_groups)
            throw InputError("cell index out of range for grouping");
        counts[g].add(yhat[k], y[k]);
    }
    GroupedConfusion out;
    for (std::size_t g = 0; g < num_groups; ++g) {
        if (counts[g].total() == 0) {
            ++out.empty_groups;
            continue;
        }
        out.groups.push_back(counts[g].aggregate());
        out.group_ids.push_back(static_cast<int>(g));
    }
    return out;
}

MetricValue eval_metric(const MetricSpec &spec, const ConfusionAggregate &conf) {
    spec.validate();
    if (spec.mode != Averaging::micro)
        throw InputError("metric '" + spec.name +
                         "' is group-averaged; pass per-group aggregates");
    const auto r = group_ratio(spec, conf);
    return {r.value, r.degenerate, r.degenerate ? 1u : 0u};
}

MetricValue eval_metric(const MetricSpec &spec,
                        std::span<const ConfusionAggregate> groups) {
    spec.validate();
    if (spec.mode == Averaging::micro)
        throw InputError("metric '" + spec.name +
                         "' is micro-averaged; pass a single aggregate");
    if (groups.empty())
        throw InputError("empty observation set");
    MetricValue out;
    double sum = 0;
    for (const auto &g : groups) {
        const auto r = group_ratio(spec, g);
        if (r.degenerate)
            ++out.degenerate_groups;
        sum += r.value;
    }
    out.value = sum / static_cast<double>(groups.size());
    out.degenerate = out.degenerate_groups > 0;
    return out;
}

MetricValue evaluate_labeling(const MetricSpec &spec,
                              std::span<const std::uint8_t> yhat,
                              std::span<const std::uint8_t> y,
                              std::span<const Cell> cells, int n_rows,
                              int n_cols) {
    if (spec.mode == Averaging::micro)
        return eval_metric(spec, confusion_micro(yhat, y));
    const bool by_row = spec.mode == Averaging::instance;
    const auto grouped =
        confusion_grouped(yhat, y, cells, by_row ? GroupBy::row : GroupBy::col,
                          static_cast<std::size_t>(by_row ? n_rows : n_cols));
    return eval_metric(spec, grouped.groups);
}

BinaryLabels apply_threshold(std::span<const double> z, double theta) {
    BinaryLabels out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (!std::isfinite(z[k]))
            throw InputError("non-finite score at position " + std::to_string(k));
        out[k] = z[k] >= theta ? 1 : 0;
    }
    return out;
}

double sentinel_above(double max_score) {
    const double s = max_score + std::max(1.0, std::abs(max_score));
    return std::isfinite(s) ? s
                            : std::nextafter(max_score,
                                             std::numeric_limits<double>::infinity());
}

ThresholdResult threshold_sweep(const MetricSpec &spec,
                                std::span<const double> z,
                                std::span<const std::uint8_t> y,
                                std::span<const Cell> cells, int n_rows,
                                int n_cols) {
    spec.validate();
    check_same_length(z.size(), y.size());
    for (std::size_t k = 0; k < z.size(); ++k)
        if (!std::isfinite(z[k]))
            throw InputError("non-finite score at position " + std::to_string(k));

    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });

    const bool micro = spec.mode == Averaging::micro;
    const GroupBy by = spec.mode == Averaging::instance ? GroupBy::row : GroupBy::col;
    std::size_t num_groups = 1;
    std::vector<int> group(z.size(), 0);
    if (!micro) {
        if (cells.size() != z.size())
            throw InputError("cell list and score vector differ in length");
        num_groups = static_cast<std::size_t>(by == GroupBy::row ? n_rows : n_cols);
        for (std::size_t k = 0; k < z.size(); ++k) {
            group[k] = group_of(cells[k], by);
            if (group[k] < 0 || static_cast<std::size_t>(group[k]) >= num_groups)
                throw InputError("cell index out of range for grouping");
        }
    }

    // Start from the all-negative labeling (the sentinel threshold).
    std::vector<Counts> counts(num_groups);
    for (std::size_t k = 0; k < z.size(); ++k)
        counts[group[k]].add(0, y[k]);
    std::vector<int> active;
    for (std::size_t g = 0; g < num_groups; ++g)
        if (counts[g].total() > 0)
            active.push_back(static_cast<int>(g));
    std::vector<GroupRatio> cached(num_groups);
    for (int g : active)
        cached[g] = group_ratio(spec, counts[g].aggregate());

    auto current_value = [&]() -> MetricValue {
        if (micro) {
            const auto &r = cached[0];
            return {r.value, r.degenerate, r.degenerate ? 1u : 0u};
        }
        MetricValue v;
        double sum = 0;
        for (int g : active) {
            if (cached[g].degenerate)
                ++v.degenerate_groups;
            sum += cached[g].value;
        }
        v.value = sum / static_cast<double>(active.size());
        v.degenerate = v.degenerate_groups > 0;
        return v;
    };

    ThresholdResult best;
    best.theta_hat = sentinel_above(z[order.front()]);
    MetricValue v = current_value();
    best.value = v.value;
    best.degenerate = v.degenerate;
    best.candidates_evaluated = 1;
    double worst = v.value;
    const double sentinel_value = v.value;

    std::vector<int> touched;
    std::size_t pos = 0;
    while (pos < order.size()) {
        const double theta = z[order[pos]];
        touched.clear();
        for (; pos < order.size() && z[order[pos]] == theta; ++pos) {
            const std::size_t k = order[pos];
            counts[group[k]].flip_to_positive(y[k]);
            touched.push_back(group[k]);
        }
        for (int g : touched)
            cached[g] = group_ratio(spec, counts[g].aggregate());
        v = current_value();
        ++best.candidates_evaluated;
        worst = std::min(worst, v.value);
        if (v.value >= best.value) {
            best.value = v.value;
            best.theta_hat = theta;
            best.degenerate = v.degenerate;
        }
    }
    if (worst == best.value) {
        best.theta_hat = sentinel_above(z[order.front()]);
        best.value = sentinel_value;
        best.degenerate = true;
    }
    return best;
}

} // namespace nondecomp
