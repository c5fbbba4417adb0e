#pragma once

#include <cstddef>
#include <vector>

#include "nondecomp/metrics.hpp"
#include "nondecomp/types.hpp"

namespace nondecomp {

/// Observed entries of an n x L label matrix. Labels are 0/1 for the binary
/// models and real-valued for the Gaussian model.
class ObservationSet {
  public:
    struct Entry {
        int row = 0;
        int col = 0;
        double y = 0;
    };

    ObservationSet(int n, int L, std::vector<Entry> entries);

    int rows() const { return n_; }
    int cols() const { return L_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry> &entries() const { return entries_; }
    const Entry &operator[](std::size_t k) const { return entries_[k]; }

    std::vector<Cell> cells() const;
    /// Labels as 0/1; any y >= 0.5 counts as positive.
    BinaryLabels binary_labels() const;

  private:
    int n_;
    int L_;
    std::vector<Entry> entries_;
};

} // namespace nondecomp
