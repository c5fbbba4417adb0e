#include "nondecomp/observations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nondecomp {

ObservationSet::ObservationSet(int n, int L, std::vector<Entry> entries)
    : n_(n), L_(L), entries_(std::move(entries)) {
    if (n < 1 || L < 1)
        throw InputError("observation set dimensions must be positive");
    for (const auto &e : entries_) {
        if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= L)
            throw InputError("observation (" + std::to_string(e.row) + "," +
                             std::to_string(e.col) + ") outside " +
                             std::to_string(n) + "x" + std::to_string(L));
        if (!std::isfinite(e.y))
            throw InputError("non-finite observed label");
    }
    std::vector<Cell> sorted = cells();
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("duplicate observation index");
}

std::vector<Cell> ObservationSet::cells() const {
    std::vector<Cell> out;
    out.reserve(entries_.size());
    for (const auto &e : entries_)
        out.push_back({e.row, e.col});
    return out;
}

BinaryLabels ObservationSet::binary_labels() const {
    BinaryLabels out;
    out.reserve(entries_.size());
    for (const auto &e : entries_)
        out.push_back(e.y >= 0.5 ? 1 : 0);
    return out;
}

} // namespace nondecomp
