#pragma once

#include <stdexcept>
#include <string>

namespace nondecomp {

/// A (row, column) position in an n x L label matrix.
struct Cell {
    int row = 0;
    int col = 0;

    friend bool operator==(const Cell &, const Cell &) = default;
    friend auto operator<=>(const Cell &, const Cell &) = default;
};

/// Bad input: shapes, ranges, malformed files, unknown names.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (divergence, SVD failure, NaN objective).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace nondecomp
