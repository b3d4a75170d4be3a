#pragma once

#include <Eigen/Dense>

#include "hogmt/grid.hpp"

namespace hogmt {

// One frame of complex symbols over a (user, time) grid, stored flat in
// grid order (m = u * T + t). Frames are value types: operations return
// new frames instead of mutating inputs, so they are safe to share
// across threads.
struct SymbolFrame {
  GridShape shape;
  Eigen::VectorXcd data;  // length shape.size()

  std::complex<double> at(int u, int t) const {
    return data(flatten(u, t, shape));
  }
};

// Validates that data length matches the grid and every entry is finite;
// throws Error("shape_mismatch") / Error("non_finite").
SymbolFrame make_frame(GridShape shape, Eigen::VectorXcd data);

SymbolFrame zero_frame(GridShape shape);

}  // namespace hogmt
