#include "hogmt/frame.hpp"

#include <cmath>

#include "hogmt/error.hpp"

namespace hogmt {

SymbolFrame make_frame(GridShape shape, Eigen::VectorXcd data) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  if (data.size() != checked.size()) {
    fail("shape_mismatch", "frame of length " + std::to_string(data.size()) +
                               " does not fill grid " + checked.str());
  }
  for (Eigen::Index m = 0; m < data.size(); ++m) {
    if (!std::isfinite(data(m).real()) || !std::isfinite(data(m).imag())) {
      fail("non_finite",
           "frame entry " + std::to_string(m) + " is not finite");
    }
  }
  return SymbolFrame{checked, std::move(data)};
}

SymbolFrame zero_frame(GridShape shape) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  return SymbolFrame{checked, Eigen::VectorXcd::Zero(checked.size())};
}

}  // namespace hogmt
