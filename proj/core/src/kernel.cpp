#include "hogmt/kernel.hpp"

#include <cmath>

#include "hogmt/error.hpp"

namespace hogmt {

ChannelKernel make_kernel(GridShape out_shape, GridShape in_shape,
                          Eigen::MatrixXcd data) {
  GridShape out = make_grid(out_shape.num_users, out_shape.num_times);
  GridShape in = make_grid(in_shape.num_users, in_shape.num_times);
  if (data.rows() != out.size() || data.cols() != in.size()) {
    fail("shape_mismatch",
         "kernel matrix is " + std::to_string(data.rows()) + "x" +
             std::to_string(data.cols()) + " but grids " + out.str() +
             " -> " + in.str() + " require " + std::to_string(out.size()) +
             "x" + std::to_string(in.size()));
  }
  if (!data.allFinite()) {
    fail("non_finite", "kernel matrix contains non-finite entries");
  }
  return ChannelKernel{out, in, std::move(data)};
}

ChannelKernel identity_kernel(GridShape shape) {
  GridShape checked = make_grid(shape.num_users, shape.num_times);
  return ChannelKernel{
      checked, checked,
      Eigen::MatrixXcd::Identity(checked.size(), checked.size())};
}

SymbolFrame apply_kernel(const ChannelKernel& k, const SymbolFrame& x) {
  if (x.shape != k.in_shape) {
    fail("shape_mismatch", "kernel input grid " + k.in_shape.str() +
                               " but frame is " + x.shape.str());
  }
  return SymbolFrame{k.out_shape, k.data * x.data};
}

}  // namespace hogmt
