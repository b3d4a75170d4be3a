#pragma once

#include <Eigen/Dense>

#include "hogmt/frame.hpp"
#include "hogmt/grid.hpp"

namespace hogmt {

// Discrete channel kernel K[(u,t), (u',t')] stored as its unfolding: a
// dense (out.size() x in.size()) complex matrix whose row index flattens
// the output grid point and whose column index flattens the input grid
// point. Output sample: r[u,t] = sum_{u',t'} K[(u,t),(u',t')] * x[u',t'].
struct ChannelKernel {
  GridShape out_shape;
  GridShape in_shape;
  Eigen::MatrixXcd data;  // out_shape.size() rows, in_shape.size() cols

  std::complex<double> at(int u, int t, int u_in, int t_in) const {
    return data(flatten(u, t, out_shape), flatten(u_in, t_in, in_shape));
  }
};

// Validates matrix dimensions against the grids and rejects non-finite
// entries; throws Error("shape_mismatch") / Error("non_finite").
ChannelKernel make_kernel(GridShape out_shape, GridShape in_shape,
                          Eigen::MatrixXcd data);

ChannelKernel identity_kernel(GridShape shape);

// r = K x. Throws Error("shape_mismatch") if x.shape != K.in_shape.
SymbolFrame apply_kernel(const ChannelKernel& k, const SymbolFrame& x);

// Inner product over flat frames: <a, b> = sum_m a[m] * conj(b[m]).
inline std::complex<double> inner(const Eigen::VectorXcd& a,
                                  const Eigen::VectorXcd& b) {
  return b.dot(a);  // Eigen's dot conjugates its object, so b.dot(a) = b^H a
}

}  // namespace hogmt
