#include "hogmt/grid.hpp"

#include <limits>

#include "hogmt/error.hpp"

namespace hogmt {

std::string GridShape::str() const {
  return "(Nu=" + std::to_string(num_users) + ", T=" +
         std::to_string(num_times) + ")";
}

GridShape make_grid(int num_users, int num_times) {
  if (num_users < 1) {
    fail("index_range",
         "num_users must be >= 1, got " + std::to_string(num_users));
  }
  if (num_times < 1) {
    fail("index_range",
         "num_times must be >= 1, got " + std::to_string(num_times));
  }
  if (num_users > std::numeric_limits<int>::max() / num_times) {
    fail("index_range", "grid size " + std::to_string(num_users) + " * " +
                            std::to_string(num_times) + " overflows");
  }
  return GridShape{num_users, num_times};
}

int flatten(int u, int t, const GridShape& shape) {
  if (u < 0 || u >= shape.num_users) {
    fail("index_range", "user index " + std::to_string(u) +
                            " outside [0, " +
                            std::to_string(shape.num_users) + ")");
  }
  if (t < 0 || t >= shape.num_times) {
    fail("index_range", "time index " + std::to_string(t) +
                            " outside [0, " +
                            std::to_string(shape.num_times) + ")");
  }
  return u * shape.num_times + t;
}

std::pair<int, int> unflatten(int m, const GridShape& shape) {
  if (m < 0 || m >= shape.size()) {
    fail("index_range", "flat index " + std::to_string(m) + " outside [0, " +
                            std::to_string(shape.size()) + ")");
  }
  return {m / shape.num_times, m % shape.num_times};
}

}  // namespace hogmt
