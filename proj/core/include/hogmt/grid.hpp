#pragma once

#include <string>
#include <utility>

namespace hogmt {

// Discrete (user, time) grid. A grid point (u, t) maps to the flat index
// m = u * num_times + t (zero-based, user-major, time-minor). This ordering
// is frozen: files on disk and every unfolded matrix in the library use it.
struct GridShape {
  int num_users = 1;
  int num_times = 1;

  int size() const noexcept { return num_users * num_times; }

  bool operator==(const GridShape&) const = default;

  std::string str() const;  // "(Nu=4, T=64)" for messages
};

// Validates num_users >= 1, num_times >= 1 and guards the product against
// overflow; throws Error("index_range") otherwise.
GridShape make_grid(int num_users, int num_times);

// Both throw Error("index_range") naming the offending axis and bound.
int flatten(int u, int t, const GridShape& shape);
std::pair<int, int> unflatten(int m, const GridShape& shape);

}  // namespace hogmt
