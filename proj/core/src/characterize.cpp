#include "hogmt/characterize.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "hogmt/error.hpp"
#include "hogmt/io.hpp"

namespace hogmt {

Eigen::MatrixXcd time_correlation(const ChannelKernel& kernel) {
  if (kernel.out_shape != kernel.in_shape) {
    fail("shape_mismatch", "time correlation needs a square kernel, got " +
                               kernel.out_shape.str() + " -> " +
                               kernel.in_shape.str());
  }
  const GridShape shape = kernel.out_shape;
  const int T = shape.num_times;
  // Gram matrix over output rows, then the per-user TxT diagonal blocks
  // collapse into one aggregate time correlation.
  Eigen::MatrixXcd gram = kernel.data * kernel.data.adjoint();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(T, T);
  for (int u = 0; u < shape.num_users; ++u) {
    r += gram.block(u * T, u * T, T, T);
  }
  return r;
}

StationarityReport stationarity_metric(const Eigen::MatrixXcd& correlation,
                                       int guard) {
  const Eigen::Index T = correlation.rows();
  if (correlation.cols() != T || T < 1) {
    fail("shape_mismatch", "correlation matrix must be square");
  }
  if (guard < 0 || guard >= T) {
    fail("index_range", "guard " + std::to_string(guard) +
                            " leaves no samples of " + std::to_string(T));
  }
  auto block = correlation.bottomRightCorner(T - guard, T - guard);
  const Eigen::Index n = block.rows();
  const double block_norm = block.norm();
  if (block_norm <= 0.0) {
    fail("degenerate_correlation",
         "correlation block is identically zero; nothing to measure");
  }

  // Closest Toeplitz matrix in Frobenius distance: average each diagonal.
  Eigen::MatrixXcd deviation = block;
  for (Eigen::Index d = -(n - 1); d <= n - 1; ++d) {
    std::complex<double> sum = 0.0;
    Eigen::Index count = n - (d < 0 ? -d : d);
    for (Eigen::Index i = std::max<Eigen::Index>(0, -d); i < n && i + d < n;
         ++i) {
      if (i + d >= 0) {
        sum += block(i, i + d);
      }
    }
    std::complex<double> mean = sum / static_cast<double>(count);
    for (Eigen::Index i = std::max<Eigen::Index>(0, -d); i < n && i + d < n;
         ++i) {
      if (i + d >= 0) {
        deviation(i, i + d) -= mean;
      }
    }
  }

  StationarityReport report;
  report.eta = deviation.norm() / block_norm;
  report.guard = guard;
  report.energy_profile = correlation.diagonal().real();

  // Eigenmode count: smallest set of modes of the full R holding 99% of
  // the energy (trace).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(correlation);
  Eigen::VectorXd lambda = es.eigenvalues();  // ascending
  double total = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    total += std::max(0.0, lambda(i));
  }
  if (total > 0.0) {
    double acc = 0.0;
    int count = 0;
    for (Eigen::Index i = lambda.size() - 1; i >= 0; --i) {
      acc += std::max(0.0, lambda(i));
      ++count;
      if (acc >= 0.99 * total) {
        break;
      }
    }
    report.dominant_modes_99 = count;
  }
  return report;
}

int kernel_delay_spread(const ChannelKernel& kernel) {
  int spread = 0;
  for (int m = 0; m < kernel.out_shape.size(); ++m) {
    auto [u, t] = unflatten(m, kernel.out_shape);
    for (int m_in = 0; m_in < kernel.in_shape.size(); ++m_in) {
      if (kernel.data(m, m_in) == std::complex<double>(0.0, 0.0)) {
        continue;
      }
      auto [u_in, t_in] = unflatten(m_in, kernel.in_shape);
      spread = std::max(spread, t - t_in);
    }
  }
  return spread;
}

StationarityReport stationarity_report(const ChannelKernel& kernel) {
  Eigen::MatrixXcd r = time_correlation(kernel);
  // A causal FIR kernel only reaches steady state once its longest echo
  // fits inside the window; before that, rows of R are partial sums that
  // would read as non-stationarity. Guard them away, but never more than
  // half the window so there is always something left to measure.
  const int spread = kernel_delay_spread(kernel);
  const int guard = std::min(spread, kernel.out_shape.num_times / 2);
  return stationarity_metric(r, guard);
}

std::vector<std::filesystem::path> export_kernel_slices(
    const ChannelKernel& kernel, int u, const std::vector<int>& times,
    const std::filesystem::path& out_dir) {
  if (u < 0 || u >= kernel.out_shape.num_users) {
    fail("index_range", "user " + std::to_string(u) + " outside [0, " +
                            std::to_string(kernel.out_shape.num_users) + ")");
  }
  if (times.empty()) {
    fail("index_range", "no slice times requested");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  std::string plot =
      "# Heat maps of |K[(u,t), (u',t')]| over the input grid for fixed\n"
      "# output samples. Render with: gnuplot slices.gp\n"
      "set datafile separator \",\"\n"
      "set view map\n"
      "set xlabel \"t'\"\n"
      "set ylabel \"u'\"\n"
      "set terminal pngcairo size 900,420\n";
  for (int t : times) {
    if (t < 0 || t >= kernel.out_shape.num_times) {
      fail("index_range", "slice time " + std::to_string(t) +
                              " outside [0, " +
                              std::to_string(kernel.out_shape.num_times) +
                              ")");
    }
    std::string csv;
    const int row = flatten(u, t, kernel.out_shape);
    for (int u_in = 0; u_in < kernel.in_shape.num_users; ++u_in) {
      for (int t_in = 0; t_in < kernel.in_shape.num_times; ++t_in) {
        if (t_in > 0) {
          csv += ',';
        }
        csv += format_double(
            std::abs(kernel.data(row, flatten(u_in, t_in, kernel.in_shape))));
      }
      csv += '\n';
    }
    std::string name =
        "slice_u" + std::to_string(u) + "_t" + std::to_string(t) + ".csv";
    std::filesystem::path path = out_dir / name;
    write_text_file(path, csv);
    written.push_back(path);
    std::string stem = path.stem().string();
    plot += "set output \"" + stem + ".png\"\n";
    plot += "set title \"|K| at u=" + std::to_string(u) + ", t=" +
            std::to_string(t) + "\"\n";
    plot += "plot \"" + name + "\" matrix with image notitle\n";
  }
  std::filesystem::path script = out_dir / "slices.gp";
  write_text_file(script, plot);
  written.push_back(script);
  return written;
}

}  // namespace hogmt
