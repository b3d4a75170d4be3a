#include "hogmt/io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <vector>

#include "hogmt/error.hpp"

namespace hogmt {

namespace {

constexpr char kMagic[4] = {'H', 'G', 'M', 'T'};
constexpr std::uint32_t kVersion = 1;
// Generous but sane: caps a kernel payload at 1 GiB so corrupt headers
// cannot drive allocation.
constexpr std::uint64_t kMaxEntries = 1ULL << 26;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | p[i];
  }
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) {
    bits = (bits << 8) | p[i];
  }
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail("io_read", "cannot open " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    fail("io_read", "read failed on " + path.string());
  }
  return bytes;
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail("io_write", "cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out.good()) {
    fail("io_write", "write failed on " + path.string());
  }
}

void save_kernel(const ChannelKernel& kernel,
                 const std::filesystem::path& path) {
  std::string out;
  out.reserve(24 + static_cast<std::size_t>(kernel.data.size()) * 16);
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(kernel.out_shape.num_users));
  put_u32(out, static_cast<std::uint32_t>(kernel.out_shape.num_times));
  put_u32(out, static_cast<std::uint32_t>(kernel.in_shape.num_users));
  put_u32(out, static_cast<std::uint32_t>(kernel.in_shape.num_times));
  for (Eigen::Index r = 0; r < kernel.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < kernel.data.cols(); ++c) {
      put_f64(out, kernel.data(r, c).real());
      put_f64(out, kernel.data(r, c).imag());
    }
  }
  write_text_file(path, out);
}

ChannelKernel load_kernel(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 4) {
    fail("truncated_file",
         path.string() + ": file shorter than the magic header");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail("bad_magic", path.string() + ": not a kernel container");
  }
  if (bytes.size() < 24) {
    fail("truncated_file", path.string() + ": header cut short");
  }
  const std::uint32_t version = get_u32(p + 4);
  if (version != kVersion) {
    fail("bad_version", path.string() + ": container version " +
                            std::to_string(version) + ", expected " +
                            std::to_string(kVersion));
  }
  const std::uint32_t dims[4] = {get_u32(p + 8), get_u32(p + 12),
                                 get_u32(p + 16), get_u32(p + 20)};
  for (std::uint32_t d : dims) {
    if (d == 0 || d > kMaxEntries) {
      fail("dim_overflow",
           path.string() + ": dimension " + std::to_string(d) +
               " outside [1, " + std::to_string(kMaxEntries) + "]");
    }
  }
  const std::uint64_t rows = std::uint64_t{dims[0]} * dims[1];
  const std::uint64_t cols = std::uint64_t{dims[2]} * dims[3];
  if (rows > kMaxEntries || cols > kMaxEntries ||
      rows * cols > kMaxEntries) {
    fail("dim_overflow", path.string() + ": " + std::to_string(rows) + "x" +
                             std::to_string(cols) +
                             " entries exceed the container limit");
  }
  const std::uint64_t expected = 24 + rows * cols * 16;
  if (bytes.size() != expected) {
    fail("truncated_file", path.string() + ": payload is " +
                               std::to_string(bytes.size()) + " bytes, " +
                               std::to_string(expected) + " expected");
  }
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(rows),
                        static_cast<Eigen::Index>(cols));
  const unsigned char* cursor = p + 24;
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      double re = get_f64(cursor);
      double im = get_f64(cursor + 8);
      data(r, c) = {re, im};
      cursor += 16;
    }
  }
  return make_kernel(
      make_grid(static_cast<int>(dims[0]), static_cast<int>(dims[1])),
      make_grid(static_cast<int>(dims[2]), static_cast<int>(dims[3])),
      std::move(data));
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);  // from_chars rejects an explicit plus
  }
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    fail("bad_number", "cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

long long parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    fail("bad_number", "cannot parse '" + std::string(s) + "' as an integer");
  }
  return v;
}

void save_frame_csv(const SymbolFrame& frame,
                    const std::filesystem::path& path) {
  std::string out = "u,t,re,im\n";
  for (int m = 0; m < frame.shape.size(); ++m) {
    auto [u, t] = unflatten(m, frame.shape);
    out += std::to_string(u);
    out += ',';
    out += std::to_string(t);
    out += ',';
    out += format_double(frame.data(m).real());
    out += ',';
    out += format_double(frame.data(m).imag());
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

SymbolFrame load_frame_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  if (lines.empty() || lines.front() != "u,t,re,im") {
    fail("csv_header", path.string() + ": expected header 'u,t,re,im'");
  }
  struct Row {
    int u, t;
    std::complex<double> v;
  };
  std::vector<Row> rows;
  int max_u = -1;
  int max_t = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split(lines[i], ',');
    if (fields.size() != 4) {
      fail("csv_row", path.string() + ": line " + std::to_string(i + 1) +
                          " has " + std::to_string(fields.size()) +
                          " fields, expected 4");
    }
    Row row;
    row.u = static_cast<int>(parse_int(fields[0]));
    row.t = static_cast<int>(parse_int(fields[1]));
    row.v = {parse_double(fields[2]), parse_double(fields[3])};
    max_u = std::max(max_u, row.u);
    max_t = std::max(max_t, row.t);
    rows.push_back(row);
  }
  if (rows.empty()) {
    fail("csv_row", path.string() + ": no data rows");
  }
  GridShape shape = make_grid(max_u + 1, max_t + 1);
  if (static_cast<int>(rows.size()) != shape.size()) {
    fail("csv_row", path.string() + ": " + std::to_string(rows.size()) +
                        " rows do not cover grid " + shape.str());
  }
  Eigen::VectorXcd data(shape.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [u, t] = unflatten(static_cast<int>(i), shape);
    if (rows[i].u != u || rows[i].t != t) {
      fail("csv_row", path.string() + ": line " + std::to_string(i + 2) +
                          " out of flat grid order");
    }
    data(static_cast<Eigen::Index>(i)) = rows[i].v;
  }
  return make_frame(shape, std::move(data));
}

void save_sigma_csv(const Eigen::VectorXd& sigmas,
                    const std::filesystem::path& path) {
  std::string out = "n,sigma\n";
  for (Eigen::Index n = 0; n < sigmas.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(sigmas(n));
    out += '\n';
  }
  write_text_file(path, out);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace hogmt
