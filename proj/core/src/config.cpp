#include "hogmt/config.hpp"

#include <set>

#include "hogmt/error.hpp"
#include "hogmt/io.hpp"

namespace hogmt {

namespace {

[[noreturn]] void schema_fail(const std::string& key, const toml::Value& v,
                              const std::string& what) {
  fail("config_schema",
       "key '" + key + "' (line " + std::to_string(v.line) + "): " + what);
}

// Reject keys under `prefix` that the schema never reads; typos should
// fail loudly, not silently fall back to defaults.
void check_known(const toml::Document& doc, const std::string& prefix,
                 const std::set<std::string>& known) {
  for (const auto& [key, value] : doc.values) {
    if (key.compare(0, prefix.size(), prefix) != 0) {
      continue;
    }
    if (!known.count(key)) {
      schema_fail(key, value, "unknown key");
    }
  }
}

int int_key(const toml::Document& doc, const std::string& key, int fallback,
            bool required = false) {
  const toml::Value* v = doc.find(key);
  if (!v) {
    if (required) {
      fail("config_missing", "required key '" + key + "' is missing");
    }
    return fallback;
  }
  long long raw = v->as_int();
  if (raw < -(1LL << 31) || raw > (1LL << 31) - 1) {
    schema_fail(key, *v, "value out of int range");
  }
  return static_cast<int>(raw);
}

std::complex<double> tap_gain(const toml::Table& table,
                              const std::string& key) {
  auto it = table.find(key);
  if (it == table.end()) {
    return 1.0;
  }
  const toml::Value& v = it->second;
  if (v.kind == toml::Value::Kind::array) {
    const auto& parts = v.as_array();
    if (parts.size() != 2) {
      schema_fail(key, v, "complex gain needs [re, im]");
    }
    return {parts[0].as_real(), parts[1].as_real()};
  }
  return {v.as_real(), 0.0};
}

double table_real(const toml::Table& table, const std::string& key,
                  double fallback) {
  auto it = table.find(key);
  return it == table.end() ? fallback : it->second.as_real();
}

}  // namespace

KernelSpecConfig parse_kernel_spec(const toml::Document& doc,
                                   const std::string& prefix) {
  KernelSpecConfig spec;
  const std::string kind = doc.at(prefix + "kind").as_string();
  std::set<std::string> known = {prefix + "kind", prefix + "seed",
                                 prefix + "grid.num_users",
                                 prefix + "grid.num_times"};
  if (kind == "identity") {
    spec.kind = KernelSpecConfig::Kind::identity;
  } else if (kind == "random") {
    spec.kind = KernelSpecConfig::Kind::random;
    known.insert(prefix + "random.condition_target");
  } else if (kind == "stationary") {
    spec.kind = KernelSpecConfig::Kind::stationary;
    known.insert(prefix + "stationary.num_taps");
  } else if (kind == "nonstationary") {
    spec.kind = KernelSpecConfig::Kind::nonstationary;
  } else {
    schema_fail(prefix + "kind", doc.at(prefix + "kind"),
                "unknown kernel kind '" + kind + "'");
  }
  check_known(doc, prefix, known);

  spec.shape = make_grid(int_key(doc, prefix + "grid.num_users", 0, true),
                         int_key(doc, prefix + "grid.num_times", 0, true));
  long long seed = 0;
  if (const toml::Value* v = doc.find(prefix + "seed")) {
    seed = v->as_int();
  }
  spec.seed = static_cast<std::uint64_t>(seed);

  if (spec.kind == KernelSpecConfig::Kind::random) {
    if (const toml::Value* v = doc.find(prefix + "random.condition_target")) {
      spec.condition_target = v->as_real();
    }
  }
  if (spec.kind == KernelSpecConfig::Kind::stationary) {
    spec.num_taps = int_key(doc, prefix + "stationary.num_taps", 1);
  }
  if (spec.kind == KernelSpecConfig::Kind::nonstationary) {
    const std::string tap_name =
        prefix.empty() ? "tap" : prefix + "tap";
    auto it = doc.table_arrays.find(tap_name);
    if (it == doc.table_arrays.end() || it->second.empty()) {
      fail("config_missing",
           "nonstationary kernel needs at least one [[" + tap_name +
               "]] block");
    }
    static const std::set<std::string> tap_keys = {
        "base_delay", "delay_drift", "doppler",
        "gain",       "gain_drift",  "leakage"};
    for (const toml::Table& table : it->second) {
      for (const auto& [key, value] : table) {
        if (!tap_keys.count(key)) {
          schema_fail(tap_name + "." + key, value, "unknown key");
        }
      }
      DriftingTap tap;
      tap.base_delay = table_real(table, "base_delay", 0.0);
      tap.delay_drift = table_real(table, "delay_drift", 0.0);
      tap.doppler = table_real(table, "doppler", 0.0);
      tap.gain = tap_gain(table, "gain");
      tap.gain_drift = table_real(table, "gain_drift", 0.0);
      tap.leakage = table_real(table, "leakage", 0.0);
      spec.taps.push_back(tap);
    }
  }
  return spec;
}

ChannelKernel build_kernel(const KernelSpecConfig& spec) {
  switch (spec.kind) {
    case KernelSpecConfig::Kind::identity:
      return identity_kernel(spec.shape);
    case KernelSpecConfig::Kind::random:
      return gen_random(spec.shape, spec.seed, spec.condition_target);
    case KernelSpecConfig::Kind::stationary:
      return gen_stationary(
          random_stationary_spec(spec.shape, spec.num_taps, spec.seed));
    case KernelSpecConfig::Kind::nonstationary:
      return gen_nonstationary(
          make_drifting_spec(spec.shape, spec.taps, spec.seed));
  }
  fail("config_schema", "unknown kernel kind");
}

namespace {

TruncationPolicy parse_truncation(const toml::Document& doc) {
  const toml::Value* v = doc.find("precoder.truncation");
  const std::string mode = v ? v->as_string() : "keep_all";
  if (mode == "keep_all") {
    return TruncationPolicy::keep_all();
  }
  if (mode == "energy") {
    return TruncationPolicy::energy_threshold(
        doc.at("precoder.epsilon").as_real());
  }
  if (mode == "max_modes") {
    return TruncationPolicy::max_modes_of(
        static_cast<int>(doc.at("precoder.max_modes").as_int()));
  }
  if (mode == "sigma_floor") {
    return TruncationPolicy::sigma_floor_of(
        doc.at("precoder.sigma_floor").as_real());
  }
  schema_fail("precoder.truncation", *v,
              "unknown truncation mode '" + mode + "'");
}

}  // namespace

LinkConfig parse_link_config(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  const toml::Document doc = toml::parse(bytes);

  static const std::set<std::string> known = {
      "scheme",
      "snr_db",
      "trials",
      "precoding",
      "seed",
      "threads",
      "kernel.file",
      "kernel.kind",
      "kernel.seed",
      "kernel.grid.num_users",
      "kernel.grid.num_times",
      "kernel.random.condition_target",
      "kernel.stationary.num_taps",
      "precoder.truncation",
      "precoder.epsilon",
      "precoder.max_modes",
      "precoder.sigma_floor",
      "precoder.sigma_floor_rel",
      "precoder.power",
      "precoder.power_target",
  };
  check_known(doc, "", known);

  LinkConfig cfg;
  cfg.scheme = parse_scheme(doc.at("scheme").as_string());
  const auto& snrs = doc.at("snr_db").as_array();
  if (snrs.empty()) {
    schema_fail("snr_db", doc.at("snr_db"), "needs at least one SNR point");
  }
  for (const toml::Value& v : snrs) {
    cfg.snr_db_points.push_back(v.as_real());
  }
  cfg.trials_per_point = int_key(doc, "trials", 0, true);
  if (const toml::Value* v = doc.find("precoding")) {
    cfg.precoding = parse_precoding(v->as_string());
  }
  if (const toml::Value* v = doc.find("seed")) {
    cfg.seed = static_cast<std::uint64_t>(v->as_int());
  }
  cfg.threads = int_key(doc, "threads", 1);

  if (const toml::Value* v = doc.find("kernel.file")) {
    std::filesystem::path kernel_path = v->as_string();
    if (kernel_path.is_relative()) {
      kernel_path = path.parent_path() / kernel_path;
    }
    cfg.kernel = load_kernel(kernel_path);
  } else {
    cfg.kernel = build_kernel(parse_kernel_spec(doc, "kernel."));
  }

  cfg.precoder.truncation = parse_truncation(doc);
  if (const toml::Value* v = doc.find("precoder.sigma_floor_rel")) {
    cfg.precoder.sigma_floor_rel = v->as_real();
  }
  if (const toml::Value* v = doc.find("precoder.power")) {
    const std::string mode = v->as_string();
    if (mode == "normalize") {
      cfg.precoder.power = PowerPolicy::normalize;
      double target = 0.0;
      if (const toml::Value* t = doc.find("precoder.power_target")) {
        target = t->as_real();
      }
      // Default: unit average power per transmit sample.
      cfg.precoder.power_target =
          target > 0.0 ? target : static_cast<double>(cfg.kernel.in_shape.size());
    } else if (mode != "none") {
      schema_fail("precoder.power", *v, "unknown power policy '" + mode + "'");
    }
  }

  cfg.config_digest = config_digest(bytes, cfg.seed);
  return cfg;
}

std::string config_digest(std::string_view config_bytes, std::uint64_t seed) {
  std::uint64_t h = fnv1a64(config_bytes);
  // Stir the effective seed in as eight more bytes.
  char tail[8];
  for (int i = 0; i < 8; ++i) {
    tail[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  }
  h ^= fnv1a64(std::string_view(tail, 8)) * 0x9e3779b97f4a7c15ULL;
  return hex64(h);
}

}  // namespace hogmt
