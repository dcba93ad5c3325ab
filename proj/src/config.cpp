#include "pentadrive/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "pentadrive/csv.hpp"

namespace pentadrive {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_number(std::string_view v) {
  try {
    const double d = parse_double(trim(v));
    if (!std::isfinite(d)) return std::nullopt;
    return d;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<int> to_int(std::string_view v) {
  const auto d = to_number(v);
  if (!d || *d != std::floor(*d) || std::abs(*d) > 1e9) return std::nullopt;
  return static_cast<int>(*d);
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  for (const auto& f : split_csv_line(v)) {
    const auto t = trim(f);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) {
    if (!s.empty()) s += ", ";
    s += fmt_double(x);
  }
  return s;
}

std::string variant_token(const ControllerConfig& c) {
  if (c.variant == Variant::VirtualVector) return "vvv";
  return c.tag() + ":" + fmt_double(c.lambda_xy) + ":" + fmt_double(c.lambda_sc);
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text, std::vector<std::string>& errors) {
  std::vector<KeyValue> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": missing key");
      continue;
    }
    out.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return out;
}

bool assign_machine_key(MachineParams& p, std::string_view key, std::string_view value,
                        std::string& error) {
  static const std::map<std::string, double MachineParams::*, std::less<>> fields = {
      {"Rs", &MachineParams::Rs},   {"Rr", &MachineParams::Rr}, {"Lls", &MachineParams::Lls},
      {"Llr", &MachineParams::Llr}, {"LM", &MachineParams::LM}, {"Jm", &MachineParams::Jm},
      {"Vdc", &MachineParams::Vdc}};
  if (key == "P") {
    const auto n = to_int(value);
    if (!n || *n < 1) {
      error = "P: expected an integer >= 1, got '" + std::string(value) + "'";
      return false;
    }
    p.P = *n;
    return true;
  }
  const auto it = fields.find(key);
  if (it == fields.end()) {
    error = "unknown machine key '" + std::string(key) + "'";
    return false;
  }
  const auto d = to_number(value);
  if (!d || *d <= 0.0) {
    error = std::string(key) + ": expected a positive number, got '" + std::string(value) + "'";
    return false;
  }
  p.*(it->second) = *d;
  return true;
}

RunConfig::RunConfig() {
  controller = make_controller_config("sv-zl", 0.0, 0.0, plant.Ts);
  sweep.variants = SweepSpec::default_variants(plant.Ts);
  sweep.slip_fraction = 0.03;
}

ConfigResult validate_config(std::string_view text) {
  ConfigResult result;
  auto& errors = result.errors;
  RunConfig cfg;

  std::string variant_name = "sv-zl";
  double lambda_xy = 0.0;
  double lambda_sc = 0.0;
  double g_filter = 1.0;
  std::optional<std::vector<std::string>> variant_tokens;

  for (const auto& kv : parse_key_values(text, errors)) {
    const std::string where = "line " + std::to_string(kv.line) + ": " + kv.key + ": ";
    auto fail = [&](const std::string& what) { errors.push_back(where + what); };
    auto number = [&](double lo, bool lo_inclusive) -> std::optional<double> {
      const auto d = to_number(kv.value);
      if (!d) {
        fail("expected a number, got '" + kv.value + "'");
        return std::nullopt;
      }
      if (lo_inclusive ? *d < lo : *d <= lo) {
        fail(std::string("must be ") + (lo_inclusive ? ">= " : "> ") + fmt_double(lo) +
             ", got " + kv.value);
        return std::nullopt;
      }
      return d;
    };
    auto integer = [&](int lo) -> std::optional<int> {
      const auto n = to_int(kv.value);
      if (!n || *n < lo) {
        fail("expected an integer >= " + std::to_string(lo) + ", got '" + kv.value + "'");
        return std::nullopt;
      }
      return n;
    };
    auto number_list = [&]() -> std::optional<std::vector<double>> {
      std::vector<double> xs;
      for (const auto& item : split_list(kv.value)) {
        const auto d = to_number(item);
        if (!d) {
          fail("expected a list of numbers, bad item '" + item + "'");
          return std::nullopt;
        }
        xs.push_back(*d);
      }
      if (xs.empty()) {
        fail("list must not be empty");
        return std::nullopt;
      }
      return xs;
    };

    const std::string_view key = kv.key;
    if (key.starts_with("machine.")) {
      std::string err;
      if (!assign_machine_key(cfg.machine, key.substr(8), kv.value, err)) {
        errors.push_back("line " + std::to_string(kv.line) + ": machine." + err);
      }
    } else if (key == "plant.Ts") {
      if (auto d = number(0.0, false)) cfg.plant.Ts = *d;
    } else if (key == "plant.substeps") {
      if (auto n = integer(2)) cfg.plant.substeps_per_Ts = *n;
    } else if (key == "plant.integrator") {
      if (kv.value != "rk4") fail("only 'rk4' is supported");
    } else if (key == "controller.variant") {
      if (kv.value == "sv-zl" || kv.value == "sv-zw" || kv.value == "vvv") {
        variant_name = kv.value;
      } else {
        fail("expected sv-zl, sv-zw or vvv, got '" + kv.value + "'");
      }
    } else if (key == "controller.lambda_xy") {
      if (auto d = number(0.0, true)) lambda_xy = *d;
    } else if (key == "controller.lambda_sc") {
      if (auto d = number(0.0, true)) lambda_sc = *d;
    } else if (key == "controller.g_filter") {
      if (auto d = number(0.0, false)) {
        if (*d > 1.0) {
          fail("must lie in (0, 1], got " + kv.value);
        } else {
          g_filter = *d;
        }
      }
    } else if (key == "sweep.fe") {
      if (auto xs = number_list()) {
        bool ok = true;
        for (double x : *xs) ok = ok && x > 0.0;
        if (ok) {
          cfg.sweep.fe_list = *xs;
        } else {
          fail("frequencies must be > 0");
        }
      }
    } else if (key == "sweep.is") {
      if (auto xs = number_list()) {
        bool ok = (*xs)[0] >= 0.0;
        for (std::size_t i = 1; i < xs->size(); ++i) ok = ok && (*xs)[i] > (*xs)[i - 1];
        if (ok) {
          cfg.sweep.is_grid.values = *xs;
        } else {
          fail("must be ascending and non-negative");
        }
      }
    } else if (key == "sweep.is_min") {
      if (auto d = number(0.0, true)) cfg.sweep.is_grid.min = *d;
    } else if (key == "sweep.is_max") {
      if (kv.value == "auto") {
        cfg.sweep.is_grid.max.reset();
      } else if (auto d = number(0.0, false)) {
        cfg.sweep.is_grid.max = *d;
      }
    } else if (key == "sweep.is_steps") {
      if (auto n = integer(1)) cfg.sweep.is_grid.steps = *n;
    } else if (key == "sweep.variants") {
      variant_tokens = split_list(kv.value);
      if (variant_tokens->empty()) fail("list must not be empty");
    } else if (key == "sweep.slip") {
      if (auto d = number(0.0, true)) {
        if (*d >= 1.0) {
          fail("must be < 1, got " + kv.value);
        } else {
          cfg.sweep.slip_fraction = *d;
        }
      }
    } else if (key == "sweep.transient_periods") {
      if (auto n = integer(0)) cfg.sweep.run.transient_periods = *n;
    } else if (key == "sweep.window_periods") {
      if (auto n = integer(1)) cfg.sweep.run.window_periods = *n;
    } else if (key == "sweep.fundamental_tolerance") {
      if (auto d = number(0.0, false)) cfg.sweep.run.fundamental_tolerance = *d;
    } else {
      fail("unknown key");
    }
  }

  try {
    cfg.machine.validate();
  } catch (const std::invalid_argument& e) {
    errors.push_back(std::string("machine: ") + e.what());
  }

  cfg.controller = make_controller_config(variant_name, lambda_xy, lambda_sc, cfg.plant.Ts);
  cfg.controller.g_filter = g_filter;
  if (variant_name == "vvv" && (lambda_xy != 0.0 || lambda_sc != 0.0)) {
    errors.push_back("controller: vvv uses no weighting factors (lambda_xy = lambda_sc = 0)");
  }

  if (variant_tokens) {
    cfg.sweep.variants.clear();
    for (const auto& tok : *variant_tokens) {
      const auto parts = [&] {
        std::vector<std::string> p;
        std::size_t start = 0;
        while (true) {
          const auto c = tok.find(':', start);
          p.push_back(tok.substr(start, c == std::string::npos ? c : c - start));
          if (c == std::string::npos) break;
          start = c + 1;
        }
        return p;
      }();
      const auto lxy = parts.size() > 1 ? to_number(parts[1]) : std::optional<double>(0.0);
      const auto lsc = parts.size() > 2 ? to_number(parts[2]) : std::optional<double>(0.0);
      if (parts.size() > 3 || !lxy || !lsc || *lxy < 0.0 || *lsc < 0.0) {
        errors.push_back("sweep.variants: bad entry '" + tok +
                         "' (expected name[:lambda_xy[:lambda_sc]] with weights >= 0)");
        continue;
      }
      if (parts[0] == "vvv" && (*lxy != 0.0 || *lsc != 0.0)) {
        errors.push_back("sweep.variants: vvv takes no weighting factors");
        continue;
      }
      try {
        auto c = make_controller_config(parts[0], *lxy, *lsc, cfg.plant.Ts);
        c.g_filter = g_filter;
        cfg.sweep.variants.push_back(c);
      } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("sweep.variants: ") + e.what());
      }
    }
  } else {
    for (auto& v : cfg.sweep.variants) {
      v.Ts = cfg.plant.Ts;
      v.g_filter = g_filter;
    }
  }

  if (cfg.sweep.is_grid.values.empty() && cfg.sweep.is_grid.max &&
      *cfg.sweep.is_grid.max < cfg.sweep.is_grid.min) {
    errors.push_back("sweep: is_max must be >= is_min");
  }

  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  const auto& m = c.machine;
  os << "machine.Rs = " << fmt_double(m.Rs) << '\n'
     << "machine.Rr = " << fmt_double(m.Rr) << '\n'
     << "machine.Lls = " << fmt_double(m.Lls) << '\n'
     << "machine.Llr = " << fmt_double(m.Llr) << '\n'
     << "machine.LM = " << fmt_double(m.LM) << '\n'
     << "machine.Jm = " << fmt_double(m.Jm) << '\n'
     << "machine.P = " << m.P << '\n'
     << "machine.Vdc = " << fmt_double(m.Vdc) << '\n'
     << "plant.Ts = " << fmt_double(c.plant.Ts) << '\n'
     << "plant.substeps = " << c.plant.substeps_per_Ts << '\n'
     << "plant.integrator = rk4\n"
     << "controller.variant = " << c.controller.tag() << '\n'
     << "controller.lambda_xy = " << fmt_double(c.controller.lambda_xy) << '\n'
     << "controller.lambda_sc = " << fmt_double(c.controller.lambda_sc) << '\n'
     << "controller.g_filter = " << fmt_double(c.controller.g_filter) << '\n'
     << "sweep.fe = " << join_numbers(c.sweep.fe_list) << '\n';
  const auto& g = c.sweep.is_grid;
  if (!g.values.empty()) {
    os << "sweep.is = " << join_numbers(g.values) << '\n';
  } else {
    os << "sweep.is_min = " << fmt_double(g.min) << '\n'
       << "sweep.is_max = " << (g.max ? fmt_double(*g.max) : std::string("auto")) << '\n'
       << "sweep.is_steps = " << g.steps << '\n';
  }
  std::string variants;
  for (const auto& v : c.sweep.variants) {
    if (!variants.empty()) variants += ", ";
    variants += variant_token(v);
  }
  os << "sweep.variants = " << variants << '\n'
     << "sweep.slip = " << fmt_double(c.sweep.slip_fraction) << '\n'
     << "sweep.transient_periods = " << c.sweep.run.transient_periods << '\n'
     << "sweep.window_periods = " << c.sweep.run.window_periods << '\n'
     << "sweep.fundamental_tolerance = " << fmt_double(c.sweep.run.fundamental_tolerance) << '\n';
  return os.str();
}

}  // namespace pentadrive
