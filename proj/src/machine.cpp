#include "pentadrive/machine.hpp"

#include <charconv>
#include <stdexcept>

#include "pentadrive/config.hpp"

namespace pentadrive {

void MachineParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be a finite positive value");
    }
  };
  positive(Rs, "Rs");
  positive(Rr, "Rr");
  positive(Lls, "Lls");
  positive(Llr, "Llr");
  positive(LM, "LM");
  positive(Jm, "Jm");
  positive(Vdc, "Vdc");
  if (P < 1) throw std::invalid_argument("P must be >= 1");
  if (!(c1() > 0.0)) throw std::invalid_argument("Ls*Lr - LM^2 must be positive");
}

MachineParams parse_machine_params(std::string_view text) {
  MachineParams params;
  std::vector<std::string> errors;
  for (const auto& entry : parse_key_values(text, errors)) {
    std::string err;
    if (!assign_machine_key(params, entry.key, entry.value, err)) {
      errors.push_back("line " + std::to_string(entry.line) + ": " + err);
    }
  }
  if (errors.empty()) {
    try {
      params.validate();
    } catch (const std::invalid_argument& e) {
      errors.emplace_back(e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid machine parameters:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return params;
}

bool DriveState::finite() const {
  return std::isfinite(i_s_alpha) && std::isfinite(i_s_beta) && std::isfinite(i_s_x) &&
         std::isfinite(i_s_y) && std::isfinite(i_r_alpha) && std::isfinite(i_r_beta) &&
         std::isfinite(omega_r) && std::isfinite(theta_a) && std::isfinite(t);
}

void OperatingPoint::validate() const {
  if (!(fe > 0.0) || !std::isfinite(fe)) throw std::invalid_argument("fe must be positive");
  if (!(Is_star >= 0.0) || !std::isfinite(Is_star)) {
    throw std::invalid_argument("Is_star must be non-negative");
  }
  if (!(slip_fraction >= 0.0 && slip_fraction < 1.0)) {
    throw std::invalid_argument("slip_fraction must lie in [0, 1)");
  }
}

}  // namespace pentadrive
