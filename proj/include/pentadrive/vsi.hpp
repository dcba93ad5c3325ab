#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "pentadrive/transforms.hpp"

namespace pentadrive {

/// Leg states of phases a..e; index = a*16 + b*8 + c*4 + d*2 + e.
using Legs = std::array<std::uint8_t, 5>;

enum class Corona { Large, Medium, Small, Zero };

std::string_view to_string(Corona c);

struct VoltageVector {
  int index = 0;
  Legs legs{};
  AlphaBeta v_ab;
  AlphaBeta v_xy;  // (x, y) stored in the alpha/beta slots
  Corona corona = Corona::Zero;
};

/// Large vector for tL of the period followed by its xy-cancelling Medium partner.
struct VirtualVector {
  int id = 0;
  std::optional<VoltageVector> large;
  std::optional<VoltageVector> medium;
  double tL = 0.0;
  double tM = 0.0;
  AlphaBeta v_ab_avg;
  bool is_null = true;
};

enum class AvvSet { ZetaL, ZetaW };

std::string_view to_string(AvvSet s);

Legs legs_from_index(int index);
int index_from_legs(const Legs& legs);

/// Vdc * T * legs: per-phase voltages with the common mode removed.
Phase5 phase_voltages(const Legs& legs, double Vdc);

/// All 32 inverter states with their images and corona classes.
/// Throws std::logic_error if the classification does not reproduce the
/// expected 10/10/10/2 index lists.
std::array<VoltageVector, 32> build_vv_table(double Vdc);

/// The 10 directional L+M virtual vectors (ids 1..10, counter-clockwise from
/// the alpha axis) plus the null virtual vector (id 0).
std::array<VirtualVector, 11> build_vvv_table(const std::array<VoltageVector, 32>& vv_table);

/// Candidate indices of an allowed-vector set, ascending.
std::vector<int> avv_members(AvvSet set, const std::array<VoltageVector, 32>& vv_table);

int switch_changes(const Legs& u_prev, const Legs& u_next);

struct VvvCommutations {
  int inter_period = 0;
  int intra_period = 0;
  Legs first_legs{};
  Legs last_legs{};
};

/// Commutations caused by applying `vvv` after a period that ended in `prev_last_legs`.
/// The null virtual vector is realized by whichever zero state is closer.
VvvCommutations vvv_switch_changes(const Legs& prev_last_legs, const VirtualVector& vvv);

/// Tables built once per DC-link voltage and shared read-only.
struct VsiTables {
  double Vdc = 0.0;
  std::array<VoltageVector, 32> vv;
  std::array<VirtualVector, 11> vvv;

  explicit VsiTables(double vdc);
};

void write_vv_csv(std::ostream& os, const std::array<VoltageVector, 32>& table);
void write_vvv_csv(std::ostream& os, const std::array<VirtualVector, 11>& table);

}  // namespace pentadrive
