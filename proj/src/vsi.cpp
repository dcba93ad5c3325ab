#include "pentadrive/vsi.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <numbers>
#include <set>
#include <span>
#include <stdexcept>
#include <string>

#include "pentadrive/csv.hpp"

namespace pentadrive {

namespace {

constexpr std::array<int, 10> kLarge = {25, 24, 28, 12, 14, 6, 7, 3, 19, 17};
constexpr std::array<int, 10> kMedium = {16, 29, 8, 30, 4, 15, 2, 23, 1, 27};
constexpr std::array<int, 10> kSmall = {9, 26, 20, 13, 10, 22, 5, 11, 18, 21};
constexpr std::array<int, 2> kZero = {0, 31};

constexpr double kPairingTolerance = 1e-9;  // rad

double modulus(const AlphaBeta& v) { return std::hypot(v.alpha, v.beta); }

double angle_of(const AlphaBeta& v) { return wrap_angle(std::atan2(v.beta, v.alpha)); }

std::set<int> to_set(std::span<const int> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

std::string_view to_string(Corona c) {
  switch (c) {
    case Corona::Large: return "Large";
    case Corona::Medium: return "Medium";
    case Corona::Small: return "Small";
    case Corona::Zero: return "Zero";
  }
  return "?";
}

std::string_view to_string(AvvSet s) { return s == AvvSet::ZetaL ? "ZetaL" : "ZetaW"; }

Legs legs_from_index(int index) {
  if (index < 0 || index > 31) throw std::out_of_range("VSI index must lie in 0..31");
  Legs legs{};
  for (int i = 0; i < 5; ++i) legs[i] = static_cast<std::uint8_t>((index >> (4 - i)) & 1);
  return legs;
}

int index_from_legs(const Legs& legs) {
  int index = 0;
  for (auto k : legs) {
    if (k > 1) throw std::invalid_argument("leg state must be 0 or 1");
    index = (index << 1) | k;
  }
  return index;
}

Phase5 phase_voltages(const Legs& legs, double Vdc) {
  double sum = 0.0;
  for (auto k : legs) sum += k;
  Phase5 v{};
  for (int i = 0; i < 5; ++i) v[i] = Vdc * (4.0 * legs[i] - (sum - legs[i])) / 5.0;
  return v;
}

std::array<VoltageVector, 32> build_vv_table(double Vdc) {
  if (!(Vdc > 0.0)) throw std::invalid_argument("Vdc must be positive");
  std::array<VoltageVector, 32> table;
  for (int n = 0; n < 32; ++n) {
    auto& vv = table[n];
    vv.index = n;
    vv.legs = legs_from_index(n);
    const auto c = clarke(phase_voltages(vv.legs, Vdc));
    vv.v_ab = {c.alpha, c.beta};
    vv.v_xy = {c.x, c.y};
  }

  // Coronas by alpha-beta modulus; distinct moduli are ~0.15 Vdc apart.
  std::vector<double> moduli;
  for (const auto& vv : table) {
    const double m = modulus(vv.v_ab);
    if (std::none_of(moduli.begin(), moduli.end(),
                     [&](double x) { return std::abs(x - m) < 1e-6 * Vdc; })) {
      moduli.push_back(m);
    }
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  if (moduli.size() != 4) throw std::logic_error("expected four alpha-beta coronas");
  std::set<int> large, medium, small, zero;
  for (auto& vv : table) {
    const double m = modulus(vv.v_ab);
    const auto rank = std::find_if(moduli.begin(), moduli.end(),
                                   [&](double x) { return std::abs(x - m) < 1e-6 * Vdc; }) -
                      moduli.begin();
    vv.corona = static_cast<Corona>(rank);
    std::set<int>* bucket[] = {&large, &medium, &small, &zero};
    bucket[rank]->insert(vv.index);
  }
  if (large != to_set(kLarge) || medium != to_set(kMedium) || small != to_set(kSmall) ||
      zero != to_set(kZero)) {
    throw std::logic_error("voltage-vector corona classification mismatch");
  }
  return table;
}

std::array<VirtualVector, 11> build_vvv_table(const std::array<VoltageVector, 32>& vv_table) {
  std::vector<VoltageVector> larges, mediums;
  for (const auto& vv : vv_table) {
    if (vv.corona == Corona::Large) larges.push_back(vv);
    if (vv.corona == Corona::Medium) mediums.push_back(vv);
  }
  if (larges.size() != 10 || mediums.size() != 10) {
    throw std::logic_error("vv table is not classified");
  }
  std::sort(larges.begin(), larges.end(),
            [](const auto& a, const auto& b) { return angle_of(a.v_ab) < angle_of(b.v_ab); });

  std::array<VirtualVector, 11> out;
  out[0] = VirtualVector{};
  out[0].tL = 1.0;
  for (std::size_t n = 0; n < larges.size(); ++n) {
    const auto& L = larges[n];
    const double target = wrap_angle(angle_of(L.v_xy) + std::numbers::pi);
    const VoltageVector* partner = nullptr;
    for (const auto& M : mediums) {
      double diff = std::abs(angle_of(M.v_xy) - target);
      diff = std::min(diff, kTwoPi - diff);
      if (diff < kPairingTolerance) {
        if (partner) throw std::logic_error("ambiguous medium partner");
        partner = &M;
      }
    }
    if (!partner) {
      throw std::logic_error("no anti-parallel medium vector for large vector " +
                             std::to_string(L.index));
    }
    const double xl = modulus(L.v_xy);
    const double xm = modulus(partner->v_xy);
    auto& v = out[n + 1];
    v.id = static_cast<int>(n + 1);
    v.large = L;
    v.medium = *partner;
    v.tL = xm / (xl + xm);
    v.tM = 1.0 - v.tL;
    v.v_ab_avg = {v.tL * L.v_ab.alpha + v.tM * partner->v_ab.alpha,
                  v.tL * L.v_ab.beta + v.tM * partner->v_ab.beta};
    v.is_null = false;
  }
  return out;
}

std::vector<int> avv_members(AvvSet set, const std::array<VoltageVector, 32>& vv_table) {
  std::vector<int> out;
  for (const auto& vv : vv_table) {
    if (set == AvvSet::ZetaW || vv.corona == Corona::Large || vv.corona == Corona::Zero) {
      out.push_back(vv.index);
    }
  }
  return out;
}

int switch_changes(const Legs& u_prev, const Legs& u_next) {
  int n = 0;
  for (int i = 0; i < 5; ++i) n += u_prev[i] != u_next[i];
  return n;
}

VvvCommutations vvv_switch_changes(const Legs& prev_last_legs, const VirtualVector& vvv) {
  VvvCommutations r;
  if (vvv.is_null) {
    const Legs lo{0, 0, 0, 0, 0};
    const Legs hi{1, 1, 1, 1, 1};
    const int to_lo = switch_changes(prev_last_legs, lo);
    const int to_hi = switch_changes(prev_last_legs, hi);
    const Legs zero = to_lo <= to_hi ? lo : hi;  // five legs, so never a tie
    r.first_legs = r.last_legs = zero;
    r.inter_period = switch_changes(prev_last_legs, zero);
    r.intra_period = 0;
    return r;
  }
  r.first_legs = vvv.large->legs;
  r.last_legs = vvv.medium->legs;
  r.inter_period = switch_changes(prev_last_legs, r.first_legs);
  r.intra_period = switch_changes(r.first_legs, r.last_legs);
  return r;
}

VsiTables::VsiTables(double vdc) : Vdc(vdc), vv(build_vv_table(vdc)), vvv(build_vvv_table(vv)) {}

void write_vv_csv(std::ostream& os, const std::array<VoltageVector, 32>& table) {
  os << "index,legs,v_alpha,v_beta,v_x,v_y,corona\n";
  for (const auto& vv : table) {
    std::string legs;
    for (auto k : vv.legs) legs += static_cast<char>('0' + k);
    os << vv.index << ',' << legs << ',' << fmt_double(vv.v_ab.alpha) << ','
       << fmt_double(vv.v_ab.beta) << ',' << fmt_double(vv.v_xy.alpha) << ','
       << fmt_double(vv.v_xy.beta) << ',' << to_string(vv.corona) << '\n';
  }
}

void write_vvv_csv(std::ostream& os, const std::array<VirtualVector, 11>& table) {
  os << "id,large,medium,tL,tM,v_alpha_avg,v_beta_avg,is_null\n";
  for (const auto& v : table) {
    os << v.id << ',' << (v.large ? std::to_string(v.large->index) : "") << ','
       << (v.medium ? std::to_string(v.medium->index) : "") << ',' << fmt_double(v.tL) << ','
       << fmt_double(v.tM) << ',' << fmt_double(v.v_ab_avg.alpha) << ','
       << fmt_double(v.v_ab_avg.beta) << ',' << (v.is_null ? 1 : 0) << '\n';
  }
}

}  // namespace pentadrive
