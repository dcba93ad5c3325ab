#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pentadrive/machine.hpp"
#include "pentadrive/plant.hpp"
#include "pentadrive/vsi.hpp"

namespace pentadrive {

/// alpha, beta, x, y.
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

enum class Variant { SingleVector, VirtualVector };

struct ControllerConfig {
  Variant variant = Variant::SingleVector;
  AvvSet avv = AvvSet::ZetaL;
  double lambda_xy = 0.0;
  double lambda_sc = 0.0;
  double Ts = 35e-6;
  /// Low-pass coefficient of the disturbance estimate; 1 keeps the raw residual.
  double g_filter = 1.0;

  /// Throws std::invalid_argument. Virtual-vector configs must carry zero weights.
  void validate() const;
  /// "sv-zl", "sv-zw" or "vvv".
  std::string tag() const;
};

/// Builds a config from a variant name ("sv-zl", "sv-zw", "vvv") and weights.
/// The virtual-vector variant ignores the weights (forced to zero).
ControllerConfig make_controller_config(std::string_view name, double lambda_xy, double lambda_sc,
                                        double Ts);

/// Discrete model i(k+1) = C i(k) + B v(k) + G with C = I + Ac Ts, B = Ts Bc.
struct DiscreteModel {
  Mat4 C;
  Vec4 B_diag;

  static DiscreteModel build(const MachineParams& params, double omega_r, double Ts);
  Vec4 step(const Vec4& i, const Vec4& v) const { return C * i + B_diag.cwiseProduct(v); }
};

Mat4 continuous_A(const MachineParams& params, double omega_r);
Vec4 continuous_B_diag(const MachineParams& params);

/// One-step prediction (I + Ac Ts) i + Ts Bc v + G.
Vec4 predict_one_step(const Vec4& i_meas, const Vec4& v_applied, double omega_r,
                      const MachineParams& params, const Vec4& G_hat, double Ts);

/// Residual between the measurement and the G-free model prediction, blended
/// into the previous estimate with coefficient beta in (0, 1].
Vec4 estimate_disturbance(const Vec4& i_meas, const Vec4& i_model, const Vec4& G_prev,
                          double beta);

/// e_ab^2 + lambda_xy e_xy^2 + lambda_sc dS.
double cost(const Vec4& i_ref, const Vec4& i_hat, int delta_S, const ControllerConfig& config);

/// One applied control action, as seen by the plant and the metrics.
struct Action {
  Variant variant = Variant::SingleVector;
  int index = 0;  // VSI index (0..31) or virtual vector id (0..10)
  Legs first_legs{};
  Legs last_legs{};
  int inter_changes = 0;  // commutations at the period start
  int intra_changes = 0;  // commutations inside the period
  double first_fraction = 1.0;  // share of Ts spent on first_legs
  bool zero = true;             // zero vector or null virtual vector
  Vec4 voltage = Vec4::Zero();  // period-averaged alpha, beta, x, y

  PeriodPlan plan() const;
};

/// Candidate moves of a configuration, with their period-averaged voltages.
struct CandidateSet {
  Variant variant = Variant::SingleVector;
  std::vector<int> ids;
  std::vector<Vec4> voltages;
  std::vector<Legs> first_legs;
  std::vector<Legs> last_legs;
  std::vector<int> intra;
  std::vector<double> first_fraction;
  std::vector<bool> zero;

  static CandidateSet build(const ControllerConfig& config, const VsiTables& tables);
  std::size_t size() const { return ids.size(); }
  /// Materializes candidate n applied after a period ending in prev_last_legs.
  Action action(std::size_t n, const Legs& prev_last_legs) const;
};

struct Selection {
  Action action;
  double cost = 0.0;
  int delta_S = 0;
  Vec4 error = Vec4::Zero();  // predicted error at k+2
};

/// Delay-compensated exhaustive search: predicts i(k+1) under the committed
/// action, then i(k+2) for every candidate, and returns the argmin of cost().
/// Ties go to the lowest delta_S, then to the lowest index.
/// Throws std::invalid_argument on an empty candidate set.
Selection select_action(const Vec4& i_meas, const Action& committed, const Vec4& i_ref_k2,
                        const Vec4& G_hat, const DiscreteModel& model,
                        const ControllerConfig& config, const CandidateSet& candidates);

struct PredictorState {
  Action last_applied;
  Vec4 G_hat = Vec4::Zero();
  std::optional<Vec4> prev_meas;
  Vec4 prev_voltage = Vec4::Zero();
};

struct Decision {
  long k = 0;
  Selection selection;
};

/// Per-run controller; owns the predictor state.
class FsmpcController {
 public:
  FsmpcController(const ControllerConfig& config, const MachineParams& params,
                  const VsiTables& tables, double omega_r);

  /// The action applied during the current period [k, k+1).
  const Action& committed() const { return state_.last_applied; }
  const PredictorState& state() const { return state_; }
  const CandidateSet& candidates() const { return candidates_; }
  const DiscreteModel& model() const { return model_; }

  /// Runs the controller at instant k: refreshes G, selects the action for
  /// [k+1, k+2) and commits it. Call after reading committed() for the plant.
  Decision step(long k, const Vec4& i_meas, const Vec4& i_ref_k2);

 private:
  ControllerConfig config_;
  CandidateSet candidates_;
  DiscreteModel model_;
  PredictorState state_;
};

}  // namespace pentadrive
