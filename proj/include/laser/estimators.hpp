#pragma once

#include "laser/mdp.hpp"

#include <optional>
#include <vector>

namespace laser {

/// Clipping constants for V-trace. rho_bar bounds the TD-term ratio, c_bar
/// the trace-continuation ratio; rho_bar >= c_bar >= 1 is required.
struct ClipConfig {
  double rho_bar = 1.0;
  double c_bar = 1.0;

  void validate() const;
  static ClipConfig unclipped();
};

/// A scalar return target plus diagnostics. `rejected` marks a trajectory
/// whose head state was refused by the trust region (distinct from a zero
/// return).
struct ReturnEstimate {
  double value = 0.0;
  int bootstrap_step = 0;             // index where correction terms stopped
  std::vector<double> per_step_weights;  // accumulated ratio products
  std::vector<bool> masked;           // lambda per step (all-true here)
  bool rejected = false;
};

// Naive multi-step importance-sampled return:
//   V(s_t) + sum_k gamma^k (prod_{i<=k} pi/mu) delta_{t+k} V
// over the first K steps of the trajectory. Ratio products are accumulated
// in log space. Throws std::invalid_argument on zero behaviour probability
// for a taken action.
ReturnEstimate is_return(const Trajectory& traj, const TabularPolicy& target,
                         const Eigen::VectorXd& bootstrap, double gamma, int K);

// V-trace return:
//   V(s_t) + sum_k gamma^k (prod_{i<k} c_i) rho_{t+k} delta_{t+k} V
// with rho = min(pi/mu, rho_bar), c = min(pi/mu, c_bar).
ReturnEstimate vtrace_return(const Trajectory& traj, const TabularPolicy& target,
                             const Eigen::VectorXd& bootstrap, double gamma,
                             const ClipConfig& clip, int K);

// V-trace targets for every step of the trajectory (backward recursion),
// with an optional per-step lambda mask. Used by the learner.
std::vector<double> vtrace_targets(const Trajectory& traj, const TabularPolicy& target,
                                   const Eigen::VectorXd& bootstrap, double gamma,
                                   const ClipConfig& clip,
                                   const std::vector<bool>* mask = nullptr);

// The policy whose value the V-trace operator converges to:
//   pi~(a) = min(rho_bar * mu(a), pi(a)) / normalizer.
Eigen::VectorXd implied_policy(const Eigen::VectorXd& target_row,
                               const Eigen::VectorXd& behaviour_row, double rho_bar);

// V-trace distortion factor omega(s,a) = min(1, rho_bar * mu/pi).
double omega(const Eigen::VectorXd& target_row, const Eigen::VectorXd& behaviour_row,
             double rho_bar, int action);
Eigen::VectorXd omega_row(const Eigen::VectorXd& target_row,
                          const Eigen::VectorXd& behaviour_row, double rho_bar);

// Implied state-action values Q^omega = Q .* omega.
Eigen::VectorXd q_omega(const Eigen::VectorXd& q_row, const Eigen::VectorXd& omega_row);

// Mixed estimate Q^alpha = Q d_pi alpha + Q^omega d_mu (1 - alpha).
Eigen::VectorXd q_alpha(const Eigen::VectorXd& q_row, const Eigen::VectorXd& q_omega_row,
                        double d_pi, double d_mu, double alpha);

// Full argmax set of a row, with ties within `tol`.
std::vector<int> argmax_set(const Eigen::VectorXd& row, double tol = 1e-12);

// Minimal on-policy fraction alpha* above which argmax(q_alpha) stays inside
// the best-action set of q_row. Returns 0 when pure off-policy is already
// argmax-correct. Throws when d_pi = 0 while mixing is required.
double min_alpha(const Eigen::VectorXd& q_row, const Eigen::VectorXd& q_omega_row,
                 double d_pi, double d_mu);

enum class GradientMode { OnPolicy, VtraceOffPolicy, Mixed };

struct LabeledTrajectory {
  Trajectory traj;
  bool online = false;
};

// Policy-gradient estimate over softmax logits on a fixed batch. Advantages
// use the corresponding return target minus the bootstrap value as baseline;
// V-trace modes additionally weight each term by the clipped rho.
Eigen::MatrixXd policy_gradient_estimate(const std::vector<LabeledTrajectory>& batch,
                                         const Eigen::MatrixXd& logits,
                                         const Eigen::VectorXd& bootstrap, double gamma,
                                         const ClipConfig& clip, GradientMode mode);

// The scalar surrogate whose logits-gradient policy_gradient_estimate
// returns, with advantages and rho weights frozen at `frozen_logits`.
// Exposed so finite-difference checks can perturb `logits` independently.
double policy_gradient_surrogate(const std::vector<LabeledTrajectory>& batch,
                                 const Eigen::MatrixXd& logits,
                                 const Eigen::MatrixXd& frozen_logits,
                                 const Eigen::VectorXd& bootstrap, double gamma,
                                 const ClipConfig& clip, GradientMode mode);

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

}  // namespace laser
