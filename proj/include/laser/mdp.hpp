#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace laser {

/// Finite MDP with deterministic rewards r(s,a) and a fixed discount.
/// Transition tensor is stored per action: transition[a](s, s') = P(s'|s,a).
/// Terminal states must self-loop with reward 0.
struct Mdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<Eigen::MatrixXd> transition;  // [a](s, s')
  Eigen::MatrixXd reward;                   // (s, a)
  double discount = 0.0;
  std::vector<bool> terminal;
  Eigen::VectorXd initial_distribution;

  // Throws std::invalid_argument if any structural invariant is violated
  // (row sums, terminal self-loops, discount range).
  void validate() const;
};

/// Per-state action probabilities pi(a|s), one row per state.
struct TabularPolicy {
  Eigen::MatrixXd probs;  // (s, a)

  void validate() const;

  int n_states() const { return static_cast<int>(probs.rows()); }
  int n_actions() const { return static_cast<int>(probs.cols()); }

  static TabularPolicy uniform(int n_states, int n_actions);
};

/// One environment transition. next_state is recorded so that a truncated
/// trajectory still carries the state needed for bootstrapping.
struct Step {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
  Eigen::VectorXd behaviour_row;  // mu(.|state) at acting time
};

struct Trajectory {
  std::vector<Step> steps;
  int start_state = 0;
  std::int64_t behaviour_id = 0;
  bool ends_terminal = false;

  int length() const { return static_cast<int>(steps.size()); }
  // State the estimator bootstraps from when the trajectory is truncated.
  int final_state() const { return steps.empty() ? start_state : steps.back().next_state; }

  void validate() const;
};

enum class DistributionKind { Discounted, UndiscountedStationary };

// Exact policy evaluation: solves (I - gamma * P_pi) V = r_pi.
Eigen::VectorXd solve_v_exact(const Mdp& mdp, const TabularPolicy& policy);

// Q(s,a) = r(s,a) + gamma * sum_s' P(s'|s,a) V(s').
Eigen::MatrixXd solve_q_exact(const Mdp& mdp, const TabularPolicy& policy);

// Discounted visitation d = (1-gamma) * d0^T (I - gamma P_pi)^{-1}, or the
// stationary distribution of the induced chain. The stationary variant throws
// std::runtime_error naming the recurrent classes when the chain has more
// than one (the distribution is then not unique).
Eigen::VectorXd state_distribution(const Mdp& mdp, const TabularPolicy& policy,
                                   DistributionKind kind);

// Samples one episode, stopping at a terminal state or after max_steps.
// Pure function of (mdp, policy, seed, max_steps).
Trajectory sample_episode(const Mdp& mdp, const TabularPolicy& policy,
                          std::uint64_t rng_seed, int max_steps);

// Matrix of the induced chain: P_pi(s, s') = sum_a pi(a|s) P(s'|s,a).
Eigen::MatrixXd policy_transition_matrix(const Mdp& mdp, const TabularPolicy& policy);

// JSON round trip. Field names: n_states, n_actions, transition, reward,
// discount, terminal, initial_distribution.
std::string mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const std::string& text);

}  // namespace laser
