#include "laser/mdp.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace laser {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_simplex_row(const Eigen::VectorXd& row, double tol, const std::string& what) {
  if ((row.array() < -tol).any()) {
    throw std::invalid_argument(what + ": negative probability");
  }
  if (std::abs(row.sum() - 1.0) > tol) {
    std::ostringstream os;
    os << what << ": row sums to " << row.sum() << ", expected 1";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

void Mdp::validate() const {
  if (n_states <= 0 || n_actions <= 0) {
    throw std::invalid_argument("Mdp: n_states and n_actions must be positive");
  }
  if (discount < 0.0 || discount >= 1.0) {
    throw std::invalid_argument("Mdp: discount must lie in [0, 1)");
  }
  if (static_cast<int>(transition.size()) != n_actions) {
    throw std::invalid_argument("Mdp: transition tensor has wrong action count");
  }
  if (reward.rows() != n_states || reward.cols() != n_actions) {
    throw std::invalid_argument("Mdp: reward has wrong shape");
  }
  if (static_cast<int>(terminal.size()) != n_states) {
    throw std::invalid_argument("Mdp: terminal flags have wrong length");
  }
  for (int a = 0; a < n_actions; ++a) {
    if (transition[a].rows() != n_states || transition[a].cols() != n_states) {
      throw std::invalid_argument("Mdp: transition matrix has wrong shape");
    }
    for (int s = 0; s < n_states; ++s) {
      check_simplex_row(transition[a].row(s).transpose(), kRowSumTol, "Mdp transition row");
    }
  }
  for (int s = 0; s < n_states; ++s) {
    if (!terminal[s]) continue;
    for (int a = 0; a < n_actions; ++a) {
      if (std::abs(transition[a](s, s) - 1.0) > kRowSumTol) {
        throw std::invalid_argument("Mdp: terminal state must self-loop");
      }
      if (reward(s, a) != 0.0) {
        throw std::invalid_argument("Mdp: terminal state must have zero reward");
      }
    }
  }
  if (initial_distribution.size() != n_states) {
    throw std::invalid_argument("Mdp: initial_distribution has wrong length");
  }
  check_simplex_row(initial_distribution, kRowSumTol, "Mdp initial_distribution");
}

void TabularPolicy::validate() const {
  for (int s = 0; s < probs.rows(); ++s) {
    check_simplex_row(probs.row(s).transpose(), kRowSumTol, "TabularPolicy row");
  }
}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
  TabularPolicy p;
  p.probs = Eigen::MatrixXd::Constant(n_states, n_actions, 1.0 / n_actions);
  return p;
}

void Trajectory::validate() const {
  for (const Step& st : steps) {
    check_simplex_row(st.behaviour_row, 1e-10, "Trajectory behaviour_row");
    if (st.behaviour_row(st.action) <= 0.0) {
      throw std::invalid_argument("Trajectory: behaviour probability zero on taken action");
    }
  }
}

Eigen::MatrixXd policy_transition_matrix(const Mdp& mdp, const TabularPolicy& policy) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
  for (int a = 0; a < mdp.n_actions; ++a) {
    p += policy.probs.col(a).asDiagonal() * mdp.transition[a];
  }
  return p;
}

Eigen::VectorXd solve_v_exact(const Mdp& mdp, const TabularPolicy& policy) {
  const Eigen::MatrixXd p_pi = policy_transition_matrix(mdp, policy);
  const Eigen::VectorXd r_pi = (policy.probs.array() * mdp.reward.array()).rowwise().sum();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(mdp.n_states, mdp.n_states) - mdp.discount * p_pi;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const Eigen::VectorXd v = lu.solve(r_pi);
  const double residual = (system * v - r_pi).lpNorm<Eigen::Infinity>();
  if (!v.allFinite() || residual > 1e-10) {
    throw std::runtime_error("solve_v_exact: linear system is singular or ill-conditioned");
  }
  return v;
}

Eigen::MatrixXd solve_q_exact(const Mdp& mdp, const TabularPolicy& policy) {
  const Eigen::VectorXd v = solve_v_exact(mdp, policy);
  Eigen::MatrixXd q(mdp.n_states, mdp.n_actions);
  for (int a = 0; a < mdp.n_actions; ++a) {
    q.col(a) = mdp.reward.col(a) + mdp.discount * (mdp.transition[a] * v);
  }
  return q;
}

namespace {

// Closed communicating classes of the chain, found via Tarjan SCCs restricted
// to positive-probability edges.
std::vector<std::vector<int>> closed_recurrent_classes(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0), comp(n, -1);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;

  struct Frame {
    int v;
    int next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < n) {
        const int w = f.next++;
        if (p(f.v, w) <= 0.0 || w == f.v) continue;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          std::vector<int> c;
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = static_cast<int>(comps.size());
            c.push_back(w);
            if (w == f.v) break;
          }
          comps.push_back(c);
        }
        const int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }

  std::vector<std::vector<int>> closed;
  for (const auto& c : comps) {
    bool is_closed = true;
    for (int s : c) {
      for (int t = 0; t < n && is_closed; ++t) {
        if (p(s, t) > 0.0 && comp[t] != comp[s]) is_closed = false;
      }
      if (!is_closed) break;
    }
    if (is_closed) closed.push_back(c);
  }
  return closed;
}

}  // namespace

Eigen::VectorXd state_distribution(const Mdp& mdp, const TabularPolicy& policy,
                                   DistributionKind kind) {
  const Eigen::MatrixXd p_pi = policy_transition_matrix(mdp, policy);
  const int n = mdp.n_states;
  if (kind == DistributionKind::Discounted) {
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(n, n) - mdp.discount * p_pi.transpose();
    Eigen::VectorXd d = system.partialPivLu().solve(
        (1.0 - mdp.discount) * mdp.initial_distribution);
    return d;
  }

  const auto classes = closed_recurrent_classes(p_pi);
  if (classes.size() != 1) {
    std::ostringstream os;
    os << "state_distribution: stationary distribution is not unique; "
       << classes.size() << " closed recurrent classes:";
    for (const auto& c : classes) {
      os << " {";
      for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
      os << "}";
    }
    throw std::runtime_error(os.str());
  }

  // Solve d^T P = d^T with sum(d) = 1 by replacing one equation.
  Eigen::MatrixXd system = p_pi.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  system.row(n - 1).setOnes();
  rhs(n - 1) = 1.0;
  Eigen::VectorXd d = system.fullPivLu().solve(rhs);
  if (!d.allFinite() || std::abs(d.sum() - 1.0) > 1e-8) {
    throw std::runtime_error("state_distribution: stationary solve failed");
  }
  return d;
}

namespace {

int sample_index(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (int i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (u < acc) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

Trajectory sample_episode(const Mdp& mdp, const TabularPolicy& policy,
                          std::uint64_t rng_seed, int max_steps) {
  if (max_steps < 1) throw std::invalid_argument("sample_episode: max_steps must be >= 1");
  std::mt19937_64 rng(rng_seed);
  Trajectory traj;
  int s = sample_index(mdp.initial_distribution, rng);
  traj.start_state = s;
  for (int t = 0; t < max_steps; ++t) {
    if (mdp.terminal[s]) {
      traj.ends_terminal = true;
      break;
    }
    const Eigen::VectorXd row = policy.probs.row(s).transpose();
    const int a = sample_index(row, rng);
    const int s_next = sample_index(mdp.transition[a].row(s).transpose(), rng);
    traj.steps.push_back({s, a, mdp.reward(s, a), s_next, row});
    s = s_next;
  }
  if (!traj.ends_terminal && mdp.terminal[s]) traj.ends_terminal = true;
  return traj;
}

std::string mdp_to_json(const Mdp& mdp) {
  nlohmann::json j;
  j["n_states"] = mdp.n_states;
  j["n_actions"] = mdp.n_actions;
  j["discount"] = mdp.discount;
  j["terminal"] = mdp.terminal;
  std::vector<double> init(mdp.initial_distribution.data(),
                           mdp.initial_distribution.data() + mdp.n_states);
  j["initial_distribution"] = init;
  std::vector<std::vector<double>> rew(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    rew[s].assign(mdp.reward.row(s).begin(), mdp.reward.row(s).end());
  }
  j["reward"] = rew;
  // transition[s][a][s']
  std::vector<std::vector<std::vector<double>>> tr(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    tr[s].resize(mdp.n_actions);
    for (int a = 0; a < mdp.n_actions; ++a) {
      tr[s][a].assign(mdp.transition[a].row(s).begin(), mdp.transition[a].row(s).end());
    }
  }
  j["transition"] = tr;
  return j.dump(2);
}

Mdp mdp_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Mdp mdp;
  mdp.n_states = j.at("n_states").get<int>();
  mdp.n_actions = j.at("n_actions").get<int>();
  mdp.discount = j.at("discount").get<double>();
  mdp.terminal = j.at("terminal").get<std::vector<bool>>();
  const auto init = j.at("initial_distribution").get<std::vector<double>>();
  mdp.initial_distribution =
      Eigen::Map<const Eigen::VectorXd>(init.data(), static_cast<int>(init.size()));
  mdp.reward.resize(mdp.n_states, mdp.n_actions);
  const auto rew = j.at("reward").get<std::vector<std::vector<double>>>();
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) mdp.reward(s, a) = rew.at(s).at(a);
  }
  mdp.transition.assign(mdp.n_actions,
                        Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states));
  const auto tr = j.at("transition").get<std::vector<std::vector<std::vector<double>>>>();
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      for (int sp = 0; sp < mdp.n_states; ++sp) {
        mdp.transition[a](s, sp) = tr.at(s).at(a).at(sp);
      }
    }
  }
  mdp.validate();
  return mdp;
}

}  // namespace laser
