#include "laser/zoo.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace laser {

namespace {

Mdp blank(int n_states, int n_actions, double discount) {
  Mdp m;
  m.n_states = n_states;
  m.n_actions = n_actions;
  m.discount = discount;
  m.transition.assign(n_actions, Eigen::MatrixXd::Zero(n_states, n_states));
  m.reward = Eigen::MatrixXd::Zero(n_states, n_actions);
  m.terminal.assign(n_states, false);
  m.initial_distribution = Eigen::VectorXd::Zero(n_states);
  return m;
}

}  // namespace

Mdp make_counterexample_bandit() {
  // State 0: action 0 pays 2, action 1 pays 5, both into the terminal state.
  Mdp m = blank(2, 2, 0.9);
  m.transition[0](0, 1) = 1.0;
  m.transition[1](0, 1) = 1.0;
  m.transition[0](1, 1) = 1.0;
  m.transition[1](1, 1) = 1.0;
  m.reward(0, 0) = 2.0;
  m.reward(0, 1) = 5.0;
  m.terminal[1] = true;
  m.initial_distribution(0) = 1.0;
  m.validate();
  return m;
}

Mdp make_chain(int n_states, double discount) {
  if (n_states < 2) throw std::invalid_argument("make_chain: need at least 2 states");
  Mdp m = blank(n_states, 2, discount);
  const int last = n_states - 1;
  for (int s = 0; s < last; ++s) {
    m.transition[0](s, s + 1) = 1.0;  // advance
    m.transition[1](s, s) = 1.0;      // stay
  }
  m.reward(last - 1, 0) = 1.0;
  m.transition[0](last, last) = 1.0;
  m.transition[1](last, last) = 1.0;
  m.terminal[last] = true;
  m.initial_distribution(0) = 1.0;
  m.validate();
  return m;
}

Mdp make_garnet(std::uint64_t seed, int n_states, int n_actions, int branching,
                double discount) {
  if (branching < 1 || branching > n_states) {
    throw std::invalid_argument("make_garnet: bad branching factor");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mdp m = blank(n_states, n_actions, discount);
  std::vector<int> states(n_states);
  for (int i = 0; i < n_states; ++i) states[i] = i;
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      std::shuffle(states.begin(), states.end(), rng);
      Eigen::VectorXd w = Eigen::VectorXd::Zero(n_states);
      double total = 0.0;
      for (int b = 0; b < branching; ++b) {
        const double x = unif(rng) + 1e-3;
        w(states[b]) = x;
        total += x;
      }
      m.transition[a].row(s) = (w / total).transpose();
      m.reward(s, a) = unif(rng);
    }
  }
  m.initial_distribution.setConstant(1.0 / n_states);
  m.validate();
  return m;
}

Mdp make_gridworld4(double discount) {
  constexpr int kSide = 4;
  constexpr int kCells = kSide * kSide;
  constexpr int kTasks = 4;
  const int n_states = kTasks * kCells + 1;  // plus shared terminal
  const int terminal_state = n_states - 1;
  // Per-task goal cells (row, col) and start cells, chosen so the optimal
  // action sequences differ between tasks.
  const int goal_rc[kTasks][2] = {{3, 3}, {3, 0}, {0, 3}, {2, 2}};
  const int start_rc[kTasks][2] = {{0, 0}, {0, 3}, {3, 0}, {0, 0}};
  // Actions: 0 up, 1 down, 2 left, 3 right.
  const int delta[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

  Mdp m = blank(n_states, 4, discount);
  for (int task = 0; task < kTasks; ++task) {
    const int base = task * kCells;
    const int goal = base + goal_rc[task][0] * kSide + goal_rc[task][1];
    for (int r = 0; r < kSide; ++r) {
      for (int c = 0; c < kSide; ++c) {
        const int s = base + r * kSide + c;
        for (int a = 0; a < 4; ++a) {
          int nr = r + delta[a][0];
          int nc = c + delta[a][1];
          if (nr < 0 || nr >= kSide || nc < 0 || nc >= kSide) {
            nr = r;
            nc = c;
          }
          int next = base + nr * kSide + nc;
          if (next == goal) {
            m.reward(s, a) = 1.0;
            next = terminal_state;
          }
          m.transition[a](s, next) += 1.0;
        }
      }
    }
    m.initial_distribution(base + start_rc[task][0] * kSide + start_rc[task][1]) =
        1.0 / kTasks;
  }
  // Goal cells are unreachable aliases once rewards route to the terminal
  // state; keep them valid self-loops anyway.
  for (int task = 0; task < kTasks; ++task) {
    const int goal = task * kCells + goal_rc[task][0] * kSide + goal_rc[task][1];
    for (int a = 0; a < 4; ++a) {
      m.transition[a].row(goal).setZero();
      m.transition[a](goal, goal) = 1.0;
      m.reward(goal, a) = 0.0;
    }
    m.terminal[goal] = true;
  }
  for (int a = 0; a < 4; ++a) m.transition[a](terminal_state, terminal_state) = 1.0;
  m.terminal[terminal_state] = true;
  m.validate();
  return m;
}

Mdp make_environment(const std::string& name, std::uint64_t seed) {
  if (name == "prop2-bandit") return make_counterexample_bandit();
  if (name == "gridworld4") return make_gridworld4();
  if (name.rfind("chain-", 0) == 0) {
    return make_chain(std::stoi(name.substr(6)));
  }
  if (name.rfind("garnet", 0) == 0) {
    int s = 5, a = 3, b = 2;
    if (name != "garnet") {
      std::istringstream is(name.substr(7));
      char dash1 = 0, dash2 = 0;
      if (!(is >> s >> dash1 >> a >> dash2 >> b) || dash1 != '-' || dash2 != '-') {
        throw std::invalid_argument("make_environment: expected garnet-S-A-B, got " + name);
      }
    }
    return make_garnet(seed, s, a, b);
  }
  throw std::invalid_argument("make_environment: unknown environment '" + name + "'");
}

}  // namespace laser
