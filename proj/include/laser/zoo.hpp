#pragma once

#include "laser/mdp.hpp"

#include <cstdint>
#include <string>

namespace laser {

// Two-action bandit-style MDP whose optimal action values are Q = (2, 5).
Mdp make_counterexample_bandit();

// N-state deterministic chain; reward 1 on entering the final (terminal)
// state, 0 elsewhere. Two actions: advance and stay.
Mdp make_chain(int n_states, double discount = 0.9);

// Random garnet MDP: every (s,a) transitions to `branching` uniformly chosen
// successor states with random weights; rewards uniform in [0, 1].
Mdp make_garnet(std::uint64_t seed, int n_states = 5, int n_actions = 3,
                int branching = 2, double discount = 0.9);

// Four disjoint gridworld tasks (one goal each) behind a single MDP; the
// initial distribution picks a task uniformly. Four move actions.
Mdp make_gridworld4(double discount = 0.97);

// Resolves an environment by name: "prop2-bandit", "chain-N", "gridworld4",
// "garnet-S-A-B". Throws std::invalid_argument for unknown names.
Mdp make_environment(const std::string& name, std::uint64_t seed);

}  // namespace laser
