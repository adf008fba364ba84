#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pfsa {

using StateEvent = std::pair<int, int>;  // (state index, event index)
using PairSet = std::set<StateEvent>;

// G = (Q, Sigma, delta, pi~, chi, C) plus a state-based unobservability set.
// Stored nonterminating: rows of pi~ sum to 1; the (1-theta) factor is applied
// functionally wherever a terminating plant is needed.
struct Pfsa {
    std::vector<std::string> states;   // declaration order fixes all indices
    std::vector<std::string> events;
    std::vector<std::vector<int>> delta;     // n x m, -1 = undefined
    std::vector<std::vector<double>> pi;     // n x m event generation probs
    std::vector<double> chi;                 // per-state characteristic in [-1,1]
    PairSet controllable;
    PairSet unobservable;

    int n() const { return static_cast<int>(states.size()); }
    int m() const { return static_cast<int>(events.size()); }
    int state_index(const std::string& s) const;
    int event_index(const std::string& e) const;
    bool defined(int q, int e) const { return delta[q][e] >= 0; }
    bool is_controllable(int q, int e) const { return controllable.count({q, e}) > 0; }
    bool is_unobservable(int q, int e) const { return unobservable.count({q, e}) > 0; }
};

// Empty list iff the model satisfies every structural invariant.
std::vector<std::string> validate(const Pfsa& g);

// Pi_ij = sum of pi~(q_i, sigma) over events with delta(q_i, sigma) = q_j.
Eigen::MatrixXd transition_matrix(const Pfsa& g);

// Phantom automaton transition matrix: only unobservable transitions retained.
Eigen::MatrixXd phantom_matrix(const Pfsa& g);

// Redirect each disabled transition to a self-loop; probability unchanged.
// Throws std::invalid_argument if D is not a subset of the controllable set.
Pfsa apply_disabling(const Pfsa& g, const PairSet& d);

}  // namespace pfsa
