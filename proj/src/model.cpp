#include "pfsa/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pfsa {

namespace {
constexpr double kRowSumTol = 1e-12;
}

int Pfsa::state_index(const std::string& s) const {
    for (int i = 0; i < n(); ++i)
        if (states[i] == s) return i;
    return -1;
}

int Pfsa::event_index(const std::string& e) const {
    for (int j = 0; j < m(); ++j)
        if (events[j] == e) return j;
    return -1;
}

std::vector<std::string> validate(const Pfsa& g) {
    std::vector<std::string> out;
    auto bad = [&](const std::string& msg) { out.push_back(msg); };

    if (g.states.empty()) bad("model has no states");
    if (g.events.empty()) bad("model has no events");
    if (static_cast<int>(g.delta.size()) != g.n() ||
        static_cast<int>(g.pi.size()) != g.n() ||
        static_cast<int>(g.chi.size()) != g.n()) {
        bad("internal table sizes disagree with the state count");
        return out;
    }

    for (int i = 0; i < g.n(); ++i) {
        double row = 0.0;
        for (int j = 0; j < g.m(); ++j) {
            const double p = g.pi[i][j];
            const bool def = g.defined(i, j);
            if (p < 0.0 || p >= 1.0 + kRowSumTol) {
                std::ostringstream ss;
                ss << "pi(" << g.states[i] << "," << g.events[j]
                   << ") = " << p << " outside [0,1)";
                bad(ss.str());
            }
            if (def != (p > 0.0)) {
                std::ostringstream ss;
                ss << "transition (" << g.states[i] << "," << g.events[j]
                   << "): delta defined iff probability positive is violated";
                bad(ss.str());
            }
            if (def && (g.delta[i][j] < 0 || g.delta[i][j] >= g.n())) {
                std::ostringstream ss;
                ss << "delta(" << g.states[i] << "," << g.events[j]
                   << ") points outside the state set";
                bad(ss.str());
            }
            row += p;
        }
        if (std::abs(row - 1.0) > kRowSumTol) {
            std::ostringstream ss;
            ss << "event probabilities at state " << g.states[i] << " sum to "
               << row << ", not 1";
            bad(ss.str());
        }
        if (std::abs(g.chi[i]) > 1.0) {
            std::ostringstream ss;
            ss << "chi(" << g.states[i] << ") = " << g.chi[i] << " outside [-1,1]";
            bad(ss.str());
        }
    }

    auto check_defined = [&](const PairSet& set, const char* name) {
        for (const auto& [q, e] : set) {
            if (q < 0 || q >= g.n() || e < 0 || e >= g.m() || !g.defined(q, e)) {
                std::ostringstream ss;
                ss << name << " entry refers to an undefined transition";
                if (q >= 0 && q < g.n() && e >= 0 && e < g.m())
                    ss << " (" << g.states[q] << "," << g.events[e] << ")";
                bad(ss.str());
            }
        }
    };
    check_defined(g.controllable, "controllable");
    check_defined(g.unobservable, "unobservable");

    for (const auto& qe : g.unobservable) {
        if (g.controllable.count(qe)) {
            std::ostringstream ss;
            ss << "transition (" << g.states[qe.first] << "," << g.events[qe.second]
               << ") is both controllable and unobservable; unobservable "
                  "transitions must be uncontrollable";
            bad(ss.str());
        }
    }
    return out;
}

Eigen::MatrixXd transition_matrix(const Pfsa& g) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.m(); ++j)
            if (g.defined(i, j)) P(i, g.delta[i][j]) += g.pi[i][j];
    return P;
}

Eigen::MatrixXd phantom_matrix(const Pfsa& g) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (const auto& [q, e] : g.unobservable)
        if (g.defined(q, e)) P(q, g.delta[q][e]) += g.pi[q][e];
    return P;
}

Pfsa apply_disabling(const Pfsa& g, const PairSet& d) {
    for (const auto& qe : d)
        if (!g.controllable.count(qe))
            throw std::invalid_argument("disabling set contains an uncontrollable transition");
    Pfsa out = g;
    for (const auto& [q, e] : d) out.delta[q][e] = q;
    return out;
}

}  // namespace pfsa
