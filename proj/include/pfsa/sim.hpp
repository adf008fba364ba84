#pragma once

#include <cstdint>
#include <optional>

#include "pfsa/control.hpp"

namespace pfsa {

enum class Policy { Null, Perfect, Partial, PerfectBlind };

Policy policy_from_string(const std::string& s);  // throws on unknown name
std::string policy_name(Policy p);

struct SimConfig {
    long steps = 10000;
    int runs = 1;
    std::uint64_t seed = 0;
    Policy policy = Policy::Null;
    bool record_entangled = false;
    double dedup_tol = 1e-10;
    double lambda = 1e-9;
    int initial_state = 0;
};

struct TickRecord {
    int true_state;
    int observed;        // event index, -1 if hidden (epsilon)
    double chi_hat;
    double nu_hat;
    double int_chi;      // running prefix sums, unit time per event
    double int_nu;
    std::size_t n_entangled;  // distinct entangled states so far this run
};

struct SimTrace {
    int run = 0;
    std::vector<TickRecord> ticks;
    std::vector<Eigen::RowVectorXd> entangled;  // recorded normalized states
    double int_chi = 0.0;
    double int_nu = 0.0;
};

// Artifacts shared by all policies: the synthesized policy and (for partial
// runs) the Gamma matrices at theta_min.
struct PolicyArtifacts {
    SupervisionPolicy policy;
    MeasureVector unsupervised;  // at theta_min, used by the null policy
    std::optional<GammaSet> gammas;
};

PolicyArtifacts prepare_artifacts(const Pfsa& g, double lambda = 1e-9);

// One event per tick; cumulative-sum inversion in declared event order; one
// mt19937_64 stream per run seeded with splitmix64(seed ^ splitmix64(run)).
// A sampled-but-disabled controllable event self-loops the true plant.
std::vector<SimTrace> simulate(const Pfsa& g, const PolicyArtifacts& art,
                               const SimConfig& cfg);

// Pairwise-distinct (max-norm > tol) entangled states across traces.
std::size_t count_entangled(const std::vector<SimTrace>& traces, double tol);

// (empirical mean of recorded entangled states, initial-state row of the
// Cesaro limit of the supervised plant).
std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> expected_entangled_vs_stationary(
    const std::vector<SimTrace>& traces, const Pfsa& supervised, int q0);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pfsa
