#pragma once

#include "pfsa/model.hpp"

namespace pfsa {

struct MeasureVector {
    double theta = 0.0;
    Eigen::VectorXd values;                           // nu_theta
    Eigen::VectorXd mu() const { return values / theta; }
};

// nu_theta = theta [I - (1-theta) Pi]^{-1} chi.  Verifies the resolvent is
// row-stochastic to 1e-9 before returning.
MeasureVector renormalized_measure(const Eigen::MatrixXd& Pi,
                                   const Eigen::VectorXd& chi, double theta);

// Cesaro limit via damped repeated squaring: C = lim ((Pi+I)/2)^(2^k).
// Throws std::runtime_error on non-convergence.
Eigen::MatrixXd cesaro_limit(const Eigen::MatrixXd& Pi, double tol = 1e-12,
                             int cap = 200);

// nu_0 = C(Pi) chi.
Eigen::VectorXd limiting_measure(const Eigen::MatrixXd& Pi,
                                 const Eigen::VectorXd& chi);

// Critical lower bound theta* such that disabling decisions at any
// theta in (0, theta*] agree with the theta -> 0+ ordering.
double theta_star(const Eigen::MatrixXd& Pi, const Eigen::VectorXd& chi);

struct SupervisionPolicy {
    PairSet disabled;              // D*
    MeasureVector certified;       // nu* at theta_min for the supervised plant
    double theta_min = 1.0;
    int iterations = 0;
    // Per-iteration plant measures re-evaluated at theta_min (monotone cert).
    std::vector<Eigen::VectorXd> iteration_measures;
};

// Optimal supervisor synthesis.  lambda > 0 quantizes every disabling
// comparison at precision lambda on mu = nu/theta (disable iff
// mu_j < mu_i - lambda), which keeps the achieved measure within lambda of
// optimal.  Throws std::runtime_error if D fails to stabilize in 2^|C|+1
// iterations.
SupervisionPolicy synthesize_supervisor(const Pfsa& g, double lambda = 0.0);

// Exhaustive oracle over all 2^|C| disabling subsets (|C| <= 16): returns the
// minimal (maximally permissive) set achieving the elementwise-max measure.
std::pair<PairSet, MeasureVector> brute_force_optimal(const Pfsa& g, double theta);

struct Perturbation {
    int i, j, k;     // move beta of row i's mass between columns j and k
    double beta;
};

// Applies the generalized-monotonicity reconfiguration (mass moves toward the
// higher-mu column) and reports whether nu# >= nu elementwise at theta.
bool reconfigure_and_check_monotone(const Eigen::MatrixXd& Pi,
                                    const Eigen::VectorXd& chi, double theta,
                                    const std::vector<Perturbation>& perts);

}  // namespace pfsa
