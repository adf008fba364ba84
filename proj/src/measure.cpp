#include "pfsa/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace pfsa {

namespace {
constexpr double kTieTol = 1e-12;

Eigen::VectorXd solve_mu(const Eigen::MatrixXd& Pi, const Eigen::VectorXd& chi,
                         double theta) {
    const int n = static_cast<int>(Pi.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - (1.0 - theta) * Pi;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    return lu.solve(chi);
}
}  // namespace

MeasureVector renormalized_measure(const Eigen::MatrixXd& Pi,
                                   const Eigen::VectorXd& chi, double theta) {
    if (theta <= 0.0 || theta >= 1.0)
        throw std::invalid_argument("theta must lie in (0,1)");
    const int n = static_cast<int>(Pi.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - (1.0 - theta) * Pi;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    // theta [I-(1-theta)Pi]^{-1} must be row-stochastic.
    Eigen::VectorXd rows = theta * lu.solve(Eigen::VectorXd::Ones(n));
    if ((rows.array() - 1.0).abs().maxCoeff() > 1e-9)
        throw std::runtime_error("renormalized resolvent is not row-stochastic; input matrix is corrupt");
    MeasureVector mv;
    mv.theta = theta;
    mv.values = theta * lu.solve(chi);
    return mv;
}

Eigen::MatrixXd cesaro_limit(const Eigen::MatrixXd& Pi, double tol, int cap) {
    const int n = static_cast<int>(Pi.rows());
    // Damping with I/2 keeps the limit and removes periodicity; repeated
    // squaring then converges geometrically to the Cesaro limit.
    Eigen::MatrixXd A = 0.5 * (Pi + Eigen::MatrixXd::Identity(n, n));
    for (int k = 0; k < cap; ++k) {
        Eigen::MatrixXd A2 = A * A;
        if ((A2 - A).cwiseAbs().maxCoeff() < tol) return A2;
        A = A2;
    }
    throw std::runtime_error("Cesaro limit iteration did not converge");
}

Eigen::VectorXd limiting_measure(const Eigen::MatrixXd& Pi,
                                 const Eigen::VectorXd& chi) {
    return cesaro_limit(Pi) * chi;
}

double theta_star(const Eigen::MatrixXd& Pi, const Eigen::VectorXd& chi) {
    const int n = static_cast<int>(Pi.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd C = cesaro_limit(Pi, 1e-13);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - Pi + C);
    const Eigen::MatrixXd Z = lu.solve(I);
    const Eigen::MatrixXd M0 = Z * (I - C);
    const Eigen::MatrixXd M1 = I - M0;
    const double M2 = Z.cwiseAbs().rowwise().sum().maxCoeff();  // ||Z||_inf upper bound

    const Eigen::VectorXd Cx = C * chi;
    double ts = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double tc;
            if (std::abs(Cx(i) - Cx(j)) > kTieTol) {
                tc = std::abs(Cx(i) - Cx(j)) / (8.0 * M2);
            } else {
                // minimal r in 0..n with (M0 M1^r chi)_i != (M0 M1^r chi)_j
                int r = -1;
                Eigen::VectorXd w = chi, vr;
                for (int rr = 0; rr <= n; ++rr) {
                    Eigen::VectorXd v = M0 * w;
                    if (std::abs(v(i) - v(j)) > kTieTol) {
                        r = rr;
                        vr = v;
                        break;
                    }
                    w = M1 * w;
                }
                if (r < 0) {
                    tc = 1.0;
                } else if (r == 0) {
                    const Eigen::VectorXd d = M0 * chi - Cx;
                    tc = std::abs(d(i) - d(j)) / (8.0 * M2);
                } else {
                    tc = std::abs(vr(i) - vr(j)) / (std::pow(2.0, r + 3) * M2);
                }
            }
            ts = std::min(ts, tc);
        }
    }
    return std::min(1.0, std::max(ts, 1e-12));
}

namespace {

PairSet decisions_at(const Pfsa& g, const Eigen::MatrixXd& Pi,
                     const Eigen::VectorXd& chi, double theta, double lambda) {
    // Compare on mu = nu/theta: the lambda-precision guarantee holds for the
    // raw linear-solve output, and the sign ordering matches nu.
    const Eigen::VectorXd mu = solve_mu(Pi, chi, theta);
    const double gap = std::max(lambda, kTieTol);
    PairSet d;
    for (const auto& [q, e] : g.controllable)
        if (mu(g.delta[q][e]) < mu(q) - gap) d.insert({q, e});
    return d;
}

}  // namespace

SupervisionPolicy synthesize_supervisor(const Pfsa& g, double lambda) {
    const Eigen::VectorXd chi =
        Eigen::Map<const Eigen::VectorXd>(g.chi.data(), g.n());
    const long cap = (g.controllable.size() >= 20)
                         ? 1048577L
                         : (1L << g.controllable.size()) + 1;

    SupervisionPolicy pol;
    PairSet d;
    std::vector<Eigen::MatrixXd> plant_seq;
    double theta_min = 1.0;
    for (long it = 0; it < cap; ++it) {
        const Pfsa sup = apply_disabling(g, d);
        const Eigen::MatrixXd Pi = transition_matrix(sup);
        // Any theta at or below theta_star keeps the decisions stable; cap at
        // 0.5 so the certified measure is always evaluated strictly inside
        // (0,1) even when every comparison ties (theta_star = 1).
        double th = std::min(theta_star(Pi, chi), 0.5);
        // Decision-stability check: halve theta until decisions agree.
        PairSet dec = decisions_at(g, Pi, chi, th, lambda);
        for (int h = 0; h < 60; ++h) {
            PairSet dec2 = decisions_at(g, Pi, chi, th / 2.0, lambda);
            if (dec2 == dec) break;
            th /= 2.0;
            dec = dec2;
        }
        theta_min = std::min(theta_min, th);
        plant_seq.push_back(Pi);
        pol.iterations = static_cast<int>(it) + 1;
        if (dec == d) {
            pol.disabled = d;
            pol.theta_min = theta_min;
            pol.certified = renormalized_measure(Pi, chi, theta_min);
            // Monotonicity certificate: the whole iteration sequence evaluated
            // at the common final theta_min.
            for (const auto& P : plant_seq)
                pol.iteration_measures.push_back(
                    renormalized_measure(P, chi, theta_min).values);
            return pol;
        }
        d = dec;
    }
    throw std::runtime_error("supervisor synthesis did not stabilize within 2^|C|+1 iterations");
}

std::pair<PairSet, MeasureVector> brute_force_optimal(const Pfsa& g, double theta) {
    const std::size_t nc = g.controllable.size();
    if (nc > 16) throw std::invalid_argument("brute force limited to |C| <= 16");
    const Eigen::VectorXd chi =
        Eigen::Map<const Eigen::VectorXd>(g.chi.data(), g.n());
    std::vector<StateEvent> ctrl(g.controllable.begin(), g.controllable.end());

    std::vector<Eigen::VectorXd> measures(1u << nc);
    Eigen::VectorXd vmax = Eigen::VectorXd::Constant(g.n(), -2.0);
    for (std::size_t mask = 0; mask < (1u << nc); ++mask) {
        PairSet d;
        for (std::size_t b = 0; b < nc; ++b)
            if (mask & (1u << b)) d.insert(ctrl[b]);
        measures[mask] =
            renormalized_measure(transition_matrix(apply_disabling(g, d)), chi, theta)
                .values;
        vmax = vmax.cwiseMax(measures[mask]);
    }
    std::size_t best = 0;
    std::size_t best_size = nc + 1;
    for (std::size_t mask = 0; mask < (1u << nc); ++mask) {
        if (((measures[mask] - vmax).array() >= -1e-9).all()) {
            const std::size_t sz = static_cast<std::size_t>(__builtin_popcountll(mask));
            if (sz < best_size) {
                best = mask;
                best_size = sz;
            }
        }
    }
    PairSet dbest;
    for (std::size_t b = 0; b < nc; ++b)
        if (best & (1u << b)) dbest.insert(ctrl[b]);
    MeasureVector mv;
    mv.theta = theta;
    mv.values = vmax;
    return {dbest, mv};
}

bool reconfigure_and_check_monotone(const Eigen::MatrixXd& Pi,
                                    const Eigen::VectorXd& chi, double theta,
                                    const std::vector<Perturbation>& perts) {
    const Eigen::VectorXd mu = solve_mu(Pi, chi, theta);
    Eigen::MatrixXd P2 = Pi;
    for (const auto& p : perts) {
        if (p.beta <= 0.0) throw std::invalid_argument("perturbation mass must be positive");
        if (mu(p.j) > mu(p.k)) {
            P2(p.i, p.j) += p.beta;
            P2(p.i, p.k) -= p.beta;
        } else if (mu(p.j) < mu(p.k)) {
            P2(p.i, p.j) -= p.beta;
            P2(p.i, p.k) += p.beta;
        }  // equal measures: unchanged
    }
    if ((P2.array() < -1e-12).any() ||
        (P2.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-9)
        throw std::invalid_argument("perturbation violates row stochasticity");
    const Eigen::VectorXd nu = theta * mu;
    const Eigen::VectorXd nu2 = renormalized_measure(P2, chi, theta).values;
    return ((nu2 - nu).array() >= -1e-10).all();
}

}  // namespace pfsa
