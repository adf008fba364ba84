#pragma once

#include "pfsa/model.hpp"

namespace pfsa {

// Petri-net observer: places = states; for each (place, event) either output
// arcs (to the unobservable-closure of the successor) or a flush-out arc.
struct PnObserver {
    std::vector<std::vector<std::vector<int>>> arcs;  // [place][event] -> targets
    std::vector<std::vector<bool>> flush;             // [place][event]
};

PnObserver build_pn_observer(const Pfsa& g);

// Q_bar(omega): support of the observer marking after firing omega.
// Throws std::runtime_error if an observed symbol is impossible.
std::set<int> possible_states(const Pfsa& g, const PnObserver& obs, int q0,
                              const std::vector<int>& omega);

// Event-indexed transition matrices of the fraction-net observer.
//   Gamma^s row i = row delta(q_i,s) of A = [I-(1-theta) P(Pi)]^{-1},
//                   zero row if undefined or unobservable.
//   GammaD^s row i = e_i if s controllable+observable at q_i, else Gamma row.
//   T^s = (Gamma^s - GammaD^s) nu*.
struct GammaSet {
    double theta = 0.0;
    Eigen::MatrixXd A;                       // [I-(1-theta)P(Pi)]^{-1}
    std::vector<Eigen::MatrixXd> gamma;      // per event
    std::vector<Eigen::MatrixXd> gamma_d;
    std::vector<Eigen::VectorXd> t_vec;
};

GammaSet gamma_matrices(const Pfsa& g, double theta, const Eigen::VectorXd& nu_star);

// alpha' = alpha Gamma^s (GammaD^s if the event was disabled); optionally
// normalized to unit 1-norm.  Throws std::runtime_error on a zero update.
Eigen::RowVectorXd evolve(const Eigen::RowVectorXd& alpha, int sigma,
                          bool disabled, const GammaSet& gs, bool normalize);

struct EnumerateResult {
    std::vector<Eigen::RowVectorXd> states;  // normalized representatives
    bool complete = true;                    // false if the cap was hit
};

// Breadth-first closure of the pure states under normalized evolve,
// deduplicating within max-norm tol.
EnumerateResult enumerate_entangled(const Pfsa& g, const GammaSet& gs,
                                    double tol = 1e-10, std::size_t cap = 1000000);

// Snap each coordinate to the eta-grid (round half up); pure states are fixed.
Eigen::RowVectorXd eta_quantize(const Eigen::RowVectorXd& alpha, double eta);

// Measure of the eta-quantized entangled machine restricted to pure states;
// satisfies ||nu_eta - nu_theta||_inf <= eta/theta.  States are normalized
// before quantization so the closure is finite.
Eigen::VectorXd eta_approximation_measure(const Pfsa& g, double theta, double eta,
                                          std::size_t cap = 1000000);

}  // namespace pfsa
