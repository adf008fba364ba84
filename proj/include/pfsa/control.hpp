#pragma once

#include "pfsa/measure.hpp"
#include "pfsa/observer.hpp"

namespace pfsa {

// Online supervisory controller.  Perfect mode tracks the true state and
// compares nu* components; partial mode tracks an entangled state and signs
// <alpha, T^sigma>.  (G, nu*) fully determines the policy in both modes.
class Controller {
  public:
    enum class Mode { Perfect, Partial };

    static Controller init_perfect(const Pfsa& g, const Eigen::VectorXd& nu_star,
                                   int q0, double lambda = 1e-9);
    static Controller init_partial(const Pfsa& g, const Eigen::VectorXd& nu_star,
                                   const GammaSet& gs, int q0, double lambda = 1e-9);

    // Events currently disabled (event indices).
    const std::set<int>& disabled_now() const { return disabled_; }
    bool is_disabled(int sigma) const { return disabled_.count(sigma) > 0; }

    // Advance on an observed event.  Throws std::runtime_error if the
    // observation is impossible from the current state.
    void observe_event(int sigma);

    Mode mode() const { return mode_; }
    int current_state() const { return q_; }                    // perfect mode
    const Eigen::RowVectorXd& entangled() const { return alpha_; }  // partial mode

    // <alpha, nu*> in partial mode, nu*[q] in perfect mode.
    double instantaneous_measure() const;

  private:
    void decide();

    Mode mode_ = Mode::Perfect;
    const Pfsa* g_ = nullptr;
    Eigen::VectorXd nu_star_;
    GammaSet gs_;
    double lambda_ = 1e-9;
    int q_ = -1;
    Eigen::RowVectorXd alpha_;
    std::set<int> disabled_;
};

}  // namespace pfsa
