#include "pfsa/control.hpp"

#include <stdexcept>

namespace pfsa {

Controller Controller::init_perfect(const Pfsa& g, const Eigen::VectorXd& nu_star,
                                    int q0, double lambda) {
    if (q0 < 0 || q0 >= g.n()) throw std::invalid_argument("unknown initial state");
    Controller c;
    c.mode_ = Mode::Perfect;
    c.g_ = &g;
    c.nu_star_ = nu_star;
    c.lambda_ = lambda;
    c.q_ = q0;
    c.decide();
    return c;
}

Controller Controller::init_partial(const Pfsa& g, const Eigen::VectorXd& nu_star,
                                    const GammaSet& gs, int q0, double lambda) {
    if (q0 < 0 || q0 >= g.n()) throw std::invalid_argument("unknown initial state");
    Controller c;
    c.mode_ = Mode::Partial;
    c.g_ = &g;
    c.nu_star_ = nu_star;
    c.gs_ = gs;
    c.lambda_ = lambda;
    // alpha = e_{q0} M accounts for unobservable strings before the first
    // observation; M is the inverse already stored in the Gamma set.
    c.alpha_ = gs.A.row(q0);
    c.alpha_ /= c.alpha_.sum();
    c.decide();
    return c;
}

void Controller::decide() {
    disabled_.clear();
    if (mode_ == Mode::Perfect) {
        for (const auto& [q, e] : g_->controllable)
            if (q == q_ && nu_star_(g_->delta[q][e]) < nu_star_(q_) - lambda_)
                disabled_.insert(e);
    } else {
        for (int j = 0; j < g_->m(); ++j)
            if (alpha_.dot(gs_.t_vec[j]) < -lambda_) disabled_.insert(j);
    }
}

void Controller::observe_event(int sigma) {
    if (sigma < 0 || sigma >= g_->m())
        throw std::invalid_argument("unknown event");
    if (mode_ == Mode::Perfect) {
        const bool held = is_disabled(sigma) && g_->is_controllable(q_, sigma);
        if (!held) {
            if (!g_->defined(q_, sigma))
                throw std::runtime_error("impossible observation: event undefined at current state");
            q_ = g_->delta[q_][sigma];
        }
    } else {
        alpha_ = evolve(alpha_, sigma, is_disabled(sigma), gs_, true);
    }
    decide();
}

double Controller::instantaneous_measure() const {
    return mode_ == Mode::Perfect ? nu_star_(q_) : alpha_.dot(nu_star_);
}

}  // namespace pfsa
