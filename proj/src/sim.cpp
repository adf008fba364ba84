#include "pfsa/sim.hpp"

#include <random>
#include <stdexcept>

namespace pfsa {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Policy policy_from_string(const std::string& s) {
    if (s == "null") return Policy::Null;
    if (s == "perfect") return Policy::Perfect;
    if (s == "partial") return Policy::Partial;
    if (s == "perfect_blind") return Policy::PerfectBlind;
    throw std::invalid_argument("unknown policy: " + s);
}

std::string policy_name(Policy p) {
    switch (p) {
        case Policy::Null: return "null";
        case Policy::Perfect: return "perfect";
        case Policy::Partial: return "partial";
        case Policy::PerfectBlind: return "perfect_blind";
    }
    return "?";
}

PolicyArtifacts prepare_artifacts(const Pfsa& g, double lambda) {
    PolicyArtifacts art;
    art.policy = synthesize_supervisor(g);
    const Eigen::VectorXd chi = Eigen::Map<const Eigen::VectorXd>(g.chi.data(), g.n());
    art.unsupervised =
        renormalized_measure(transition_matrix(g), chi, art.policy.theta_min);
    art.gammas = gamma_matrices(g, art.policy.theta_min, art.policy.certified.values);
    (void)lambda;
    return art;
}

namespace {

// Cumulative-sum inversion in declared event order.
int sample_event(const Pfsa& g, int q, double u) {
    double acc = 0.0;
    int last = -1;
    for (int j = 0; j < g.m(); ++j) {
        const double p = g.pi[q][j];
        if (p <= 0.0) continue;
        last = j;
        acc += p;
        if (u < acc) return j;
    }
    return last;  // u landed in the trailing rounding slack
}

}  // namespace

std::vector<SimTrace> simulate(const Pfsa& g, const PolicyArtifacts& art,
                               const SimConfig& cfg) {
    const Eigen::VectorXd& nu_star = art.policy.certified.values;
    const Eigen::VectorXd& nu_null = art.unsupervised.values;

    std::vector<SimTrace> traces;
    traces.reserve(cfg.runs);
    for (int run = 0; run < cfg.runs; ++run) {
        std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(run)));
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        SimTrace tr;
        tr.run = run;
        tr.ticks.reserve(cfg.steps);
        int s = cfg.initial_state;
        int believed = s;  // perfect_blind's state estimate
        std::optional<Controller> ctl;
        if (cfg.policy == Policy::Perfect)
            ctl = Controller::init_perfect(g, nu_star, s, cfg.lambda);
        else if (cfg.policy == Policy::Partial)
            ctl = Controller::init_partial(g, nu_star, *art.gammas, s, cfg.lambda);

        // The distinct-state scan is quadratic; only pay for it when asked.
        std::vector<Eigen::RowVectorXd> distinct;
        auto record_alpha = [&](const Eigen::RowVectorXd& a) {
            if (!cfg.record_entangled) return;
            tr.entangled.push_back(a);
            for (const auto& b : distinct)
                if ((b - a).cwiseAbs().maxCoeff() <= cfg.dedup_tol) return;
            distinct.push_back(a);
        };
        if (cfg.policy == Policy::Partial) record_alpha(ctl->entangled());

        for (long t = 0; t < cfg.steps; ++t) {
            const int sigma = sample_event(g, s, unif(rng));
            bool disabled = false;
            if (g.is_controllable(s, sigma)) {
                switch (cfg.policy) {
                    case Policy::Null: break;
                    case Policy::Perfect:
                    case Policy::Partial:
                        disabled = ctl->is_disabled(sigma);
                        break;
                    case Policy::PerfectBlind:
                        disabled = g.is_controllable(believed, sigma) &&
                                   g.defined(believed, sigma) &&
                                   nu_star(g.delta[believed][sigma]) <
                                       nu_star(believed) - cfg.lambda;
                        break;
                }
            }
            const bool observable = !g.is_unobservable(s, sigma);
            s = disabled ? s : g.delta[s][sigma];
            // The perfect controller sees every event; the partial controller
            // and the blind believed-state tracker only see observable ones.
            if (cfg.policy == Policy::Perfect) ctl->observe_event(sigma);
            if (observable) {
                if (cfg.policy == Policy::Partial) ctl->observe_event(sigma);
                if (cfg.policy == Policy::PerfectBlind && g.defined(believed, sigma)) {
                    const bool held = g.is_controllable(believed, sigma) &&
                                      nu_star(g.delta[believed][sigma]) <
                                          nu_star(believed) - cfg.lambda;
                    if (!held) believed = g.delta[believed][sigma];
                }
                if (cfg.policy == Policy::Partial) record_alpha(ctl->entangled());
            }

            TickRecord rec;
            rec.true_state = s;
            rec.observed = observable ? sigma : -1;
            rec.chi_hat = g.chi[s];
            switch (cfg.policy) {
                case Policy::Null: rec.nu_hat = nu_null(s); break;
                case Policy::Perfect: rec.nu_hat = nu_star(s); break;
                case Policy::Partial: rec.nu_hat = ctl->instantaneous_measure(); break;
                case Policy::PerfectBlind: rec.nu_hat = nu_star(believed); break;
            }
            tr.int_chi += rec.chi_hat;
            tr.int_nu += rec.nu_hat;
            rec.int_chi = tr.int_chi;
            rec.int_nu = tr.int_nu;
            rec.n_entangled = distinct.size();
            tr.ticks.push_back(rec);
        }
        traces.push_back(std::move(tr));
    }
    return traces;
}

std::size_t count_entangled(const std::vector<SimTrace>& traces, double tol) {
    std::vector<Eigen::RowVectorXd> distinct;
    for (const auto& tr : traces) {
        for (const auto& a : tr.entangled) {
            bool fresh = true;
            for (const auto& b : distinct)
                if ((b - a).cwiseAbs().maxCoeff() <= tol) {
                    fresh = false;
                    break;
                }
            if (fresh) distinct.push_back(a);
        }
    }
    return distinct.size();
}

std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> expected_entangled_vs_stationary(
    const std::vector<SimTrace>& traces, const Pfsa& supervised, int q0) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(supervised.n());
    std::size_t count = 0;
    for (const auto& tr : traces)
        for (const auto& a : tr.entangled) {
            mean += a;
            ++count;
        }
    if (count == 0) throw std::invalid_argument("no entangled states were recorded");
    mean /= static_cast<double>(count);
    const Eigen::MatrixXd C = cesaro_limit(transition_matrix(supervised));
    return {mean, C.row(q0)};
}

}  // namespace pfsa
