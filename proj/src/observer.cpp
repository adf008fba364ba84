#include "pfsa/observer.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace pfsa {

namespace {

// States reachable from q by completely unobservable strings (including q).
std::set<int> unobservable_closure(const Pfsa& g, int q) {
    std::set<int> seen{q};
    std::deque<int> todo{q};
    while (!todo.empty()) {
        const int cur = todo.front();
        todo.pop_front();
        for (const auto& [s, e] : g.unobservable) {
            if (s != cur || !g.defined(s, e)) continue;
            const int nxt = g.delta[s][e];
            if (seen.insert(nxt).second) todo.push_back(nxt);
        }
    }
    return seen;
}

}  // namespace

PnObserver build_pn_observer(const Pfsa& g) {
    PnObserver obs;
    obs.arcs.assign(g.n(), std::vector<std::vector<int>>(g.m()));
    obs.flush.assign(g.n(), std::vector<bool>(g.m(), false));
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.m(); ++j) {
            if (!g.defined(i, j) || g.is_unobservable(i, j)) {
                obs.flush[i][j] = true;
                continue;
            }
            const auto closure = unobservable_closure(g, g.delta[i][j]);
            obs.arcs[i][j].assign(closure.begin(), closure.end());
        }
    }
    return obs;
}

std::set<int> possible_states(const Pfsa& g, const PnObserver& obs, int q0,
                              const std::vector<int>& omega) {
    if (q0 < 0 || q0 >= g.n()) throw std::invalid_argument("unknown initial state");
    std::set<int> support{q0};
    for (int sigma : omega) {
        std::set<int> next;
        for (int q : support)
            if (!obs.flush[q][sigma])
                next.insert(obs.arcs[q][sigma].begin(), obs.arcs[q][sigma].end());
        if (next.empty())
            throw std::runtime_error("observed symbol '" + g.events[sigma] +
                                     "' is impossible from the current marking");
        support = std::move(next);
    }
    return support;
}

GammaSet gamma_matrices(const Pfsa& g, double theta, const Eigen::VectorXd& nu_star) {
    if (theta < 0.0 || theta >= 1.0)
        throw std::invalid_argument("theta must lie in [0,1)");
    const int n = g.n();
    GammaSet gs;
    gs.theta = theta;
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - (1.0 - theta) * phantom_matrix(g);
    gs.A = Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(Eigen::MatrixXd::Identity(n, n));
    gs.gamma.resize(g.m());
    gs.gamma_d.resize(g.m());
    gs.t_vec.resize(g.m());
    for (int j = 0; j < g.m(); ++j) {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd GD = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            if (!g.defined(i, j) || g.is_unobservable(i, j)) continue;
            G.row(i) = gs.A.row(g.delta[i][j]);
            if (g.is_controllable(i, j))
                GD(i, i) = 1.0;  // disabled firing holds the estimate at q_i
            else
                GD.row(i) = G.row(i);
        }
        gs.t_vec[j] = (G - GD) * nu_star;
        gs.gamma[j] = std::move(G);
        gs.gamma_d[j] = std::move(GD);
    }
    return gs;
}

Eigen::RowVectorXd evolve(const Eigen::RowVectorXd& alpha, int sigma,
                          bool disabled, const GammaSet& gs, bool normalize) {
    Eigen::RowVectorXd out =
        alpha * (disabled ? gs.gamma_d[sigma] : gs.gamma[sigma]);
    const double sum = out.sum();
    if (sum <= 0.0)
        throw std::runtime_error("impossible observation: entangled update is zero");
    if (normalize) out /= sum;
    return out;
}

EnumerateResult enumerate_entangled(const Pfsa& g, const GammaSet& gs,
                                    double tol, std::size_t cap) {
    EnumerateResult res;
    auto find = [&](const Eigen::RowVectorXd& a) -> int {
        for (std::size_t k = 0; k < res.states.size(); ++k)
            if ((res.states[k] - a).cwiseAbs().maxCoeff() <= tol)
                return static_cast<int>(k);
        return -1;
    };
    for (int i = 0; i < g.n(); ++i) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(g.n());
        e(i) = 1.0;
        if (find(e) < 0) res.states.push_back(e);
    }
    for (std::size_t k = 0; k < res.states.size(); ++k) {
        if (res.states.size() >= cap) {
            res.complete = false;
            break;
        }
        const Eigen::RowVectorXd a = res.states[k];
        for (int j = 0; j < g.m(); ++j) {
            Eigen::RowVectorXd nxt = a * gs.gamma[j];
            if (nxt.sum() <= 0.0) continue;  // sigma not observable here
            nxt /= nxt.sum();
            if (find(nxt) < 0) res.states.push_back(std::move(nxt));
        }
    }
    return res;
}

Eigen::RowVectorXd eta_quantize(const Eigen::RowVectorXd& alpha, double eta) {
    if (eta <= 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in (0,1]");
    Eigen::RowVectorXd out = alpha;
    for (int i = 0; i < out.size(); ++i)
        out(i) = std::floor(out(i) / eta + 0.5) * eta;  // round half up
    return out;
}

Eigen::VectorXd eta_approximation_measure(const Pfsa& g, double theta, double eta,
                                          std::size_t cap) {
    if (theta <= 0.0 || theta >= 1.0)
        throw std::invalid_argument("theta must lie in (0,1)");
    const int n = g.n();
    const Eigen::VectorXd chi = Eigen::Map<const Eigen::VectorXd>(g.chi.data(), n);
    const GammaSet gs = gamma_matrices(g, theta, Eigen::VectorXd::Zero(n));

    // BFS closure of the pure states under quantize(normalize(alpha Gamma)).
    std::vector<Eigen::RowVectorXd> states;
    std::map<std::vector<long>, int> index;  // eta-grid coordinates
    auto key_of = [&](const Eigen::RowVectorXd& a) {
        std::vector<long> key(n);
        for (int i = 0; i < n; ++i) key[i] = std::lround(a(i) / eta);
        return key;
    };
    auto add = [&](const Eigen::RowVectorXd& a) {
        auto [it, fresh] = index.try_emplace(key_of(a), static_cast<int>(states.size()));
        if (fresh) states.push_back(a);
        return it->second;
    };
    for (int i = 0; i < n; ++i) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
        e(i) = 1.0;
        add(e);
    }
    struct Arc {
        int from, to;
        double p;
    };
    std::vector<Arc> arcs;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states.size() > cap)
            throw std::runtime_error("eta-quantized machine exceeded the state cap");
        const Eigen::RowVectorXd a = states[k];
        const Eigen::RowVectorXd norm = a / a.sum();
        for (int j = 0; j < g.m(); ++j) {
            double p = 0.0;
            for (int i = 0; i < n; ++i) p += norm(i) * g.pi[i][j];
            p *= (1.0 - theta);
            if (p <= 0.0) continue;
            Eigen::RowVectorXd nxt = a * gs.gamma[j];
            int to;
            if (nxt.sum() <= 0.0)
                to = static_cast<int>(k);  // unobservable firing: estimate unchanged
            else
                to = add(eta_quantize(nxt / nxt.sum(), eta));
            arcs.push_back({static_cast<int>(k), to, p});
        }
    }

    const int N = static_cast<int>(states.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
    for (const auto& arc : arcs) P(arc.from, arc.to) += arc.p;
    Eigen::VectorXd ch(N);
    for (int k = 0; k < N; ++k) ch(k) = (states[k] / states[k].sum()).dot(chi);
    // P already carries the (1-theta) factor.
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N) - P;
    Eigen::VectorXd v = theta * Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(ch);
    return v.head(n);
}

}  // namespace pfsa
