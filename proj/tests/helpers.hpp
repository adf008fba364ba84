#pragma once

// Shared test utilities: fixture paths and a seeded random-plant generator.

#include <random>
#include <string>

#include "pfsa/model.hpp"
#include "pfsa/modelio.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline pfsa::Pfsa load_fixture(const std::string& name) {
    return pfsa::load_model(fixture(name));
}

struct PlantOptions {
    int min_states = 3;
    int max_states = 6;
    int min_events = 2;
    int max_events = 4;
    double controllable_rate = 0.4;
    double unobservable_rate = 0.15;
    std::size_t max_controllable = 10;
};

// Random valid plant: every state has at least one defined event, rows are
// stochastic, unobservable transitions are never controllable.
inline pfsa::Pfsa random_plant(std::mt19937_64& rng, const PlantOptions& opt = {}) {
    std::uniform_int_distribution<int> nd(opt.min_states, opt.max_states);
    std::uniform_int_distribution<int> md(opt.min_events, opt.max_events);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    pfsa::Pfsa g;
    const int n = nd(rng);
    const int m = md(rng);
    for (int i = 0; i < n; ++i) g.states.push_back("q" + std::to_string(i));
    for (int j = 0; j < m; ++j) g.events.push_back("s" + std::to_string(j));
    g.delta.assign(n, std::vector<int>(m, -1));
    g.pi.assign(n, std::vector<double>(m, 0.0));
    g.chi.resize(n);

    std::uniform_int_distribution<int> target(0, n - 1);
    for (int i = 0; i < n; ++i) {
        std::vector<int> defined;
        for (int j = 0; j < m; ++j)
            if (unif(rng) < 0.7) defined.push_back(j);
        if (defined.empty()) defined.push_back(std::uniform_int_distribution<int>(0, m - 1)(rng));
        double total = 0.0;
        std::vector<double> w(defined.size());
        for (auto& x : w) {
            x = 0.05 + unif(rng);
            total += x;
        }
        for (std::size_t k = 0; k < defined.size(); ++k) {
            g.delta[i][defined[k]] = target(rng);
            g.pi[i][defined[k]] = w[k] / total;
        }
        g.chi[i] = 2.0 * unif(rng) - 1.0;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            if (!g.defined(i, j)) continue;
            if (g.controllable.size() < opt.max_controllable &&
                unif(rng) < opt.controllable_rate)
                g.controllable.insert({i, j});
            else if (unif(rng) < opt.unobservable_rate)
                g.unobservable.insert({i, j});
        }
    return g;
}

}  // namespace testutil
