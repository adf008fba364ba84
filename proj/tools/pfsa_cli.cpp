// pfsa: command-line front end for the supervisory-control toolkit.
//
// Exit codes: 0 success, 1 validation failure, 2 parse failure, 3 runtime failure.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "pfsa/modelio.hpp"
#include "pfsa/sim.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kParseFailure = 2;
constexpr int kRuntimeFailure = 3;

pfsa::Pfsa load_validated(const std::string& path) {
    pfsa::Pfsa g = pfsa::load_model(path);
    const auto problems = pfsa::validate(g);
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << p << "\n";
        std::exit(kValidationFailure);
    }
    return g;
}

std::string fmt_full(double x) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return ss.str();
}

std::string fmt6(double x) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::fixed << std::setprecision(6) << x;
    return ss.str();
}

int cmd_validate(const std::string& path) {
    pfsa::Pfsa g = pfsa::load_model(path);
    const auto problems = pfsa::validate(g);
    if (problems.empty()) {
        std::cout << "ok: " << g.n() << " states, " << g.m() << " events, "
                  << g.controllable.size() << " controllable, "
                  << g.unobservable.size() << " unobservable transitions\n";
        return kOk;
    }
    for (const auto& p : problems) std::cout << p << "\n";
    return kValidationFailure;
}

int cmd_synthesize(const std::string& path, double theta_override, double lambda,
                   bool csv) {
    const pfsa::Pfsa g = load_validated(path);
    pfsa::SupervisionPolicy pol = pfsa::synthesize_supervisor(g, lambda);
    const Eigen::VectorXd chi = Eigen::Map<const Eigen::VectorXd>(g.chi.data(), g.n());
    Eigen::VectorXd nu = pol.certified.values;
    double theta = pol.theta_min;
    if (theta_override > 0.0) {
        theta = theta_override;
        nu = pfsa::renormalized_measure(
                 pfsa::transition_matrix(pfsa::apply_disabling(g, pol.disabled)), chi,
                 theta)
                 .values;
    }
    if (csv) {
        std::cout << "state,nu_star\n";
        for (int i = 0; i < g.n(); ++i)
            std::cout << g.states[i] << "," << fmt_full(nu(i)) << "\n";
        std::cout << "theta_min," << fmt_full(pol.theta_min) << "\n";
        std::cout << "iterations," << pol.iterations << "\n";
        for (const auto& [q, e] : pol.disabled)
            std::cout << "disabled," << g.states[q] << ":" << g.events[e] << "\n";
        return kOk;
    }
    std::cout << "disabled set:";
    if (pol.disabled.empty()) std::cout << " (empty)";
    for (const auto& [q, e] : pol.disabled)
        std::cout << " (" << g.states[q] << "," << g.events[e] << ")";
    std::cout << "\ntheta_min = " << fmt_full(pol.theta_min) << "\n";
    std::cout << "iterations = " << pol.iterations << "\n";
    std::cout << "nu* (theta = " << fmt_full(theta) << "):\n";
    for (int i = 0; i < g.n(); ++i)
        std::cout << "  " << g.states[i] << " = " << fmt6(nu(i)) << "\n";
    return kOk;
}

const char* kCsvHeader = "tick,run,true_state,observed,chi_hat,nu_hat,int_chi,int_nu,n_entangled";

void write_csv(const pfsa::Pfsa& g, const std::vector<pfsa::SimTrace>& traces,
               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.imbue(std::locale::classic());
    out << kCsvHeader << "\n";
    for (const auto& tr : traces) {
        long tick = 0;
        for (const auto& rec : tr.ticks) {
            out << tick << "," << tr.run << "," << g.states[rec.true_state] << ","
                << (rec.observed < 0 ? std::string("~") : g.events[rec.observed])
                << "," << fmt_full(rec.chi_hat) << "," << fmt_full(rec.nu_hat) << ","
                << fmt_full(rec.int_chi) << "," << fmt_full(rec.int_nu) << ","
                << rec.n_entangled << "\n";
            ++tick;
        }
    }
}

int cmd_simulate(const std::string& path, const std::string& policy_arg, long steps,
                 int runs, std::uint64_t seed, const std::string& out_path,
                 const std::string& initial) {
    const pfsa::Pfsa g = load_validated(path);
    std::vector<pfsa::Policy> policies;
    if (policy_arg == "all")
        policies = {pfsa::Policy::Null, pfsa::Policy::Perfect, pfsa::Policy::Partial,
                    pfsa::Policy::PerfectBlind};
    else
        policies = {pfsa::policy_from_string(policy_arg)};

    const pfsa::PolicyArtifacts art = pfsa::prepare_artifacts(g);
    int q0 = 0;
    if (!initial.empty()) {
        q0 = g.state_index(initial);
        if (q0 < 0) throw std::runtime_error("unknown initial state: " + initial);
    }

    std::cout << "policy,runs,steps,mean_int_chi,mean_int_nu\n";
    for (pfsa::Policy pol : policies) {
        pfsa::SimConfig cfg;
        cfg.steps = steps;
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.policy = pol;
        cfg.initial_state = q0;
        const auto traces = pfsa::simulate(g, art, cfg);
        double mchi = 0.0, mnu = 0.0;
        for (const auto& tr : traces) {
            mchi += tr.int_chi;
            mnu += tr.int_nu;
        }
        if (!traces.empty()) {
            mchi /= traces.size();
            mnu /= traces.size();
        }
        std::cout << pfsa::policy_name(pol) << "," << runs << "," << steps << ","
                  << fmt_full(mchi) << "," << fmt_full(mnu) << "\n";
        if (!out_path.empty()) {
            std::string file = out_path;
            if (policies.size() > 1) {
                const auto dot = file.rfind('.');
                const std::string suffix = "." + pfsa::policy_name(pol);
                if (dot == std::string::npos)
                    file += suffix;
                else
                    file.insert(dot, suffix);
            }
            write_csv(g, traces, file);
        }
    }
    return kOk;
}

int cmd_entangled(const std::string& path, double tol, std::size_t cap, double theta,
                  bool print_states) {
    const pfsa::Pfsa g = load_validated(path);
    double th = theta;
    if (th <= 0.0) {
        const pfsa::SupervisionPolicy pol = pfsa::synthesize_supervisor(g);
        th = pol.theta_min;
    }
    const pfsa::GammaSet gs =
        pfsa::gamma_matrices(g, th, Eigen::VectorXd::Zero(g.n()));
    const pfsa::EnumerateResult res = pfsa::enumerate_entangled(g, gs, tol, cap);
    std::cout << "count = " << res.states.size() << "\n";
    std::cout << "saturated = " << (res.complete ? "no" : "yes") << "\n";
    if (print_states) {
        for (const auto& a : res.states) {
            std::cout << "[";
            for (int i = 0; i < a.size(); ++i)
                std::cout << (i ? " " : "") << fmt_full(a(i));
            std::cout << "]\n";
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PFSA supervisory-control toolkit"};
    app.require_subcommand(1);

    std::string path, policy = "null", out_path, initial;
    double theta_override = 0.0, lambda = 0.0, tol = 1e-10, theta = 0.0;
    bool csv = false, print_states = false;
    long steps = 10000;
    int runs = 1;
    std::uint64_t seed = 0;
    std::size_t cap = 1000000;

    auto* val = app.add_subcommand("validate", "Check a model file");
    val->add_option("path", path)->required();

    auto* syn = app.add_subcommand("synthesize", "Compute the optimal supervisor");
    syn->add_option("path", path)->required();
    syn->add_option("--theta-override", theta_override,
                    "Re-evaluate nu* at this theta instead of theta_min");
    syn->add_option("--lambda", lambda, "Decision quantization precision");
    syn->add_flag("--format-csv,--csv", csv, "Machine-readable CSV output");
    syn->add_option("--format", [&csv](const std::vector<std::string>& v) {
        if (v[0] == "csv") { csv = true; return true; }
        if (v[0] == "text") { csv = false; return true; }
        return false;
    }, "Output format: text or csv");

    auto* sim = app.add_subcommand("simulate", "Run seeded Monte Carlo traces");
    sim->add_option("path", path)->required();
    sim->add_option("--policy", policy, "null|perfect|partial|perfect_blind|all");
    sim->add_option("--steps", steps);
    sim->add_option("--runs", runs);
    sim->add_option("--seed", seed);
    sim->add_option("--out", out_path, "Per-tick CSV output path");
    sim->add_option("--initial", initial, "Initial state name (default: first state)");

    auto* ent = app.add_subcommand("entangled", "Enumerate reachable entangled states");
    ent->add_option("path", path)->required();
    ent->add_option("--tol", tol, "Max-norm dedup tolerance");
    ent->add_option("--cap", cap, "Enumeration cap");
    ent->add_option("--theta", theta, "Termination probability (default: theta_min)");
    ent->add_flag("--print", print_states, "Print the state vectors");

    CLI11_PARSE(app, argc, argv);

    try {
        if (val->parsed()) return cmd_validate(path);
        if (syn->parsed()) return cmd_synthesize(path, theta_override, lambda, csv);
        if (sim->parsed())
            return cmd_simulate(path, policy, steps, runs, seed, out_path, initial);
        if (ent->parsed()) return cmd_entangled(path, tol, cap, theta, print_states);
    } catch (const pfsa::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return kOk;
}
