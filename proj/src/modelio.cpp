#include "pfsa/modelio.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pfsa {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& text, std::size_t byte,
                          const std::string& what) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream ss;
    ss << "line " << line << ", column " << col << ": " << what;
    throw ParseError(ss.str());
}

int require_state(const Pfsa& g, const json& v, const char* where) {
    if (!v.is_string()) throw ParseError(std::string(where) + ": state name must be a string");
    const int i = g.state_index(v.get<std::string>());
    if (i < 0) throw ParseError(std::string(where) + ": unknown state '" + v.get<std::string>() + "'");
    return i;
}

int require_event(const Pfsa& g, const json& v, const char* where) {
    if (!v.is_string()) throw ParseError(std::string(where) + ": event name must be a string");
    const int j = g.event_index(v.get<std::string>());
    if (j < 0) throw ParseError(std::string(where) + ": unknown event '" + v.get<std::string>() + "'");
    return j;
}

PairSet parse_pair_list(const Pfsa& g, const json& arr, const char* where) {
    if (!arr.is_array()) throw ParseError(std::string(where) + " must be an array of [state,event] pairs");
    PairSet out;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2)
            throw ParseError(std::string(where) + " entries must be [state,event] pairs");
        out.insert({require_state(g, item[0], where), require_event(g, item[1], where)});
    }
    return out;
}

}  // namespace

Pfsa parse_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_at(text, e.byte, e.what());
    }
    if (!doc.is_object()) throw ParseError("model document must be a JSON object");

    static const std::set<std::string> known = {
        "states", "events", "transitions", "chi", "controllable", "unobservable"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) throw ParseError("unknown key '" + key + "'");
    for (const char* key : {"states", "events", "transitions", "chi"})
        if (!doc.contains(key)) throw ParseError(std::string("missing key '") + key + "'");

    Pfsa g;
    for (const auto& s : doc["states"]) {
        if (!s.is_string()) throw ParseError("states must be strings");
        if (g.state_index(s.get<std::string>()) >= 0)
            throw ParseError("duplicate state '" + s.get<std::string>() + "'");
        g.states.push_back(s.get<std::string>());
    }
    for (const auto& e : doc["events"]) {
        if (!e.is_string()) throw ParseError("events must be strings");
        if (g.event_index(e.get<std::string>()) >= 0)
            throw ParseError("duplicate event '" + e.get<std::string>() + "'");
        g.events.push_back(e.get<std::string>());
    }
    g.delta.assign(g.n(), std::vector<int>(g.m(), -1));
    g.pi.assign(g.n(), std::vector<double>(g.m(), 0.0));
    g.chi.assign(g.n(), 0.0);

    if (!doc["transitions"].is_array()) throw ParseError("transitions must be an array");
    for (const auto& t : doc["transitions"]) {
        if (!t.is_object()) throw ParseError("each transition must be an object");
        for (const char* key : {"from", "event", "to", "prob"})
            if (!t.contains(key))
                throw ParseError(std::string("transition missing key '") + key + "'");
        if (t.size() != 4) throw ParseError("transition has unknown keys");
        const int q = require_state(g, t["from"], "transition.from");
        const int e = require_event(g, t["event"], "transition.event");
        const int to = require_state(g, t["to"], "transition.to");
        if (!t["prob"].is_number()) throw ParseError("transition.prob must be a number");
        if (g.delta[q][e] >= 0)
            throw ParseError("duplicate transition (" + g.states[q] + "," + g.events[e] + ")");
        g.delta[q][e] = to;
        g.pi[q][e] = t["prob"].get<double>();
    }

    if (!doc["chi"].is_object()) throw ParseError("chi must be a map from state to number");
    for (const auto& [name, val] : doc["chi"].items()) {
        const int q = g.state_index(name);
        if (q < 0) throw ParseError("chi: unknown state '" + name + "'");
        if (!val.is_number()) throw ParseError("chi values must be numbers");
        g.chi[q] = val.get<double>();
    }

    if (doc.contains("controllable"))
        g.controllable = parse_pair_list(g, doc["controllable"], "controllable");
    if (doc.contains("unobservable"))
        g.unobservable = parse_pair_list(g, doc["unobservable"], "unobservable");
    return g;
}

Pfsa load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_model(const Pfsa& g) {
    json doc;
    doc["states"] = g.states;
    doc["events"] = g.events;
    json trans = json::array();
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.m(); ++j)
            if (g.defined(i, j))
                trans.push_back({{"from", g.states[i]},
                                 {"event", g.events[j]},
                                 {"to", g.states[g.delta[i][j]]},
                                 {"prob", g.pi[i][j]}});
    doc["transitions"] = trans;
    json chi = json::object();
    for (int i = 0; i < g.n(); ++i) chi[g.states[i]] = g.chi[i];
    doc["chi"] = chi;
    auto pairs = [&](const PairSet& set) {
        json arr = json::array();
        for (const auto& [q, e] : set) arr.push_back({g.states[q], g.events[e]});
        return arr;
    };
    doc["controllable"] = pairs(g.controllable);
    doc["unobservable"] = pairs(g.unobservable);
    return doc.dump(2) + "\n";
}

}  // namespace pfsa
