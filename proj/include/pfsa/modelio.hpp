#pragma once

#include <stdexcept>

#include "pfsa/model.hpp"

namespace pfsa {

// Document is structurally malformed (bad JSON, unknown keys, wrong types,
// unknown state/event names, duplicate transitions).  Distinct from semantic
// validation failures reported by validate().
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON model schema: states, events, transitions [{from,event,to,prob}],
// chi {state: value}, controllable [[state,event]], unobservable [[state,event]].
Pfsa parse_model(const std::string& text);
Pfsa load_model(const std::string& path);   // ParseError with file context
std::string serialize_model(const Pfsa& g);

}  // namespace pfsa
