#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cmbp/lang.hpp"

/// Explicit-state reference implementation: breadth-first search over belief
/// states represented as sorted vectors of states, with no symbolic machinery
/// involved. Exponential in the number of fluents, usable only on small
/// domains; exists to cross-check the symbolic engine and to validate
/// expected plan lengths.
namespace cmbp::oracle {

enum class outcome { plan, fail, unknown };

struct options {
    std::size_t max_depth = 64;
    /// Belief expansions before giving up with outcome::unknown.
    std::size_t max_expansions = std::size_t{1} << 14;
    /// Refuses domains with more fluents than this.
    std::size_t fluent_bound = 16;
};

struct result {
    outcome verdict = outcome::unknown;
    std::size_t length = 0;              // plan only
    std::vector<std::string> plan;       // execution order
    std::size_t expanded = 0;            // beliefs taken off the queue
};

/// Shortest conformant plan by explicit breadth-first search from the initial
/// belief. An action counts as applicable in a belief when it has at least
/// one outcome from every state of it. outcome::fail is definitive: the whole
/// reachable belief space was covered.
result search(const lang::domain& d, const options& opts = {});

struct check {
    bool ok = false;
    std::string reason;                             // empty when ok
    std::vector<std::vector<lang::state>> trace;    // trace[i]: belief after i steps
};

/// Replays a plan over explicit belief states, checking applicability at each
/// step and the goal at the end.
check verify(const lang::domain& d, const std::vector<std::string>& plan);

/// The explicit automaton: every legal state with its successor sets.
struct automaton {
    std::vector<lang::state> states; // ascending
    /// successors[i][a]: outcomes of action a in states[i], ascending; empty
    /// when the action is not executable there.
    std::vector<std::vector<std::vector<lang::state>>> successors;
};

automaton enumerate_automaton(const lang::domain& d, std::size_t fluent_bound = 16);

} // namespace cmbp::oracle
