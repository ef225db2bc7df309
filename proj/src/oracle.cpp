#include "cmbp/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace cmbp::oracle {

namespace {

using belief = std::vector<lang::state>;

belief initial_belief(const lang::domain& d, std::size_t fluent_bound) {
    belief init;
    for (lang::state s : lang::enumerate_states(d, fluent_bound))
        if (lang::eval(d.initially, s)) init.push_back(s);
    if (init.empty()) throw contract_error("no legal state satisfies INITIALLY");
    return init;
}

bool satisfies_goal(const lang::domain& d, const belief& bs) {
    return std::all_of(bs.begin(), bs.end(),
                       [&](lang::state s) { return lang::eval(d.goal, s); });
}

/// Union of the outcomes over the belief; empty when the action lacks an
/// outcome somewhere (not applicable).
belief apply(const lang::domain& d, const belief& bs, std::size_t action) {
    std::set<lang::state> next;
    for (lang::state s : bs) {
        auto outcomes = lang::explicit_step(d, s, action);
        if (outcomes.empty()) return {};
        next.insert(outcomes.begin(), outcomes.end());
    }
    return belief(next.begin(), next.end());
}

} // namespace

result search(const lang::domain& d, const options& opts) {
    struct entry {
        belief bs;
        std::size_t depth;
        std::size_t parent;
        std::size_t action;
    };

    result res;
    std::vector<entry> entries;
    std::set<belief> visited;
    std::deque<std::size_t> queue;

    auto reconstruct = [&](std::size_t idx) {
        std::vector<std::string> plan;
        while (entries[idx].depth > 0) {
            plan.push_back(d.actions[entries[idx].action].name);
            idx = entries[idx].parent;
        }
        std::reverse(plan.begin(), plan.end());
        return plan;
    };

    entries.push_back({initial_belief(d, opts.fluent_bound), 0, 0, 0});
    visited.insert(entries[0].bs);
    if (satisfies_goal(d, entries[0].bs)) {
        res.verdict = outcome::plan;
        return res;
    }
    queue.push_back(0);

    bool truncated = false;
    while (!queue.empty()) {
        if (res.expanded >= opts.max_expansions) {
            truncated = true;
            break;
        }
        std::size_t idx = queue.front();
        queue.pop_front();
        ++res.expanded;
        if (entries[idx].depth >= opts.max_depth) {
            truncated = true;
            continue;
        }
        for (std::size_t a = 0; a < d.actions.size(); ++a) {
            belief next = apply(d, entries[idx].bs, a);
            if (next.empty()) continue;
            if (!visited.insert(next).second) continue;
            entries.push_back({std::move(next), entries[idx].depth + 1, idx, a});
            std::size_t n = entries.size() - 1;
            if (satisfies_goal(d, entries[n].bs)) {
                res.verdict = outcome::plan;
                res.plan = reconstruct(n);
                res.length = res.plan.size();
                return res;
            }
            queue.push_back(n);
        }
    }
    res.verdict = truncated ? outcome::unknown : outcome::fail;
    return res;
}

check verify(const lang::domain& d, const std::vector<std::string>& plan) {
    check out;
    out.trace.push_back(initial_belief(d, 16));
    for (std::size_t i = 0; i < plan.size(); ++i) {
        int a = d.action_index(plan[i]);
        if (a < 0) {
            out.reason = "step " + std::to_string(i + 1) + ": unknown action '" +
                         plan[i] + "'";
            return out;
        }
        belief next = apply(d, out.trace.back(), static_cast<std::size_t>(a));
        if (next.empty()) {
            out.reason = "step " + std::to_string(i + 1) + ": '" + plan[i] +
                         "' is not applicable in every state";
            return out;
        }
        out.trace.push_back(std::move(next));
    }
    for (lang::state s : out.trace.back()) {
        if (!lang::eval(d.goal, s)) {
            out.reason = "final belief contains state " + std::to_string(s) +
                         ", which misses the goal";
            return out;
        }
    }
    out.ok = true;
    return out;
}

automaton enumerate_automaton(const lang::domain& d, std::size_t fluent_bound) {
    automaton out;
    out.states = lang::enumerate_states(d, fluent_bound);
    out.successors.resize(out.states.size());
    for (std::size_t i = 0; i < out.states.size(); ++i) {
        out.successors[i].resize(d.actions.size());
        for (std::size_t a = 0; a < d.actions.size(); ++a)
            out.successors[i][a] = lang::explicit_step(d, out.states[i], a);
    }
    return out;
}

} // namespace cmbp::oracle
