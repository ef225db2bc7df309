#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "cmbp/symdomain.hpp"

/// Conformant planning by backward breadth-first search over belief states,
/// all of it carried out on BDDs.
///
/// The search maintains one BDD, the table of belief states tagged by plans:
/// at depth i its variables are the plan blocks pi[1] .. pi[i] and the
/// current-state variables x, and an assignment (pi, x) is in the table when
/// executing pi[i], pi[i-1], ..., pi[1] from x certainly reaches the goal.
/// Depth 0 is the goal itself. One expansion step is
///
///   table' = rename_{alpha -> pi[i+1]}( forall x'. (R -> table[x'/x])
///                                       & APPLICABLE(alpha, x) )
///
/// i.e. the strong preimage over every action at once, with the action
/// selectors renamed into the next plan block. A plan exists at depth i when
/// forall x. (I -> table) is nonempty; its sat assignments are the plans.
///
/// Pruning drops every path whose belief state (the sub-BDD below the plan
/// variables) was already reached at the same or an earlier depth, keeping
/// the first path found. This preserves outcomes and plan lengths: the first
/// time a belief appears it stays in the table, so its preimages are still
/// explored; any plan through a dropped copy is matched in length by one
/// through the kept copy.
namespace cmbp::planner {

enum class outcome { plan, fail, unknown };

struct options {
    std::size_t max_depth = 64;
    bool prune = true;
    /// Plans to decode when some depth yields a solution.
    std::size_t plan_limit = 1;
};

struct level_stats {
    std::size_t level;           // depth after the expansion, starting at 1
    std::size_t relation_nodes;  // BDD nodes of the table
    /// Plan paths surviving the prune at this depth; with pruning off, the
    /// number of plans with a nonempty belief.
    double plans_kept;
};

struct search_report {
    outcome verdict = outcome::unknown;
    std::size_t length = 0;                       // plan only
    std::vector<std::vector<std::string>> plans;  // execution order
    std::vector<level_stats> levels;
    std::size_t beliefs_inserted = 0;  // distinct beliefs entered into the cache
    std::size_t belief_hits = 0;       // paths dropped as already-cached
};

/// The incremental engine behind conformant_plan, stepwise for inspection.
class search {
public:
    search(sym::symbolic_domain& dom, bool prune_enabled);

    std::size_t depth() const { return depth_; }
    /// The current table; over state variables only at depth 0.
    dd::bdd table() const { return table_; }

    /// One backward step; prunes when enabled and records level statistics.
    void expand();

    /// Plans over blocks 1..depth achieving the goal from every initial
    /// state: forall x. (I -> table). FALSE when there are none.
    dd::bdd extract() const;

    /// Reads plans out of the sat assignments of an extract() result.
    std::vector<std::vector<std::string>> decode_plans(dd::bdd plans,
                                                       std::size_t limit) const;

    const std::vector<level_stats>& levels() const { return levels_; }
    std::size_t beliefs_inserted() const { return inserted_; }
    std::size_t belief_hits() const { return hits_; }

private:
    dd::bdd prune(dd::bdd table);
    dd::bdd prune_rec(dd::bdd f);

    sym::symbolic_domain* dom_;
    bool prune_enabled_;
    dd::bdd table_;
    std::size_t depth_ = 0;
    std::uint64_t state_base_;
    std::unordered_set<std::uint32_t> belief_cache_; // ids of belief sub-BDDs
    std::unordered_set<std::uint32_t> skip_memo_;    // processed plan-region nodes
    std::size_t inserted_ = 0;
    std::size_t hits_ = 0;
    std::vector<level_stats> levels_;
};

/// Backward search from the goal until a plan extracts, the table empties
/// (fail: the belief space is exhausted) or max_depth passes (unknown).
search_report conformant_plan(sym::symbolic_domain& dom, const options& opts = {});

struct plan_check {
    bool ok = false;
    std::string reason;          // empty when ok
    std::vector<dd::bdd> trace;  // belief after each step, trace[0] = init
};

/// Replays a plan on symbolic belief states: applicability at every step,
/// goal containment at the end.
plan_check verify_plan(sym::symbolic_domain& dom,
                       const std::vector<std::string>& plan);

} // namespace cmbp::planner
