#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cmbp/dd.hpp"
#include "cmbp/lang.hpp"

/// Symbolic encoding of a planning domain: characteristic functions of the
/// legal states, the initial and goal conditions, and the transition
/// relation, all as BDDs over a shared store.
namespace cmbp::sym {

/// A validated domain compiled onto a BDD store.
///
/// Variables follow the planning layout of dd::ordering: one selector per
/// action, a reserved region for plan variables, then the state variables
/// interleaved with their next-state twins. The transition relation is
///
///   R(alpha, x, x') = one_hot(alpha) & S(x) & S(x') & /\_a (alpha_a -> T_a)
///
/// where S is the conjunction of the ALWAYS constraints and T_a encodes the
/// causal rules of action a: the precondition in x, forced effects in x',
/// and frame axioms for inertial fluents the action cannot touch.
class symbolic_domain {
public:
    dd::node_store& store() const { return *store_; }
    dd::ordering& layout() { return layout_; }
    const dd::ordering& layout() const { return layout_; }
    const lang::domain& source() const { return source_; }

    std::size_t action_count() const { return layout_.action_count(); }
    std::size_t fluent_count() const { return layout_.fluent_count(); }

    /// S(x): states satisfying every ALWAYS constraint.
    dd::bdd legal_states() const { return legal_; }
    /// I(x) & S(x)
    dd::bdd init() const { return init_; }
    /// G(x) & S(x)
    dd::bdd goal() const { return goal_; }
    /// R(alpha, x, x')
    dd::bdd transitions() const { return trans_; }
    /// one_hot(alpha): exactly one action selector is true.
    dd::bdd one_hot() const { return one_hot_; }
    /// Pairs (alpha, x) where the action has at least one outcome from x:
    /// one_hot(alpha) & exists x'. R.
    dd::bdd applicable() const { return applicable_; }
    /// T_a(x, x') for a single action, without the one-hot selectors.
    dd::bdd action_transitions(std::size_t action) const;

    /// A resolved formula as a predicate over current-state variables.
    dd::bdd formula_to_bdd(const lang::formula& f) const;

    // --- explicit/symbolic conversions --------------------------------------

    /// Characteristic function of one explicit state.
    dd::bdd encode_state(lang::state s) const;
    /// Characteristic function of a set of explicit states.
    dd::bdd encode_belief(std::span<const lang::state> states) const;
    /// The explicit states of a belief over current-state variables,
    /// ascending. Refuses functions whose support leaves the state variables.
    std::vector<lang::state> decode_belief(dd::bdd belief,
                                           std::size_t limit = 1u << 20) const;

    // --- images -------------------------------------------------------------

    /// True when the action has at least one outcome from every state of the
    /// belief, and the belief is nonempty.
    bool is_applicable(dd::bdd belief, std::size_t action) const;

    /// States reachable by executing the action from some state of the
    /// belief, as a predicate over current-state variables.
    dd::bdd forward_image(dd::bdd belief, std::size_t action) const;

    /// Pairs (alpha, x) such that the action is executable in x and every
    /// outcome lands in `target` (a predicate over current-state variables).
    dd::bdd strong_preimage_all(dd::bdd target) const;

    /// The strong preimage of `target` under one action, over current-state
    /// variables.
    dd::bdd strong_preimage(dd::bdd target, std::size_t action) const;

    /// Fixes the action selectors of f to the one-hot pattern of `action`.
    dd::bdd select_action(dd::bdd f, std::size_t action) const;

private:
    friend symbolic_domain compile(const lang::domain& d, dd::node_store& store);

    dd::node_store* store_ = nullptr;
    dd::ordering layout_;
    lang::domain source_;
    dd::bdd legal_, init_, goal_, trans_, one_hot_, applicable_;
    std::vector<dd::bdd> action_trans_; // T_a per action
};

/// Builds the symbolic form on the given store. The store must be fresh;
/// compile() lays out the variable order.
symbolic_domain compile(const lang::domain& d, dd::node_store& store);

} // namespace cmbp::sym
