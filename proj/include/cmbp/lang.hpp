#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmbp/errors.hpp"

/// Input language for nondeterministic planning domains.
///
/// A domain file declares actions and boolean fluents, state constraints
/// (ALWAYS), causal rules with optional conditions, uncertainty about
/// effects (POSSIBLY CHANGES), an initial condition and a conformant goal:
///
///   DOMAIN name
///   ACTIONS a, b;
///   FLUENTS f, g : boolean;
///   INERTIAL f;
///   ALWAYS formula;
///   a HAS PRECONDITIONS formula;
///   a CAUSES [!]f [IF formula];
///   a POSSIBLY CHANGES f;
///   INITIALLY formula;
///   CONFORMANT formula;
///
/// Formulas use ! & | -> <-> over fluent names, TRUE and FALSE, with
/// parentheses; # starts a line comment. Fluents not listed INERTIAL are
/// unconstrained whenever no causal rule forces them.
namespace cmbp::lang {

struct source_span {
    std::uint32_t line = 0;
    std::uint32_t column = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Syntax error, with the offending location.
class parse_error : public error {
public:
    parse_error(const std::string& what, source_span where)
        : error(what), where_(where) {}
    source_span where() const { return where_; }

private:
    source_span where_;
};

/// Well-formedness error found after parsing (undeclared identifiers,
/// unsatisfiable conditions, conflicting effects, ...).
class validation_error : public error {
public:
    explicit validation_error(const std::string& what,
                              source_span where = {})
        : error(what), where_(where) {}
    source_span where() const { return where_; }

private:
    source_span where_;
};

// --- formulas ---------------------------------------------------------------

struct formula_node;
using formula = std::shared_ptr<const formula_node>;

struct formula_node {
    enum class op {
        constant,
        atom,
        negation,
        conjunction,
        disjunction,
        implication,
        biconditional
    };

    op kind;
    bool value = false;      // constant
    std::string name;        // atom
    int fluent = -1;         // atom; resolved by validate()
    formula lhs, rhs;        // negation uses lhs only
    source_span span;
};

formula f_const(bool value);
formula f_atom(std::string name, source_span span = {});
formula f_not(formula f);
formula f_and(formula a, formula b);
formula f_or(formula a, formula b);
formula f_implies(formula a, formula b);
formula f_iff(formula a, formula b);

/// Deep structural equality, spans ignored.
bool equal(const formula& a, const formula& b);

std::string to_string(const formula& f);

// --- syntax tree ------------------------------------------------------------

struct domain_ast {
    struct precondition_decl {
        std::string action;
        formula condition;
        source_span span;
    };
    struct cause_decl {
        std::string action;
        bool positive;
        std::string fluent;
        formula condition; // null when unconditional
        source_span span;
    };
    struct possibly_decl {
        std::string action;
        std::string fluent;
        source_span span;
    };

    std::string name;
    std::vector<std::string> actions;  // declaration order
    std::vector<std::string> fluents;  // declaration order
    std::vector<std::string> inertial;
    std::vector<formula> always;
    std::vector<precondition_decl> preconditions;
    std::vector<cause_decl> causes;
    std::vector<possibly_decl> possibly_changes;
    formula initially;
    formula goal;
};

bool structurally_equal(const domain_ast& a, const domain_ast& b);

domain_ast parse(const std::string& text);

/// Renders the syntax tree back to concrete syntax; parsing the result gives
/// a structurally equal tree.
std::string pretty_print(const domain_ast& ast);

// --- checked domain -----------------------------------------------------------

/// Explicit states are bit masks over the fluent list, bit k for fluent k.
using state = std::uint64_t;

/// Validated domain with name references resolved to indices. Produced by
/// validate(); everything downstream consumes this form.
struct domain {
    struct cause {
        bool positive;
        int fluent;
        formula condition; // null when unconditional; atoms resolved
    };
    struct action {
        std::string name;
        formula precondition; // null means TRUE
        std::vector<cause> causes;
        std::vector<int> possibly_changes;
    };

    std::string name;
    std::vector<std::string> fluents;
    std::vector<bool> inertial;
    std::vector<action> actions;
    std::vector<formula> always; // atoms resolved
    formula initially;
    formula goal;
    domain_ast ast; // original syntax, kept for reporting

    int fluent_index(const std::string& name) const;
    int action_index(const std::string& name) const;
};

/// Checks declarations and satisfiability (initial condition, goal, effect
/// conflicts within the legal states) and resolves identifiers.
domain validate(const domain_ast& ast);

/// parse + validate
domain load(const std::string& text);

// --- explicit semantics ---------------------------------------------------------

/// Evaluates a resolved formula in an explicit state. Null formulas are TRUE.
bool eval(const formula& f, state s);

/// True when s satisfies every ALWAYS constraint.
bool legal(const domain& d, state s);

/// All legal states, ascending. Refuses domains with more than max_fluents
/// fluents.
std::vector<state> enumerate_states(const domain& d, std::size_t max_fluents = 16);

/// Successor states of executing one action in one state: empty when the
/// precondition fails, more than one element when effects are uncertain.
/// The causal-rule conditions are evaluated in the source state; fluents not
/// forced by a fired rule keep their value when inertial and not listed
/// POSSIBLY CHANGES, and vary freely otherwise, subject to ALWAYS.
std::vector<state> explicit_step(const domain& d, state s, std::size_t action);

} // namespace cmbp::lang
