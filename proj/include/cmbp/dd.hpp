#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmbp/errors.hpp"

/// Reduced ordered binary decision diagrams with hash-consed nodes.
///
/// All nodes live in a node_store. Two handles obtained from the same store
/// are equal if and only if they denote the same boolean function, so
/// equivalence checks are pointer comparisons. The variable order is fixed
/// at variable-creation time and never changes afterwards.
namespace cmbp::dd {

class node_store;

/// Identifies a boolean variable within one store. Ids are stable for the
/// lifetime of the store; the position in the variable order is queried
/// through node_store::level_of.
struct var_id {
    static constexpr std::uint32_t invalid = 0xFFFFFFFFu;

    std::uint32_t raw = invalid;

    bool operator==(const var_id&) const = default;
};

/// Handle to a function in a node_store. Cheap to copy. A default
/// constructed handle is null and rejects every operation.
class bdd {
public:
    bdd() = default;

    bool valid() const { return store_ != nullptr; }
    bool is_false() const;
    bool is_true() const;
    bool is_terminal() const { return is_false() || is_true(); }

    /// Stable node id, unique per function within its store. Suitable as a
    /// cache key; meaningless across stores.
    std::uint32_t id() const { return index_; }

    node_store& store() const;

    bdd operator&(const bdd& rhs) const;
    bdd operator|(const bdd& rhs) const;
    bdd operator^(const bdd& rhs) const;
    bdd operator!() const;
    bdd implies(const bdd& rhs) const;
    bdd iff(const bdd& rhs) const;

    bool operator==(const bdd&) const = default;

private:
    friend class node_store;
    bdd(node_store* s, std::uint32_t i) : store_(s), index_(i) {}

    node_store* store_ = nullptr;
    std::uint32_t index_ = 0;
};

/// Decomposition of a non-terminal node.
struct node_view {
    var_id var;
    bdd low;   // branch taken when var is false
    bdd high;  // branch taken when var is true
};

/// Partial map from variables to truth values.
class assignment {
public:
    void set(var_id v, bool value) { values_[v.raw] = value; }

    std::optional<bool> get(var_id v) const {
        auto it = values_.find(v.raw);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    const std::unordered_map<std::uint32_t, bool>& values() const { return values_; }

    bool operator==(const assignment&) const = default;

private:
    std::unordered_map<std::uint32_t, bool> values_;
};

enum class binary_op { op_and, op_or, op_xor, op_implies, op_iff };

struct store_options {
    /// log2 of the initial unique-table slot count. Grows by doubling.
    unsigned unique_table_bits = 20;
    /// Fixed number of memo slots for operation results; colliding entries
    /// overwrite each other.
    std::size_t computed_table_entries = std::size_t{1} << 20;
    bool computed_table_enabled = true;
    /// Hard cap on stored nodes; exceeding it raises resource_error.
    std::size_t max_nodes = std::size_t{1} << 31;
};

/// Reads CMBP_UNIQUE_TABLE_BITS from the environment, if set, to override
/// the default unique-table capacity.
store_options options_from_env();

class node_store {
public:
    explicit node_store(store_options opts = options_from_env());

    node_store(const node_store&) = delete;
    node_store& operator=(const node_store&) = delete;
    node_store(node_store&&) = delete;
    node_store& operator=(node_store&&) = delete;

    // --- variables ------------------------------------------------------

    /// Registers a fresh variable after all existing ones in the order.
    var_id new_var(std::string name = "");

    /// Registers a fresh variable at an explicit order level. The level must
    /// be unused. Levels of existing variables never move, so relative order
    /// is stable by construction.
    var_id new_var_at_level(std::uint64_t level, std::string name = "");

    std::size_t var_count() const { return var_level_.size(); }
    std::uint64_t level_of(var_id v) const;
    const std::string& var_name(var_id v) const;

    /// True when a comes strictly before b in the variable order.
    bool precedes(var_id a, var_id b) const { return level_of(a) < level_of(b); }

    /// Static ordering only; hook kept so callers written against a
    /// reordering kernel keep compiling.
    void reorder() noexcept {}

    // --- construction ---------------------------------------------------

    bdd constant(bool value) { return bdd(this, value ? 1u : 0u); }
    bdd mk_var(var_id v);

    /// Low-level node constructor: branch on v, with the given cofactors.
    /// v must precede every variable in low and high.
    bdd make_node(var_id v, bdd low, bdd high);

    // --- operations -----------------------------------------------------

    bdd apply(binary_op op, bdd f, bdd g);
    bdd negate(bdd f);

    /// f with variable v replaced by the function g.
    bdd compose(bdd f, var_id v, bdd g);

    /// Simultaneous substitution of variables: from[i] becomes to[i].
    /// Requires |from| == |to|, distinct entries on both sides, and that no
    /// `to` variable occurs in f unless it is itself renamed away.
    bdd rename(bdd f, std::span<const var_id> from, std::span<const var_id> to);

    /// f with each listed variable fixed to a constant.
    bdd cofactor(bdd f, std::span<const std::pair<var_id, bool>> literals);

    bdd exists(std::span<const var_id> vars, bdd f);
    bdd forall(std::span<const var_id> vars, bdd f);

    /// exists(vars, f & g) without building the conjunction first.
    bdd and_exists(std::span<const var_id> vars, bdd f, bdd g);

    /// Evaluates f under a total assignment of its support.
    bool eval(bdd f, const assignment& a) const;

    /// Satisfying total assignments over exactly the given variables, in
    /// lexicographic variable order with the false branch first. Requires
    /// support(f) to be contained in `over`. Stops after `limit` results.
    std::vector<assignment> enumerate_sats(bdd f, std::span<const var_id> over,
                                           std::size_t limit);

    /// Number of satisfying total assignments over the given variables.
    double sat_count(bdd f, std::span<const var_id> over);

    /// Variables occurring in f, sorted by order level.
    std::vector<var_id> support(bdd f);

    /// Distinct nodes reachable from f, terminals included.
    std::size_t node_count(bdd f) const;

    /// Total nodes currently stored (terminals included).
    std::size_t size() const { return nodes_.size(); }

    void set_computed_table_enabled(bool on) { memo_on_ = on; }

    /// Structural inspection of a non-terminal node.
    node_view inspect(bdd f) const;

    /// GraphViz rendering: solid edges for the true branch, dashed for the
    /// false branch.
    std::string to_dot(bdd f) const;

private:
    struct node {
        std::uint32_t var;
        std::uint32_t lo;
        std::uint32_t hi;
    };

    // unique-table slot with the key inline, so a probe touches one cache
    // line instead of chasing back into nodes_
    struct unique_entry {
        std::uint32_t var;
        std::uint32_t lo;
        std::uint32_t hi;
        std::uint32_t index;
    };

    struct memo_entry {
        std::uint32_t tag;
        std::uint32_t a;
        std::uint32_t b;
        std::uint32_t result;
    };

    // recursion helpers ---------------------------------------------------
    std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
    std::uint32_t apply_rec(unsigned op, std::uint32_t f, std::uint32_t g);
    std::uint32_t not_rec(std::uint32_t f);
    std::uint32_t ite_nodes(std::uint32_t c, std::uint32_t t, std::uint32_t e);

    struct quant_ctx;
    std::uint32_t quant_rec(quant_ctx& ctx, std::uint32_t f);
    std::uint32_t and_exists_rec(quant_ctx& ctx, std::uint32_t f, std::uint32_t g);

    struct subst_ctx;
    std::uint32_t rename_rec(subst_ctx& ctx, std::uint32_t f);
    std::uint32_t compose_rec(subst_ctx& ctx, std::uint32_t f);

    std::uint64_t node_level(std::uint32_t index) const;
    void check_mine(const bdd& f, const char* op) const;
    void check_var(var_id v, const char* op) const;
    std::uint32_t require_index(const bdd& f, const char* op) const;

    bool memo_lookup(unsigned tag, std::uint32_t a, std::uint32_t b,
                     std::uint32_t& out) const;
    void memo_store(unsigned tag, std::uint32_t a, std::uint32_t b,
                    std::uint32_t result);

    void grow_unique();
    unique_entry* unique_slot(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);

    std::vector<node> nodes_;
    std::vector<unique_entry> unique_;
    std::size_t unique_mask_ = 0;

    std::vector<memo_entry> computed_;
    bool memo_on_ = true;

    std::vector<std::uint64_t> var_level_;
    std::vector<std::string> var_names_;
    std::unordered_map<std::uint64_t, std::uint32_t> level_to_var_;

    std::size_t max_nodes_;
};

// --- ordering policy ------------------------------------------------------

/// Variable groups of a planning encoding, in declaration order.
struct variable_groups {
    std::vector<std::string> actions;
    std::vector<std::string> fluents;
};

/// Fixed variable layout for belief-state planning: action variables first,
/// then a region reserved for plan variables (one block of |actions|
/// variables per plan step, allocated on demand), then the state variables
/// with each current-state variable immediately followed by its next-state
/// twin.
class ordering {
public:
    std::span<const var_id> action_vars() const { return actions_; }
    std::span<const var_id> state_vars() const { return state_; }
    std::span<const var_id> next_state_vars() const { return next_state_; }

    std::size_t action_count() const { return actions_.size(); }
    std::size_t fluent_count() const { return state_.size(); }

    /// Plan block for step i (1-based). Blocks are created on first use;
    /// block i sits after block i-1 and before all state variables.
    std::span<const var_id> plan_block(std::size_t i);

    std::size_t plan_block_count() const { return plan_blocks_.size(); }

    /// First order level occupied by state variables. Everything below is an
    /// action or plan variable.
    std::uint64_t first_state_level() const { return state_base_; }

    static constexpr std::size_t max_plan_blocks = 1u << 16;

private:
    friend ordering order_hint(node_store&, const variable_groups&);

    node_store* store_ = nullptr;
    std::vector<var_id> actions_;
    std::vector<var_id> state_;
    std::vector<var_id> next_state_;
    std::vector<std::vector<var_id>> plan_blocks_;
    std::vector<std::string> action_names_;
    std::uint64_t state_base_ = 0;
};

/// Lays the groups out in the store. The store must not contain any
/// variables or nodes yet; imposing an order later would amount to
/// reordering, which this kernel does not support.
ordering order_hint(node_store& store, const variable_groups& groups);

} // namespace cmbp::dd
