#include "cmbp/dd.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace cmbp::dd {

namespace {

constexpr std::uint32_t k_false = 0;
constexpr std::uint32_t k_true = 1;
constexpr std::uint32_t k_term_var = 0xFFFFFFFFu;
constexpr std::uint32_t k_empty_slot = 0xFFFFFFFFu;
constexpr std::uint64_t k_term_level = std::numeric_limits<std::uint64_t>::max();

// memo tags; binary_op values occupy 0..4
constexpr unsigned tag_not = 8;

std::uint64_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::uint64_t h = (std::uint64_t(a) << 40) ^ (std::uint64_t(b) << 20) ^ c;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

std::uint64_t pack2(std::uint32_t a, std::uint32_t b) {
    return (std::uint64_t(a) << 32) | b;
}

bool op_commutative(unsigned op) {
    switch (static_cast<binary_op>(op)) {
    case binary_op::op_and:
    case binary_op::op_or:
    case binary_op::op_xor:
    case binary_op::op_iff:
        return true;
    default:
        return false;
    }
}

} // namespace

store_options options_from_env() {
    store_options opts;
    if (const char* env = std::getenv("CMBP_UNIQUE_TABLE_BITS")) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end != env && *end == '\0') {
            opts.unique_table_bits =
                static_cast<unsigned>(std::clamp(bits, 8l, 28l));
        }
    }
    return opts;
}

// --- bdd ------------------------------------------------------------------

bool bdd::is_false() const { return store_ != nullptr && index_ == k_false; }
bool bdd::is_true() const { return store_ != nullptr && index_ == k_true; }

node_store& bdd::store() const {
    if (!store_) throw usage_error("null bdd handle");
    return *store_;
}

bdd bdd::operator&(const bdd& rhs) const { return store().apply(binary_op::op_and, *this, rhs); }
bdd bdd::operator|(const bdd& rhs) const { return store().apply(binary_op::op_or, *this, rhs); }
bdd bdd::operator^(const bdd& rhs) const { return store().apply(binary_op::op_xor, *this, rhs); }
bdd bdd::operator!() const { return store().negate(*this); }
bdd bdd::implies(const bdd& rhs) const { return store().apply(binary_op::op_implies, *this, rhs); }
bdd bdd::iff(const bdd& rhs) const { return store().apply(binary_op::op_iff, *this, rhs); }

// --- node_store lifecycle ---------------------------------------------------

node_store::node_store(store_options opts) : max_nodes_(opts.max_nodes) {
    nodes_.push_back({k_term_var, k_false, k_false}); // 0
    nodes_.push_back({k_term_var, k_true, k_true});   // 1
    std::size_t slots = std::size_t{1} << std::clamp(opts.unique_table_bits, 4u, 30u);
    unique_.assign(slots, unique_entry{0, 0, 0, k_empty_slot});
    unique_mask_ = slots - 1;
    computed_.assign(std::max<std::size_t>(opts.computed_table_entries, 1),
                     memo_entry{k_empty_slot, 0, 0, 0});
    memo_on_ = opts.computed_table_enabled;
}

// --- variables --------------------------------------------------------------

var_id node_store::new_var(std::string name) {
    std::uint64_t level = 0;
    if (!level_to_var_.empty()) {
        for (auto lvl : var_level_) level = std::max(level, lvl + 1);
    }
    return new_var_at_level(level, std::move(name));
}

var_id node_store::new_var_at_level(std::uint64_t level, std::string name) {
    if (level == k_term_level) throw usage_error("variable level out of range");
    if (level_to_var_.count(level))
        throw usage_error("variable level already occupied");
    var_id v{static_cast<std::uint32_t>(var_level_.size())};
    var_level_.push_back(level);
    var_names_.push_back(std::move(name));
    level_to_var_.emplace(level, v.raw);
    return v;
}

std::uint64_t node_store::level_of(var_id v) const {
    check_var(v, "level_of");
    return var_level_[v.raw];
}

const std::string& node_store::var_name(var_id v) const {
    check_var(v, "var_name");
    return var_names_[v.raw];
}

void node_store::check_var(var_id v, const char* op) const {
    if (v.raw >= var_level_.size()) {
        throw usage_error(std::string(op) + ": unknown variable");
    }
}

void node_store::check_mine(const bdd& f, const char* op) const {
    if (f.store_ != this) {
        throw usage_error(std::string(op) +
                          ": handle does not belong to this store");
    }
}

std::uint32_t node_store::require_index(const bdd& f, const char* op) const {
    check_mine(f, op);
    return f.index_;
}

std::uint64_t node_store::node_level(std::uint32_t index) const {
    std::uint32_t v = nodes_[index].var;
    return v == k_term_var ? k_term_level : var_level_[v];
}

// --- unique table -------------------------------------------------------------

node_store::unique_entry* node_store::unique_slot(std::uint32_t var, std::uint32_t lo,
                                                  std::uint32_t hi) {
    std::size_t idx = hash3(var, lo, hi) & unique_mask_;
    for (;;) {
        unique_entry& slot = unique_[idx];
        if (slot.index == k_empty_slot ||
            (slot.var == var && slot.lo == lo && slot.hi == hi))
            return &slot;
        idx = (idx + 1) & unique_mask_;
    }
}

void node_store::grow_unique() {
    std::size_t slots = unique_.size() * 2;
    unique_.assign(slots, unique_entry{0, 0, 0, k_empty_slot});
    unique_mask_ = slots - 1;
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
        const node& n = nodes_[i];
        *unique_slot(n.var, n.lo, n.hi) = {n.var, n.lo, n.hi, i};
    }
}

std::uint32_t node_store::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    assert(var_level_[var] < node_level(lo) && var_level_[var] < node_level(hi));
    unique_entry* slot = unique_slot(var, lo, hi);
    if (slot->index != k_empty_slot) return slot->index;
    if (nodes_.size() >= max_nodes_)
        throw resource_error("node store capacity exhausted");
    std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({var, lo, hi});
    *slot = {var, lo, hi, index};
    if (nodes_.size() * 4 > unique_.size() * 3) grow_unique();
    return index;
}

bdd node_store::mk_var(var_id v) {
    check_var(v, "mk_var");
    return bdd(this, mk(v.raw, k_false, k_true));
}

bdd node_store::make_node(var_id v, bdd low, bdd high) {
    check_var(v, "make_node");
    std::uint32_t lo = require_index(low, "make_node");
    std::uint32_t hi = require_index(high, "make_node");
    if (var_level_[v.raw] >= node_level(lo) || var_level_[v.raw] >= node_level(hi))
        throw usage_error("make_node: branch variable does not precede cofactors");
    return bdd(this, mk(v.raw, lo, hi));
}

// --- computed table -----------------------------------------------------------

bool node_store::memo_lookup(unsigned tag, std::uint32_t a, std::uint32_t b,
                             std::uint32_t& out) const {
    if (!memo_on_) return false;
    const memo_entry& e = computed_[hash3(tag, a, b) % computed_.size()];
    if (e.tag == tag && e.a == a && e.b == b) {
        out = e.result;
        return true;
    }
    return false;
}

void node_store::memo_store(unsigned tag, std::uint32_t a, std::uint32_t b,
                            std::uint32_t result) {
    if (!memo_on_) return;
    computed_[hash3(tag, a, b) % computed_.size()] = {tag, a, b, result};
}

// --- apply / negate -------------------------------------------------------------

std::uint32_t node_store::not_rec(std::uint32_t f) {
    if (f == k_false) return k_true;
    if (f == k_true) return k_false;
    std::uint32_t cached;
    if (memo_lookup(tag_not, f, 0, cached)) return cached;
    const node n = nodes_[f];
    std::uint32_t r = mk(n.var, not_rec(n.lo), not_rec(n.hi));
    memo_store(tag_not, f, 0, r);
    return r;
}

std::uint32_t node_store::apply_rec(unsigned op, std::uint32_t f, std::uint32_t g) {
    switch (static_cast<binary_op>(op)) {
    case binary_op::op_and:
        if (f == k_false || g == k_false) return k_false;
        if (f == k_true) return g;
        if (g == k_true) return f;
        if (f == g) return f;
        break;
    case binary_op::op_or:
        if (f == k_true || g == k_true) return k_true;
        if (f == k_false) return g;
        if (g == k_false) return f;
        if (f == g) return f;
        break;
    case binary_op::op_xor:
        if (f == g) return k_false;
        if (f == k_false) return g;
        if (g == k_false) return f;
        if (f == k_true) return not_rec(g);
        if (g == k_true) return not_rec(f);
        break;
    case binary_op::op_implies:
        if (f == k_false || g == k_true) return k_true;
        if (f == k_true) return g;
        if (f == g) return k_true;
        if (g == k_false) return not_rec(f);
        break;
    case binary_op::op_iff:
        if (f == g) return k_true;
        if (f == k_true) return g;
        if (g == k_true) return f;
        if (f == k_false) return not_rec(g);
        if (g == k_false) return not_rec(f);
        break;
    }
    if (op_commutative(op) && f > g) std::swap(f, g);
    std::uint32_t cached;
    if (memo_lookup(op, f, g, cached)) return cached;

    const std::uint64_t lf = node_level(f);
    const std::uint64_t lg = node_level(g);
    const std::uint32_t var = lf <= lg ? nodes_[f].var : nodes_[g].var;
    const std::uint32_t f_lo = lf <= lg ? nodes_[f].lo : f;
    const std::uint32_t f_hi = lf <= lg ? nodes_[f].hi : f;
    const std::uint32_t g_lo = lg <= lf ? nodes_[g].lo : g;
    const std::uint32_t g_hi = lg <= lf ? nodes_[g].hi : g;

    std::uint32_t r = mk(var, apply_rec(op, f_lo, g_lo), apply_rec(op, f_hi, g_hi));
    memo_store(op, f, g, r);
    return r;
}

bdd node_store::apply(binary_op op, bdd f, bdd g) {
    std::uint32_t fi = require_index(f, "apply");
    std::uint32_t gi = require_index(g, "apply");
    return bdd(this, apply_rec(static_cast<unsigned>(op), fi, gi));
}

bdd node_store::negate(bdd f) {
    return bdd(this, not_rec(require_index(f, "negate")));
}

std::uint32_t node_store::ite_nodes(std::uint32_t c, std::uint32_t t, std::uint32_t e) {
    return apply_rec(static_cast<unsigned>(binary_op::op_or),
                     apply_rec(static_cast<unsigned>(binary_op::op_and), c, t),
                     apply_rec(static_cast<unsigned>(binary_op::op_and), not_rec(c), e));
}

// --- substitution -----------------------------------------------------------------

struct node_store::subst_ctx {
    // rename: target variable per source variable (identity when unmapped)
    std::vector<std::uint32_t> map;
    // compose: single substituted variable and replacement function
    std::uint32_t var = k_term_var;
    std::uint32_t replacement = k_false;
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
};

std::uint32_t node_store::rename_rec(subst_ctx& ctx, std::uint32_t f) {
    if (f <= k_true) return f;
    auto it = ctx.memo.find(f);
    if (it != ctx.memo.end()) return it->second;
    const node n = nodes_[f];
    std::uint32_t lo = rename_rec(ctx, n.lo);
    std::uint32_t hi = rename_rec(ctx, n.hi);
    std::uint32_t target = ctx.map[n.var];
    std::uint32_t r;
    if (var_level_[target] < node_level(lo) && var_level_[target] < node_level(hi)) {
        r = mk(target, lo, hi);
    } else {
        r = ite_nodes(mk(target, k_false, k_true), hi, lo);
    }
    ctx.memo.emplace(f, r);
    return r;
}

bdd node_store::rename(bdd f, std::span<const var_id> from, std::span<const var_id> to) {
    std::uint32_t fi = require_index(f, "rename");
    if (from.size() != to.size())
        throw usage_error("rename: from/to length mismatch");
    std::unordered_set<std::uint32_t> from_set, to_set;
    for (var_id v : from) {
        check_var(v, "rename");
        if (!from_set.insert(v.raw).second)
            throw usage_error("rename: duplicate variable in from");
    }
    for (var_id v : to) {
        check_var(v, "rename");
        if (!to_set.insert(v.raw).second)
            throw usage_error("rename: duplicate variable in to");
    }
    for (var_id v : support(f)) {
        if (to_set.count(v.raw) && !from_set.count(v.raw))
            throw usage_error("rename: target variable already occurs in f");
    }
    subst_ctx ctx;
    ctx.map.resize(var_level_.size());
    for (std::uint32_t i = 0; i < ctx.map.size(); ++i) ctx.map[i] = i;
    for (std::size_t i = 0; i < from.size(); ++i) ctx.map[from[i].raw] = to[i].raw;
    return bdd(this, rename_rec(ctx, fi));
}

std::uint32_t node_store::compose_rec(subst_ctx& ctx, std::uint32_t f) {
    if (f <= k_true) return f;
    if (node_level(f) > var_level_[ctx.var]) return f;
    auto it = ctx.memo.find(f);
    if (it != ctx.memo.end()) return it->second;
    const node n = nodes_[f];
    std::uint32_t r;
    if (n.var == ctx.var) {
        r = ite_nodes(ctx.replacement, n.hi, n.lo);
    } else {
        std::uint32_t lo = compose_rec(ctx, n.lo);
        std::uint32_t hi = compose_rec(ctx, n.hi);
        if (var_level_[n.var] < node_level(lo) && var_level_[n.var] < node_level(hi)) {
            r = mk(n.var, lo, hi);
        } else {
            r = ite_nodes(mk(n.var, k_false, k_true), hi, lo);
        }
    }
    ctx.memo.emplace(f, r);
    return r;
}

bdd node_store::compose(bdd f, var_id v, bdd g) {
    std::uint32_t fi = require_index(f, "compose");
    std::uint32_t gi = require_index(g, "compose");
    check_var(v, "compose");
    subst_ctx ctx;
    ctx.var = v.raw;
    ctx.replacement = gi;
    return bdd(this, compose_rec(ctx, fi));
}

bdd node_store::cofactor(bdd f, std::span<const std::pair<var_id, bool>> literals) {
    std::uint32_t fi = require_index(f, "cofactor");
    std::vector<std::int8_t> fixed(var_level_.size(), -1);
    std::uint64_t max_level = 0;
    for (const auto& [v, value] : literals) {
        check_var(v, "cofactor");
        if (fixed[v.raw] != -1) throw usage_error("cofactor: duplicate variable");
        fixed[v.raw] = value ? 1 : 0;
        max_level = std::max(max_level, var_level_[v.raw]);
    }
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    auto rec = [&](auto&& self, std::uint32_t n) -> std::uint32_t {
        if (n <= k_true || node_level(n) > max_level) return n;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        const node nd = nodes_[n];
        std::uint32_t r;
        if (fixed[nd.var] != -1) {
            r = self(self, fixed[nd.var] ? nd.hi : nd.lo);
        } else {
            r = mk(nd.var, self(self, nd.lo), self(self, nd.hi));
        }
        memo.emplace(n, r);
        return r;
    };
    return bdd(this, rec(rec, fi));
}

// --- quantification ------------------------------------------------------------------

struct node_store::quant_ctx {
    std::vector<char> in_set;
    std::uint64_t max_level = 0;
    bool universal = false;
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    std::unordered_map<std::uint64_t, std::uint32_t> memo2;
};

std::uint32_t node_store::quant_rec(quant_ctx& ctx, std::uint32_t f) {
    if (f <= k_true) return f;
    if (node_level(f) > ctx.max_level) return f;
    auto it = ctx.memo.find(f);
    if (it != ctx.memo.end()) return it->second;
    const node n = nodes_[f];
    std::uint32_t r;
    if (ctx.in_set[n.var]) {
        std::uint32_t lo = quant_rec(ctx, n.lo);
        const std::uint32_t cut = ctx.universal ? k_false : k_true;
        if (lo == cut) {
            r = cut;
        } else {
            std::uint32_t hi = quant_rec(ctx, n.hi);
            unsigned op = static_cast<unsigned>(ctx.universal ? binary_op::op_and
                                                              : binary_op::op_or);
            r = apply_rec(op, lo, hi);
        }
    } else {
        r = mk(n.var, quant_rec(ctx, n.lo), quant_rec(ctx, n.hi));
    }
    ctx.memo.emplace(f, r);
    return r;
}

bdd node_store::exists(std::span<const var_id> vars, bdd f) {
    std::uint32_t fi = require_index(f, "exists");
    quant_ctx ctx;
    ctx.in_set.assign(var_level_.size(), 0);
    for (var_id v : vars) {
        check_var(v, "exists");
        ctx.in_set[v.raw] = 1;
        ctx.max_level = std::max(ctx.max_level, var_level_[v.raw]);
    }
    if (vars.empty()) return bdd(this, fi);
    return bdd(this, quant_rec(ctx, fi));
}

bdd node_store::forall(std::span<const var_id> vars, bdd f) {
    std::uint32_t fi = require_index(f, "forall");
    quant_ctx ctx;
    ctx.universal = true;
    ctx.in_set.assign(var_level_.size(), 0);
    for (var_id v : vars) {
        check_var(v, "forall");
        ctx.in_set[v.raw] = 1;
        ctx.max_level = std::max(ctx.max_level, var_level_[v.raw]);
    }
    if (vars.empty()) return bdd(this, fi);
    return bdd(this, quant_rec(ctx, fi));
}

std::uint32_t node_store::and_exists_rec(quant_ctx& ctx, std::uint32_t f, std::uint32_t g) {
    if (f == k_false || g == k_false) return k_false;
    if (f == k_true && g == k_true) return k_true;
    if (f == k_true) return quant_rec(ctx, g);
    if (g == k_true) return quant_rec(ctx, f);
    if (f == g) return quant_rec(ctx, f);
    if (f > g) std::swap(f, g);
    if (node_level(f) > ctx.max_level && node_level(g) > ctx.max_level) {
        return apply_rec(static_cast<unsigned>(binary_op::op_and), f, g);
    }
    auto it = ctx.memo2.find(pack2(f, g));
    if (it != ctx.memo2.end()) return it->second;

    const std::uint64_t lf = node_level(f);
    const std::uint64_t lg = node_level(g);
    const std::uint32_t var = lf <= lg ? nodes_[f].var : nodes_[g].var;
    const std::uint32_t f_lo = lf <= lg ? nodes_[f].lo : f;
    const std::uint32_t f_hi = lf <= lg ? nodes_[f].hi : f;
    const std::uint32_t g_lo = lg <= lf ? nodes_[g].lo : g;
    const std::uint32_t g_hi = lg <= lf ? nodes_[g].hi : g;

    std::uint32_t r;
    if (ctx.in_set[var]) {
        std::uint32_t lo = and_exists_rec(ctx, f_lo, g_lo);
        if (lo == k_true) {
            r = k_true;
        } else {
            r = apply_rec(static_cast<unsigned>(binary_op::op_or), lo,
                          and_exists_rec(ctx, f_hi, g_hi));
        }
    } else {
        r = mk(var, and_exists_rec(ctx, f_lo, g_lo), and_exists_rec(ctx, f_hi, g_hi));
    }
    ctx.memo2.emplace(pack2(f, g), r);
    return r;
}

bdd node_store::and_exists(std::span<const var_id> vars, bdd f, bdd g) {
    std::uint32_t fi = require_index(f, "and_exists");
    std::uint32_t gi = require_index(g, "and_exists");
    quant_ctx ctx;
    ctx.in_set.assign(var_level_.size(), 0);
    for (var_id v : vars) {
        check_var(v, "and_exists");
        ctx.in_set[v.raw] = 1;
        ctx.max_level = std::max(ctx.max_level, var_level_[v.raw]);
    }
    if (vars.empty())
        return bdd(this, apply_rec(static_cast<unsigned>(binary_op::op_and), fi, gi));
    return bdd(this, and_exists_rec(ctx, fi, gi));
}

// --- evaluation and enumeration ------------------------------------------------------

bool node_store::eval(bdd f, const assignment& a) const {
    std::uint32_t n = require_index(f, "eval");
    while (n > k_true) {
        const node& nd = nodes_[n];
        auto value = a.get(var_id{nd.var});
        if (!value)
            throw usage_error("eval: assignment missing variable " +
                              (var_names_[nd.var].empty() ? std::to_string(nd.var)
                                                          : var_names_[nd.var]));
        n = *value ? nd.hi : nd.lo;
    }
    return n == k_true;
}

std::vector<var_id> node_store::support(bdd f) {
    std::uint32_t fi = require_index(f, "support");
    std::unordered_set<std::uint32_t> seen, vars;
    std::vector<std::uint32_t> stack{fi};
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (n <= k_true || !seen.insert(n).second) continue;
        vars.insert(nodes_[n].var);
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    std::vector<var_id> out;
    out.reserve(vars.size());
    for (std::uint32_t v : vars) out.push_back(var_id{v});
    std::sort(out.begin(), out.end(), [&](var_id a, var_id b) {
        return var_level_[a.raw] < var_level_[b.raw];
    });
    return out;
}

std::vector<assignment> node_store::enumerate_sats(bdd f, std::span<const var_id> over,
                                                   std::size_t limit) {
    std::uint32_t fi = require_index(f, "enumerate_sats");
    std::vector<var_id> sorted(over.begin(), over.end());
    std::unordered_set<std::uint32_t> over_set;
    for (var_id v : sorted) {
        check_var(v, "enumerate_sats");
        if (!over_set.insert(v.raw).second)
            throw usage_error("enumerate_sats: duplicate variable");
    }
    for (var_id v : support(f)) {
        if (!over_set.count(v.raw))
            throw usage_error("enumerate_sats: support not covered by variable list");
    }
    std::sort(sorted.begin(), sorted.end(), [&](var_id a, var_id b) {
        return var_level_[a.raw] < var_level_[b.raw];
    });

    std::vector<assignment> out;
    std::vector<bool> values(sorted.size(), false);
    auto rec = [&](auto&& self, std::uint32_t n, std::size_t pos) -> void {
        if (out.size() >= limit || n == k_false) return;
        if (pos == sorted.size()) {
            assert(n == k_true);
            assignment a;
            for (std::size_t i = 0; i < sorted.size(); ++i) a.set(sorted[i], values[i]);
            out.push_back(std::move(a));
            return;
        }
        std::uint32_t lo = n, hi = n;
        if (n > k_true && nodes_[n].var == sorted[pos].raw) {
            lo = nodes_[n].lo;
            hi = nodes_[n].hi;
        }
        values[pos] = false;
        self(self, lo, pos + 1);
        values[pos] = true;
        self(self, hi, pos + 1);
    };
    rec(rec, fi, 0);
    return out;
}

double node_store::sat_count(bdd f, std::span<const var_id> over) {
    std::uint32_t fi = require_index(f, "sat_count");
    std::vector<var_id> sorted(over.begin(), over.end());
    std::unordered_set<std::uint32_t> over_set;
    for (var_id v : sorted) {
        check_var(v, "sat_count");
        if (!over_set.insert(v.raw).second)
            throw usage_error("sat_count: duplicate variable");
    }
    for (var_id v : support(f)) {
        if (!over_set.count(v.raw))
            throw usage_error("sat_count: support not covered by variable list");
    }
    std::sort(sorted.begin(), sorted.end(), [&](var_id a, var_id b) {
        return var_level_[a.raw] < var_level_[b.raw];
    });
    std::unordered_map<std::uint32_t, std::size_t> rank;
    for (std::size_t i = 0; i < sorted.size(); ++i) rank[sorted[i].raw] = i;
    const std::size_t end_rank = sorted.size();
    auto rank_of = [&](std::uint32_t n) {
        return n <= k_true ? end_rank : rank.at(nodes_[n].var);
    };
    std::unordered_map<std::uint32_t, double> memo;
    auto rec = [&](auto&& self, std::uint32_t n) -> double {
        if (n == k_false) return 0.0;
        if (n == k_true) return 1.0;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        const node& nd = nodes_[n];
        std::size_t r = rank_of(n);
        double lo = self(self, nd.lo) * std::exp2(double(rank_of(nd.lo) - r - 1));
        double hi = self(self, nd.hi) * std::exp2(double(rank_of(nd.hi) - r - 1));
        double c = lo + hi;
        memo.emplace(n, c);
        return c;
    };
    return rec(rec, fi) * std::exp2(double(rank_of(fi)));
}

std::size_t node_store::node_count(bdd f) const {
    std::uint32_t fi = require_index(f, "node_count");
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{fi};
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n > k_true) {
            stack.push_back(nodes_[n].lo);
            stack.push_back(nodes_[n].hi);
        }
    }
    return seen.size();
}

node_view node_store::inspect(bdd f) const {
    std::uint32_t fi = require_index(f, "inspect");
    if (fi <= k_true) throw usage_error("inspect: terminal node");
    const node& n = nodes_[fi];
    return node_view{var_id{n.var}, bdd(const_cast<node_store*>(this), n.lo),
                     bdd(const_cast<node_store*>(this), n.hi)};
}

std::string node_store::to_dot(bdd f) const {
    std::uint32_t fi = require_index(f, "to_dot");
    std::ostringstream os;
    os << "digraph bdd {\n";
    os << "  node [shape=circle];\n";
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{fi};
    bool saw_false = false, saw_true = false;
    while (!stack.empty()) {
        std::uint32_t n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n == k_false) { saw_false = true; continue; }
        if (n == k_true) { saw_true = true; continue; }
        const node& nd = nodes_[n];
        std::string label = var_names_[nd.var].empty()
                                ? "v" + std::to_string(nd.var)
                                : var_names_[nd.var];
        os << "  n" << n << " [label=\"" << label << "\"];\n";
        os << "  n" << n << " -> n" << nd.lo << " [style=dashed];\n";
        os << "  n" << n << " -> n" << nd.hi << " [style=solid];\n";
        stack.push_back(nd.lo);
        stack.push_back(nd.hi);
    }
    if (saw_false) os << "  n0 [shape=box,label=\"0\"];\n";
    if (saw_true) os << "  n1 [shape=box,label=\"1\"];\n";
    os << "}\n";
    return os.str();
}

// --- ordering policy ----------------------------------------------------------------

std::span<const var_id> ordering::plan_block(std::size_t i) {
    if (i == 0) throw usage_error("plan_block: blocks are 1-based");
    if (i > max_plan_blocks)
        throw resource_error("plan_block: plan variable region exhausted");
    const std::uint64_t n_actions = actions_.size();
    while (plan_blocks_.size() < i) {
        std::uint64_t block = plan_blocks_.size(); // 0-based index of new block
        std::vector<var_id> vars;
        vars.reserve(actions_.size());
        for (std::size_t j = 0; j < actions_.size(); ++j) {
            std::uint64_t level = n_actions + block * n_actions + j;
            vars.push_back(store_->new_var_at_level(
                level, action_names_[j] + "#" + std::to_string(block + 1)));
        }
        plan_blocks_.push_back(std::move(vars));
    }
    return plan_blocks_[i - 1];
}

ordering order_hint(node_store& store, const variable_groups& groups) {
    if (store.var_count() != 0 || store.size() != 2) {
        throw unsupported_error(
            "order_hint: store already holds variables or nodes; "
            "reordering is not supported");
    }
    ordering ord;
    ord.store_ = &store;
    ord.action_names_ = groups.actions;
    const std::uint64_t n_actions = groups.actions.size();
    for (std::size_t j = 0; j < groups.actions.size(); ++j) {
        ord.actions_.push_back(store.new_var_at_level(j, groups.actions[j]));
    }
    ord.state_base_ = n_actions + n_actions * ordering::max_plan_blocks;
    for (std::size_t k = 0; k < groups.fluents.size(); ++k) {
        ord.state_.push_back(store.new_var_at_level(ord.state_base_ + 2 * k,
                                                    groups.fluents[k]));
        ord.next_state_.push_back(store.new_var_at_level(
            ord.state_base_ + 2 * k + 1, groups.fluents[k] + "'"));
    }
    return ord;
}

} // namespace cmbp::dd
