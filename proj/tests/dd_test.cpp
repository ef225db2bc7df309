#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "cmbp/dd.hpp"
#include "support/kernel_checks.hpp"
#include "support/random_formula.hpp"
#include "support/truth_table.hpp"

using namespace cmbp;
using dd::bdd;
using dd::binary_op;
using dd::var_id;

namespace {

dd::store_options small_store() {
    dd::store_options opts;
    opts.unique_table_bits = 10;
    opts.computed_table_entries = 1u << 12;
    return opts;
}

} // namespace

TEST_CASE("terminals behave as the two constant functions") {
    dd::node_store store(small_store());
    bdd t = store.constant(true);
    bdd f = store.constant(false);
    CHECK(t.is_true());
    CHECK(f.is_false());
    CHECK((t & f) == f);
    CHECK((t | f) == t);
    CHECK((t ^ t) == f);
    CHECK(!f == t);
    CHECK(f.implies(t).is_true());
    CHECK(f.implies(f).is_true());
    CHECK(t.iff(f) == f);
    CHECK(store.node_count(t) == 1);
}

TEST_CASE("a null handle rejects every operation") {
    bdd null;
    CHECK_FALSE(null.valid());
    CHECK_FALSE(null.is_false());
    CHECK_FALSE(null.is_true());
    CHECK_THROWS_AS((void)(null & null), usage_error);
    CHECK_THROWS_AS((void)!null, usage_error);
}

TEST_CASE("hash consing gives pointer equality for equal functions") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd fx = store.mk_var(x);
    bdd fy = store.mk_var(y);
    CHECK(store.mk_var(x) == fx);
    CHECK((fx & fy) == (fy & fx));
    CHECK((fx | (fx & fy)) == fx);
    CHECK(((fx & fy) | (fx & !fy)) == fx);
    CHECK((fx ^ fy) == (!fx).iff(fy));
    CHECK(!(!fx) == fx);
}

TEST_CASE("reduction removes redundant branch nodes") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd fy = store.mk_var(y);
    CHECK(store.make_node(x, fy, fy) == fy);
    bdd node = store.make_node(x, !fy, fy);
    CHECK(store.node_count(node) == 4); // x, y, and both terminals
    CHECK(node == store.mk_var(x).iff(fy));
}

TEST_CASE("make_node refuses a branch variable below its cofactors") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd fx = store.mk_var(x);
    CHECK_THROWS_AS(store.make_node(y, !fx, fx), usage_error);
    CHECK_THROWS_AS(store.make_node(x, store.mk_var(x), store.constant(true)),
                    usage_error);
}

TEST_CASE("handles are rejected by foreign stores") {
    dd::node_store a(small_store());
    dd::node_store b(small_store());
    bdd in_a = a.mk_var(a.new_var("x"));
    bdd in_b = b.mk_var(b.new_var("x"));
    CHECK_THROWS_AS((void)a.apply(binary_op::op_and, in_a, in_b), usage_error);
    CHECK_THROWS_AS((void)b.node_count(in_a), usage_error);
}

TEST_CASE("explicit order levels control the variable order") {
    dd::node_store store(small_store());
    var_id later = store.new_var_at_level(5, "later");
    var_id first = store.new_var_at_level(1, "first");
    CHECK(store.precedes(first, later));
    CHECK_THROWS_AS(store.new_var_at_level(5, "dup"), usage_error);
    // appending after explicit levels keeps going from the maximum
    var_id appended = store.new_var("appended");
    CHECK(store.precedes(later, appended));
    CHECK(store.level_of(appended) == 6);
}

TEST_CASE("eval walks the diagram correctly") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    var_id z = store.new_var("z");
    bdd f = (store.mk_var(x) & store.mk_var(y)) ^ store.mk_var(z);
    for (unsigned i = 0; i < 8; ++i) {
        dd::assignment a;
        a.set(x, i & 1);
        a.set(y, i & 2);
        a.set(z, i & 4);
        bool expect = ((i & 1) && (i & 2)) != bool(i & 4);
        CHECK(store.eval(f, a) == expect);
    }
}

TEST_CASE("sat_count and enumerate_sats agree with direct enumeration") {
    dd::node_store store(small_store());
    std::vector<var_id> vars;
    for (int i = 0; i < 4; ++i) vars.push_back(store.new_var());
    // odd parity over four variables: eight models
    bdd f = store.constant(false);
    for (var_id v : vars) f = f ^ store.mk_var(v);
    CHECK(store.sat_count(f, vars) == 8.0);
    auto sats = store.enumerate_sats(f, vars, 100);
    REQUIRE(sats.size() == 8);
    for (const auto& a : sats) {
        int ones = 0;
        for (var_id v : vars) ones += a.get(v).value_or(false);
        CHECK(ones % 2 == 1);
    }
    // the limit truncates
    CHECK(store.enumerate_sats(f, vars, 3).size() == 3);
    // counting over a superset scales by the free variables
    std::vector<var_id> wider = vars;
    wider.push_back(store.new_var());
    CHECK(store.sat_count(f, wider) == 16.0);
}

TEST_CASE("support lists exactly the variables the function depends on") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    var_id z = store.new_var("z");
    bdd f = store.mk_var(x) & (store.mk_var(z) | !store.mk_var(z)) & store.mk_var(y);
    auto sup = store.support(f);
    REQUIRE(sup.size() == 2);
    CHECK(sup[0] == x);
    CHECK(sup[1] == y);
    CHECK(store.support(store.constant(true)).empty());
}

TEST_CASE("cofactor fixes variables to constants") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd f = store.mk_var(x).iff(store.mk_var(y));
    std::pair<var_id, bool> fix_true{x, true};
    std::pair<var_id, bool> fix_false{x, false};
    CHECK(store.cofactor(f, {&fix_true, 1}) == store.mk_var(y));
    CHECK(store.cofactor(f, {&fix_false, 1}) == !store.mk_var(y));
}

TEST_CASE("compose substitutes a function for a variable") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    var_id z = store.new_var("z");
    bdd f = store.mk_var(x) ^ store.mk_var(z);
    bdd g = store.mk_var(y) & store.mk_var(z);
    CHECK(store.compose(f, x, g) == (g ^ store.mk_var(z)));
    CHECK(store.compose(f, y, g) == f);
}

TEST_CASE("rename requires disjoint, same-length variable lists") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd f = store.mk_var(x) & store.mk_var(y);
    std::vector<var_id> from{x};
    std::vector<var_id> to{x, y};
    CHECK_THROWS_AS((void)store.rename(f, from, to), usage_error);
    // target occurs in f and is not renamed away
    std::vector<var_id> clash_to{y};
    CHECK_THROWS_AS((void)store.rename(f, from, clash_to), usage_error);
    // swapping both at once is fine
    std::vector<var_id> both{x, y};
    std::vector<var_id> swapped{y, x};
    CHECK(store.rename(f, both, swapped) == f);
    bdd asym = store.mk_var(x) & !store.mk_var(y);
    CHECK(store.rename(asym, both, swapped) == (!store.mk_var(x) & store.mk_var(y)));
}

TEST_CASE("quantifiers collapse to the expected functions") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd f = store.mk_var(x) & store.mk_var(y);
    std::vector<var_id> just_x{x};
    CHECK(store.exists(just_x, f) == store.mk_var(y));
    CHECK(store.forall(just_x, f).is_false());
    std::vector<var_id> both{x, y};
    CHECK(store.exists(both, f).is_true());
    bdd g = store.mk_var(x) | store.mk_var(y);
    CHECK(store.forall(just_x, g) == store.mk_var(y));
}

TEST_CASE("and_exists equals quantifying the conjunction") {
    dd::node_store store(small_store());
    std::vector<var_id> vars;
    for (int i = 0; i < 6; ++i) vars.push_back(store.new_var());
    ttref::generator gen(store, vars, 20260822);
    for (int round = 0; round < 200; ++round) {
        ttref::paired a = gen.expression(8);
        ttref::paired b = gen.expression(8);
        std::vector<var_id> subset;
        for (int k = 0; k < 6; ++k)
            if (gen.rng()() % 2) subset.push_back(vars[k]);
        CHECK(store.and_exists(subset, a.f, b.f) ==
              store.exists(subset, a.f & b.f));
    }
}

TEST_CASE("results are identical with the computed table disabled") {
    dd::store_options no_memo = small_store();
    no_memo.computed_table_enabled = false;
    dd::node_store plain(small_store());
    dd::node_store bare(no_memo);
    std::vector<var_id> pv, bv;
    for (int i = 0; i < 5; ++i) {
        pv.push_back(plain.new_var());
        bv.push_back(bare.new_var());
    }
    ttref::generator pg(plain, pv, 99), bg(bare, bv, 99);
    for (int round = 0; round < 100; ++round) {
        ttref::paired a = pg.expression(10);
        ttref::paired c = bg.expression(10);
        CHECK(a.t == c.t);
        for (std::size_t i = 0; i < a.t.bits.size(); ++i) {
            CHECK(bare.eval(c.f, ttref::nth_assignment(bv, 5, i)) == a.t.bits[i]);
        }
    }
}

TEST_CASE("node capacity is a hard limit reported as a resource error") {
    dd::store_options tiny = small_store();
    tiny.max_nodes = 16;
    dd::node_store store(tiny);
    std::vector<var_id> vars;
    for (int i = 0; i < 10; ++i) vars.push_back(store.new_var());
    bdd parity = store.constant(false);
    CHECK_THROWS_AS(
        [&] {
            for (var_id v : vars) parity = parity ^ store.mk_var(v);
        }(),
        resource_error);
}

TEST_CASE("node_count matches the canonical form on structured formulas") {
    dd::node_store store(small_store());
    std::vector<var_id> vars;
    for (int i = 0; i < 8; ++i) vars.push_back(store.new_var());
    // parity: the canonical diagram has 2 internal nodes per level plus the
    // first level's single node plus two terminals
    bdd parity = store.mk_var(vars[0]);
    for (int i = 1; i < 8; ++i) parity = parity ^ store.mk_var(vars[i]);
    CHECK(store.node_count(parity) == 1 + 2 * 7 + 2);
    // a conjunction is a chain
    bdd conj = store.constant(true);
    for (var_id v : vars) conj = conj & store.mk_var(v);
    CHECK(store.node_count(conj) == 8 + 2);
}

TEST_CASE("randomized kernel cases agree with the truth-table model") {
    dd::node_store store;
    std::vector<var_id> primary, shadow;
    for (int i = 0; i < 10; ++i) primary.push_back(store.new_var());
    for (int i = 0; i < 10; ++i) shadow.push_back(store.new_var());
    ttref::generator gen(store, primary, 7);
    for (int round = 0; round < 2000; ++round) {
        unsigned vars = 1 + static_cast<unsigned>(gen.rng()() % 10);
        unsigned size = 1 + static_cast<unsigned>(gen.rng()() % 24);
        std::string failure =
            ttref::check_kernel_case(store, primary, shadow, gen, vars, size);
        REQUIRE_MESSAGE(failure.empty(), failure);
    }
}

TEST_CASE("inspect exposes the node structure") {
    dd::node_store store(small_store());
    var_id x = store.new_var("x");
    var_id y = store.new_var("y");
    bdd f = store.mk_var(x) & store.mk_var(y);
    dd::node_view view = store.inspect(f);
    CHECK(view.var == x);
    CHECK(view.low.is_false());
    CHECK(view.high == store.mk_var(y));
    CHECK_THROWS_AS((void)store.inspect(store.constant(true)), usage_error);
}

TEST_CASE("planning layout interleaves state variables and reserves plan blocks") {
    dd::node_store store(small_store());
    dd::variable_groups groups;
    groups.actions = {"a", "b", "c"};
    groups.fluents = {"p", "q"};
    dd::ordering order = dd::order_hint(store, groups);
    REQUIRE(order.action_count() == 3);
    REQUIRE(order.fluent_count() == 2);
    // actions sit at the very top
    for (var_id v : order.action_vars())
        CHECK(store.level_of(v) < order.first_state_level());
    // each current-state variable is directly followed by its twin
    auto xs = order.state_vars();
    auto xs2 = order.next_state_vars();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        CHECK(store.level_of(xs2[k]) == store.level_of(xs[k]) + 1);
        CHECK(store.level_of(xs[k]) >= order.first_state_level());
    }
    // plan blocks sit between the actions and the states, in block order
    auto block1 = order.plan_block(1);
    auto block2 = order.plan_block(2);
    REQUIRE(block1.size() == 3);
    REQUIRE(block2.size() == 3);
    CHECK(store.level_of(order.action_vars().back()) < store.level_of(block1.front()));
    CHECK(store.level_of(block1.back()) < store.level_of(block2.front()));
    CHECK(store.level_of(block2.back()) < order.first_state_level());
    // blocks are stable on re-request
    CHECK(order.plan_block(1).front() == block1.front());
}

TEST_CASE("order_hint refuses a store that already has variables") {
    dd::node_store store(small_store());
    store.new_var("existing");
    dd::variable_groups groups;
    groups.actions = {"a"};
    groups.fluents = {"p"};
    CHECK_THROWS_AS((void)dd::order_hint(store, groups), unsupported_error);
}
