#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "cmbp/bench.hpp"
#include "cmbp/lang.hpp"
#include "cmbp/symdomain.hpp"
#include "support/fixtures.hpp"

using namespace cmbp;

namespace {

const char* k_tiny = R"(DOMAIN tiny
ACTIONS go;
FLUENTS p, q, r : boolean;
INERTIAL p, q;
go HAS PRECONDITIONS p;
go CAUSES q IF p;
go POSSIBLY CHANGES p;
INITIALLY p;
CONFORMANT q;
)";

std::vector<lang::state> states_where(const lang::domain& d, const lang::formula& f) {
    std::vector<lang::state> out;
    for (lang::state s : lang::enumerate_states(d))
        if (lang::eval(f, s)) out.push_back(s);
    return out;
}

// Every piece of the compiled form against the explicit semantics, pairwise
// over all states and actions. The explicit route never touches a BDD.
void check_against_explicit(const lang::domain& d) {
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    std::vector<lang::state> legal = lang::enumerate_states(d);

    CHECK(sd.action_count() == d.actions.size());
    CHECK(sd.fluent_count() == d.fluents.size());
    CHECK(sd.decode_belief(sd.legal_states()) == legal);
    CHECK(sd.decode_belief(sd.init()) == states_where(d, d.initially));
    CHECK(sd.decode_belief(sd.goal()) == states_where(d, d.goal));
    CHECK(store.sat_count(sd.one_hot(), sd.layout().action_vars()) ==
          static_cast<double>(d.actions.size()));

    for (std::size_t a = 0; a < d.actions.size(); ++a) {
        for (lang::state s : legal) {
            std::vector<lang::state> expect = lang::explicit_step(d, s, a);
            // image of the singleton through the full relation
            CHECK(sd.decode_belief(sd.forward_image(sd.encode_state(s), a)) ==
                  expect);
            // per-state applicability
            CHECK(sd.is_applicable(sd.encode_state(s), a) == !expect.empty());
        }
    }

    // the transition relation, decoded pair by pair
    auto xs = sd.layout().state_vars();
    auto xs2 = sd.layout().next_state_vars();
    std::vector<dd::var_id> both(xs.begin(), xs.end());
    both.insert(both.end(), xs2.begin(), xs2.end());
    for (std::size_t a = 0; a < d.actions.size(); ++a) {
        std::set<std::pair<lang::state, lang::state>> expect;
        for (lang::state s : legal)
            for (lang::state t : lang::explicit_step(d, s, a)) expect.insert({s, t});
        std::set<std::pair<lang::state, lang::state>> got;
        dd::bdd slice = sd.select_action(sd.transitions(), a);
        for (const auto& m : store.enumerate_sats(slice, both, 1u << 20)) {
            lang::state s = 0, t = 0;
            for (std::size_t k = 0; k < xs.size(); ++k) {
                if (m.get(xs[k]).value_or(false)) s |= lang::state{1} << k;
                if (m.get(xs2[k]).value_or(false)) t |= lang::state{1} << k;
            }
            got.insert({s, t});
        }
        CHECK(got == expect);
    }
}

} // namespace

TEST_CASE("compiled relations agree with the explicit semantics") {
    SUBCASE("three fluents with noise and uncertainty") {
        check_against_explicit(lang::load(k_tiny));
    }
    SUBCASE("worked fixture") {
        check_against_explicit(lang::load(testsupport::read_fixture("btuc.dom")));
    }
    SUBCASE("two bombs, two toilets") {
        check_against_explicit(lang::load(
            bench::generate({bench::family::bmtc, 2, 2, bench::variant::low})));
    }
    SUBCASE("ring of two rooms") {
        check_against_explicit(
            lang::load(bench::generate({bench::family::ring, 2, 0, bench::variant::none})));
    }
    SUBCASE("uncertain ring of two rooms") {
        check_against_explicit(
            lang::load(bench::generate({bench::family::uring, 2, 0, bench::variant::none})));
    }
}

TEST_CASE("ring initial beliefs have the closed-form size") {
    for (int r = 2; r <= 4; ++r) {
        lang::domain d = lang::load(
            bench::generate({bench::family::ring, r, 0, bench::variant::none}));
        dd::node_store store;
        sym::symbolic_domain sd = sym::compile(d, store);
        double expect = r;
        for (int i = 0; i < r; ++i) expect *= 3; // open, closed, locked per window
        CHECK(store.sat_count(sd.init(), sd.layout().state_vars()) == expect);
    }
}

TEST_CASE("formula_to_bdd matches eval on every legal state") {
    lang::domain d = lang::load(testsupport::read_fixture("btuc.dom"));
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    auto xs = sd.layout().state_vars();
    for (const lang::formula& f : {d.initially, d.goal, d.always.at(0)}) {
        dd::bdd enc = sd.formula_to_bdd(f);
        for (lang::state s : lang::enumerate_states(d)) {
            dd::assignment a;
            for (std::size_t k = 0; k < xs.size(); ++k) a.set(xs[k], (s >> k) & 1);
            CHECK(store.eval(enc, a) == lang::eval(f, s));
        }
    }
}

TEST_CASE("formula_to_bdd rejects unresolved atoms") {
    lang::domain d = lang::load(k_tiny);
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    CHECK_THROWS_AS((void)sd.formula_to_bdd(lang::f_atom("stranger")), usage_error);
}

TEST_CASE("encode and decode of beliefs are mutually inverse") {
    lang::domain d = lang::load(testsupport::read_fixture("btuc.dom"));
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    std::vector<lang::state> legal = lang::enumerate_states(d);
    std::mt19937 rng(5);
    for (int round = 0; round < 50; ++round) {
        std::vector<lang::state> subset;
        for (lang::state s : legal)
            if (rng() % 2) subset.push_back(s);
        CHECK(sd.decode_belief(sd.encode_belief(subset)) == subset);
    }
    CHECK(sd.decode_belief(store.constant(false)).empty());
    CHECK(sd.encode_belief({}).is_false());
}

TEST_CASE("decode_belief rejects functions beyond the state variables") {
    lang::domain d = lang::load(k_tiny);
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    CHECK_THROWS_AS((void)sd.decode_belief(sd.transitions()), usage_error);
}

TEST_CASE("strong preimage agrees with the explicit definition") {
    for (const char* which : {"tiny", "fixture"}) {
        lang::domain d = which[0] == 't'
                             ? lang::load(k_tiny)
                             : lang::load(testsupport::read_fixture("btuc.dom"));
        dd::node_store store;
        sym::symbolic_domain sd = sym::compile(d, store);
        std::vector<lang::state> legal = lang::enumerate_states(d);
        std::mt19937 rng(11);
        for (int round = 0; round < 40; ++round) {
            std::vector<lang::state> target;
            for (lang::state s : legal)
                if (rng() % 2) target.push_back(s);
            std::set<lang::state> in_target(target.begin(), target.end());
            dd::bdd target_bdd = sd.encode_belief(target);
            dd::bdd all = sd.strong_preimage_all(target_bdd);
            for (std::size_t a = 0; a < d.actions.size(); ++a) {
                std::vector<lang::state> expect;
                for (lang::state s : legal) {
                    auto outcomes = lang::explicit_step(d, s, a);
                    bool good = !outcomes.empty();
                    for (lang::state t : outcomes) good = good && in_target.count(t);
                    if (good) expect.push_back(s);
                }
                CHECK(sd.decode_belief(sd.strong_preimage(target_bdd, a)) == expect);
                // the combined relation restricted to this action says the same
                CHECK(sd.decode_belief(sd.select_action(all, a)) == expect);
            }
        }
    }
}

TEST_CASE("forward_image distributes over belief union") {
    lang::domain d = lang::load(testsupport::read_fixture("btuc.dom"));
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    std::vector<lang::state> legal = lang::enumerate_states(d);
    for (std::size_t a = 0; a < d.actions.size(); ++a) {
        dd::bdd whole = sd.forward_image(sd.legal_states(), a);
        dd::bdd pieces = store.constant(false);
        for (lang::state s : legal)
            pieces = pieces | sd.forward_image(sd.encode_state(s), a);
        CHECK(whole == pieces);
    }
}

TEST_CASE("is_applicable demands an outcome from every state of the belief") {
    lang::domain d = lang::load(testsupport::read_fixture("btuc.dom"));
    dd::node_store store;
    sym::symbolic_domain sd = sym::compile(d, store);
    int dunk1 = d.action_index("Dunk_1");
    int flush = d.action_index("Flush");
    REQUIRE(dunk1 >= 0);
    REQUIRE(flush >= 0);
    // dunking needs an unclogged toilet in every state of the belief
    int clogged = d.fluent_index("Clogged");
    lang::state clear = 0, blocked = lang::state{1} << clogged;
    int in1 = d.fluent_index("In_1");
    clear |= lang::state{1} << in1;
    blocked |= lang::state{1} << in1;
    std::vector<lang::state> mixed{clear, blocked};
    CHECK(sd.is_applicable(sd.encode_state(clear), dunk1));
    CHECK_FALSE(sd.is_applicable(sd.encode_state(blocked), dunk1));
    CHECK_FALSE(sd.is_applicable(sd.encode_belief(mixed), dunk1));
    CHECK(sd.is_applicable(sd.encode_belief(mixed), flush));
    // the empty belief is never a place to act from
    CHECK_FALSE(sd.is_applicable(store.constant(false), flush));
}

TEST_CASE("compile refuses a store that is already in use") {
    lang::domain d = lang::load(k_tiny);
    dd::node_store store;
    store.new_var("squatter");
    CHECK_THROWS_AS((void)sym::compile(d, store), unsupported_error);
}
