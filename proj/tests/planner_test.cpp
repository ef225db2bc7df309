#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "cmbp/lang.hpp"
#include "cmbp/planner.hpp"
#include "cmbp/symdomain.hpp"
#include "support/fixtures.hpp"

using namespace cmbp;

namespace {

const std::vector<std::string> k_fixture_plan{"Flush", "Dunk_1", "Flush", "Dunk_2",
                                              "Flush"};

struct compiled {
    lang::domain d;
    dd::node_store store;
    sym::symbolic_domain sd;

    explicit compiled(const std::string& text)
        : d(lang::load(text)), store(), sd(sym::compile(d, store)) {}
};

} // namespace

TEST_CASE("the worked fixture solves in five steps with the known plan") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::search_report report = planner::conformant_plan(c.sd);
    CHECK(report.verdict == planner::outcome::plan);
    CHECK(report.length == 5);
    REQUIRE(report.plans.size() == 1);
    CHECK(report.plans[0] == k_fixture_plan);
    CHECK(report.beliefs_inserted == 7);
    CHECK(report.belief_hits == 6);
    REQUIRE(report.levels.size() == 5);
    std::vector<double> kept;
    for (const auto& l : report.levels) kept.push_back(l.plans_kept);
    CHECK(kept == std::vector<double>{1, 2, 2, 1, 1});
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        CHECK(report.levels[i].level == i + 1);
        CHECK(report.levels[i].relation_nodes > 0);
    }
}

TEST_CASE("disabling the prune changes neither outcome nor length") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::options opts;
    opts.prune = false;
    planner::search_report report = planner::conformant_plan(c.sd, opts);
    CHECK(report.verdict == planner::outcome::plan);
    CHECK(report.length == 5);
    REQUIRE(report.plans.size() == 1);
    CHECK(report.plans[0] == k_fixture_plan);
    CHECK(report.beliefs_inserted == 0);
    CHECK(report.belief_hits == 0);
}

TEST_CASE("without pruning both five-step plans survive") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::options opts;
    opts.prune = false;
    opts.plan_limit = 10;
    planner::search_report report = planner::conformant_plan(c.sd, opts);
    REQUIRE(report.verdict == planner::outcome::plan);
    // step one must unclog, the dunks need a flush between them, so the
    // only freedom is the package order
    std::set<std::vector<std::string>> expect{
        {"Flush", "Dunk_1", "Flush", "Dunk_2", "Flush"},
        {"Flush", "Dunk_2", "Flush", "Dunk_1", "Flush"}};
    std::set<std::vector<std::string>> got(report.plans.begin(), report.plans.end());
    CHECK(got == expect);
}

TEST_CASE("stepwise search exposes the fixpoint structure") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::search s(c.sd, true);
    CHECK(s.depth() == 0);
    CHECK(s.table() == c.sd.goal());
    CHECK(s.extract().is_false());
    for (int d = 1; d <= 4; ++d) {
        s.expand();
        CHECK(s.depth() == std::size_t(d));
        CHECK(s.extract().is_false());
    }
    s.expand();
    dd::bdd plans = s.extract();
    REQUIRE_FALSE(plans.is_false());
    auto decoded = s.decode_plans(plans, 10);
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0] == k_fixture_plan);
    CHECK(s.levels().size() == 5);
}

TEST_CASE("every decoded plan passes symbolic verification") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::options opts;
    opts.prune = false;
    opts.plan_limit = 10;
    planner::search_report report = planner::conformant_plan(c.sd, opts);
    for (const auto& plan : report.plans) {
        planner::plan_check chk = planner::verify_plan(c.sd, plan);
        CHECK_MESSAGE(chk.ok, chk.reason);
    }
}

TEST_CASE("verification replays the belief evolution of the fixture") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::plan_check chk = planner::verify_plan(c.sd, k_fixture_plan);
    REQUIRE(chk.ok);
    CHECK(chk.reason.empty());
    REQUIRE(chk.trace.size() == 6);
    CHECK(chk.trace[0] == c.sd.init());
    // belief sizes along the execution: 4 2 4 2 4 2
    auto xs = c.sd.layout().state_vars();
    std::vector<double> sizes;
    for (dd::bdd b : chk.trace) sizes.push_back(c.store.sat_count(b, xs));
    CHECK(sizes == std::vector<double>{4, 2, 4, 2, 4, 2});
    // and the final belief sits inside the goal
    CHECK((chk.trace.back() & !c.sd.goal()).is_false());
}

TEST_CASE("verification failures carry a reason") {
    compiled c(testsupport::read_fixture("btuc.dom"));

    planner::plan_check unknown_action = planner::verify_plan(c.sd, {"Teleport"});
    CHECK_FALSE(unknown_action.ok);
    CHECK(unknown_action.reason.find("Teleport") != std::string::npos);

    planner::plan_check inapplicable = planner::verify_plan(c.sd, {"Dunk_1"});
    CHECK_FALSE(inapplicable.ok);
    CHECK_FALSE(inapplicable.reason.empty());

    planner::plan_check short_plan = planner::verify_plan(c.sd, {"Flush"});
    CHECK_FALSE(short_plan.ok);
    CHECK(short_plan.trace.size() == 2);

    planner::plan_check empty_plan = planner::verify_plan(c.sd, {});
    CHECK_FALSE(empty_plan.ok);
}

TEST_CASE("an empty plan is conformant when the goal already holds") {
    compiled c(
        "DOMAIN done\nACTIONS a;\nFLUENTS p : boolean;\nINERTIAL p;\n"
        "a CAUSES p;\nINITIALLY p;\nCONFORMANT p;\n");
    planner::search_report report = planner::conformant_plan(c.sd);
    CHECK(report.verdict == planner::outcome::plan);
    CHECK(report.length == 0);
    REQUIRE(report.plans.size() == 1);
    CHECK(report.plans[0].empty());
    CHECK(report.levels.empty());
    CHECK(planner::verify_plan(c.sd, {}).ok);
}

TEST_CASE("an empty table is a definitive failure") {
    compiled c(
        "DOMAIN stuck\nACTIONS a;\nFLUENTS p : boolean;\nINERTIAL p;\n"
        "a CAUSES p;\nINITIALLY p;\nCONFORMANT !p;\n");
    planner::search_report report = planner::conformant_plan(c.sd);
    CHECK(report.verdict == planner::outcome::fail);
    CHECK(report.plans.empty());
    CHECK(report.levels.size() == 1);
}

TEST_CASE("the depth cap turns absence of proof into unknown") {
    compiled c(testsupport::read_fixture("btuc.dom"));
    planner::options opts;
    opts.max_depth = 2;
    planner::search_report report = planner::conformant_plan(c.sd, opts);
    CHECK(report.verdict == planner::outcome::unknown);
    CHECK(report.plans.empty());
    CHECK(report.levels.size() == 2);
}

TEST_CASE("level statistics stay in lockstep between prune modes") {
    compiled on(testsupport::read_fixture("btuc.dom"));
    compiled off(testsupport::read_fixture("btuc.dom"));
    planner::search with_prune(on.sd, true);
    planner::search without(off.sd, false);
    for (int d = 1; d <= 5; ++d) {
        with_prune.expand();
        without.expand();
        // pruning only ever drops plan paths, never beliefs, so extraction
        // must flip from empty to nonempty at the same depth
        CHECK(with_prune.extract().is_false() == without.extract().is_false());
        CHECK(with_prune.levels().back().plans_kept <=
              without.levels().back().plans_kept);
    }
}
