#include "cmbp/planner.hpp"

#include <algorithm>

namespace cmbp::planner {

search::search(sym::symbolic_domain& dom, bool prune_enabled)
    : dom_(&dom),
      prune_enabled_(prune_enabled),
      table_(dom.goal()),
      state_base_(dom.layout().first_state_level()) {
    if (dom.init().is_false()) throw contract_error("empty initial belief");
    if (dom.goal().is_false()) throw contract_error("empty goal belief");
    belief_cache_.insert(table_.id()); // the goal itself is depth 0
}

void search::expand() {
    dd::node_store& store = dom_->store();
    dd::ordering& layout = dom_->layout();

    dd::bdd target_next =
        store.rename(table_, layout.state_vars(), layout.next_state_vars());
    dd::bdd all_in =
        !store.and_exists(layout.next_state_vars(), dom_->transitions(), !target_next);
    dd::bdd pre = all_in & dom_->applicable();

    ++depth_;
    table_ = store.rename(pre, layout.action_vars(), layout.plan_block(depth_));

    double kept;
    if (prune_enabled_) {
        std::size_t before = inserted_;
        table_ = prune(table_);
        kept = static_cast<double>(inserted_ - before);
    } else {
        std::vector<dd::var_id> plan_vars;
        for (std::size_t b = 1; b <= depth_; ++b) {
            auto block = layout.plan_block(b);
            plan_vars.insert(plan_vars.end(), block.begin(), block.end());
        }
        kept = store.sat_count(store.exists(layout.state_vars(), table_), plan_vars);
    }
    levels_.push_back({depth_, store.node_count(table_), kept});
}

dd::bdd search::prune(dd::bdd table) { return prune_rec(table); }

dd::bdd search::prune_rec(dd::bdd f) {
    dd::node_store& store = dom_->store();
    if (f.is_false()) return f;
    // at or past the state variables the sub-BDD is a belief state
    bool boundary = f.is_true();
    if (!boundary) {
        dd::node_view v = store.inspect(f);
        boundary = store.level_of(v.var) >= state_base_;
    }
    if (boundary) {
        if (!belief_cache_.insert(f.id()).second) {
            ++hits_;
            return store.constant(false);
        }
        ++inserted_;
        return f;
    }
    if (skip_memo_.count(f.id())) {
        // every belief below was cached when this node was first processed
        ++hits_;
        return store.constant(false);
    }
    dd::node_view v = store.inspect(f);
    dd::bdd low = prune_rec(v.low);
    dd::bdd high = prune_rec(v.high);
    skip_memo_.insert(f.id());
    return store.make_node(v.var, low, high);
}

dd::bdd search::extract() const {
    dd::node_store& store = dom_->store();
    return store.forall(dom_->layout().state_vars(), dom_->init().implies(table_));
}

std::vector<std::vector<std::string>> search::decode_plans(dd::bdd plans,
                                                           std::size_t limit) const {
    dd::node_store& store = dom_->store();
    dd::ordering& layout = dom_->layout();
    const auto& actions = dom_->source().actions;

    std::vector<dd::var_id> over;
    for (std::size_t b = 1; b <= depth_; ++b) {
        auto block = layout.plan_block(b);
        over.insert(over.end(), block.begin(), block.end());
    }
    std::vector<std::vector<std::string>> out;
    for (const auto& sat : store.enumerate_sats(plans, over, limit)) {
        std::vector<std::string> plan;
        plan.reserve(depth_);
        // block i holds the i-th action from the end; execution order is
        // block depth .. block 1
        for (std::size_t b = depth_; b >= 1; --b) {
            auto block = layout.plan_block(b);
            std::size_t chosen = actions.size();
            for (std::size_t a = 0; a < block.size(); ++a) {
                if (!sat.get(block[a]).value_or(false)) continue;
                if (chosen != actions.size())
                    throw internal_error("decode_plans: two actions in one block");
                chosen = a;
            }
            if (chosen == actions.size())
                throw internal_error("decode_plans: empty plan block");
            plan.push_back(actions[chosen].name);
        }
        out.push_back(std::move(plan));
    }
    return out;
}

search_report conformant_plan(sym::symbolic_domain& dom, const options& opts) {
    search s(dom, opts.prune);
    search_report report;

    auto finish_plan = [&](dd::bdd plans) {
        report.verdict = outcome::plan;
        report.length = s.depth();
        report.plans = s.decode_plans(plans, opts.plan_limit);
    };

    dd::bdd plans = s.extract();
    if (!plans.is_false()) {
        finish_plan(plans);
    } else {
        while (s.depth() < opts.max_depth) {
            s.expand();
            if (s.table().is_false()) {
                report.verdict = outcome::fail;
                break;
            }
            plans = s.extract();
            if (!plans.is_false()) {
                finish_plan(plans);
                break;
            }
        }
    }
    report.levels = s.levels();
    report.beliefs_inserted = s.beliefs_inserted();
    report.belief_hits = s.belief_hits();
    return report;
}

plan_check verify_plan(sym::symbolic_domain& dom,
                       const std::vector<std::string>& plan) {
    plan_check out;
    dd::bdd belief = dom.init();
    if (belief.is_false()) throw contract_error("empty initial belief");
    out.trace.push_back(belief);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        int a = dom.source().action_index(plan[i]);
        if (a < 0) {
            out.reason = "step " + std::to_string(i + 1) + ": unknown action '" +
                         plan[i] + "'";
            return out;
        }
        if (!dom.is_applicable(belief, static_cast<std::size_t>(a))) {
            out.reason = "step " + std::to_string(i + 1) + ": '" + plan[i] +
                         "' is not applicable in every state";
            return out;
        }
        belief = dom.forward_image(belief, static_cast<std::size_t>(a));
        out.trace.push_back(belief);
    }
    if (!(belief & !dom.goal()).is_false()) {
        out.reason = "final belief is not contained in the goal";
        return out;
    }
    out.ok = true;
    return out;
}

} // namespace cmbp::planner
