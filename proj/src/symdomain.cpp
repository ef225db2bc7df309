#include "cmbp/symdomain.hpp"

#include <algorithm>
#include <utility>

namespace cmbp::sym {

dd::bdd symbolic_domain::action_transitions(std::size_t action) const {
    if (action >= action_trans_.size())
        throw usage_error("action_transitions: unknown action");
    return action_trans_[action];
}

dd::bdd symbolic_domain::formula_to_bdd(const lang::formula& f) const {
    if (!f) return store_->constant(true);
    using op = lang::formula_node::op;
    switch (f->kind) {
    case op::constant:
        return store_->constant(f->value);
    case op::atom:
        if (f->fluent < 0)
            throw usage_error("formula_to_bdd: unresolved atom '" + f->name + "'");
        return store_->mk_var(layout_.state_vars()[static_cast<std::size_t>(f->fluent)]);
    case op::negation:
        return !formula_to_bdd(f->lhs);
    case op::conjunction:
        return formula_to_bdd(f->lhs) & formula_to_bdd(f->rhs);
    case op::disjunction:
        return formula_to_bdd(f->lhs) | formula_to_bdd(f->rhs);
    case op::implication:
        return formula_to_bdd(f->lhs).implies(formula_to_bdd(f->rhs));
    case op::biconditional:
        return formula_to_bdd(f->lhs).iff(formula_to_bdd(f->rhs));
    }
    throw internal_error("formula_to_bdd: bad node kind");
}

dd::bdd symbolic_domain::encode_state(lang::state s) const {
    // conjoin bottom-up (deepest variable first) so each step is linear
    dd::bdd f = store_->constant(true);
    auto xs = layout_.state_vars();
    for (std::size_t k = xs.size(); k-- > 0;) {
        dd::bdd lit = store_->mk_var(xs[k]);
        f = ((s >> k) & 1) ? (lit & f) : ((!lit) & f);
    }
    return f;
}

dd::bdd symbolic_domain::encode_belief(std::span<const lang::state> states) const {
    dd::bdd f = store_->constant(false);
    for (lang::state s : states) f = f | encode_state(s);
    return f;
}

std::vector<lang::state> symbolic_domain::decode_belief(dd::bdd belief,
                                                        std::size_t limit) const {
    auto sats = store_->enumerate_sats(belief, layout_.state_vars(), limit + 1);
    if (sats.size() > limit)
        throw resource_error("decode_belief: more than " + std::to_string(limit) +
                             " states");
    std::vector<lang::state> out;
    out.reserve(sats.size());
    auto xs = layout_.state_vars();
    for (const auto& a : sats) {
        lang::state s = 0;
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (a.get(xs[k]).value_or(false)) s |= lang::state{1} << k;
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

dd::bdd symbolic_domain::select_action(dd::bdd f, std::size_t action) const {
    auto alphas = layout_.action_vars();
    if (action >= alphas.size()) throw usage_error("select_action: unknown action");
    std::vector<std::pair<dd::var_id, bool>> literals;
    literals.reserve(alphas.size());
    for (std::size_t a = 0; a < alphas.size(); ++a)
        literals.emplace_back(alphas[a], a == action);
    return store_->cofactor(f, literals);
}

bool symbolic_domain::is_applicable(dd::bdd belief, std::size_t action) const {
    if (belief.is_false()) return false;
    dd::bdd executable = select_action(applicable_, action);
    return (belief & !executable).is_false();
}

dd::bdd symbolic_domain::forward_image(dd::bdd belief, std::size_t action) const {
    dd::bdd step = select_action(trans_, action);
    dd::bdd image = store_->and_exists(layout_.state_vars(), step, belief);
    return store_->rename(image, layout_.next_state_vars(), layout_.state_vars());
}

dd::bdd symbolic_domain::strong_preimage_all(dd::bdd target) const {
    dd::bdd target_next =
        store_->rename(target, layout_.state_vars(), layout_.next_state_vars());
    // forall x'. (R -> target')  ==  !exists x'. (R & !target')
    dd::bdd all_in =
        !store_->and_exists(layout_.next_state_vars(), trans_, !target_next);
    return all_in & applicable_;
}

dd::bdd symbolic_domain::strong_preimage(dd::bdd target, std::size_t action) const {
    return select_action(strong_preimage_all(target), action);
}

} // namespace cmbp::sym
