#include "cmbp/symdomain.hpp"

#include <algorithm>

namespace cmbp::sym {

namespace {

// exactly one of the selectors is true
dd::bdd exactly_one(dd::node_store& store, std::span<const dd::var_id> vars) {
    dd::bdd none = store.constant(true);
    dd::bdd one = store.constant(false);
    for (std::size_t k = vars.size(); k-- > 0;) {
        dd::bdd v = store.mk_var(vars[k]);
        one = (v & none) | ((!v) & one);
        none = (!v) & none;
    }
    return one;
}

} // namespace

symbolic_domain compile(const lang::domain& d, dd::node_store& store) {
    symbolic_domain sd;
    sd.store_ = &store;
    sd.source_ = d;

    dd::variable_groups groups;
    for (const auto& a : d.actions) groups.actions.push_back(a.name);
    groups.fluents = d.fluents;
    sd.layout_ = dd::order_hint(store, groups);

    auto xs = sd.layout_.state_vars();
    auto xs_next = sd.layout_.next_state_vars();
    auto alphas = sd.layout_.action_vars();

    sd.legal_ = store.constant(true);
    for (const auto& f : d.always) sd.legal_ = sd.legal_ & sd.formula_to_bdd(f);
    sd.init_ = sd.formula_to_bdd(d.initially) & sd.legal_;
    sd.goal_ = sd.formula_to_bdd(d.goal) & sd.legal_;
    sd.one_hot_ = exactly_one(store, alphas);

    dd::bdd legal_next = store.rename(sd.legal_, xs, xs_next);

    sd.action_trans_.reserve(d.actions.size());
    dd::bdd selected = store.constant(true);
    for (std::size_t a = 0; a < d.actions.size(); ++a) {
        const auto& act = d.actions[a];
        dd::bdd t = sd.formula_to_bdd(act.precondition);
        for (std::size_t f = 0; f < d.fluents.size(); ++f) {
            dd::bdd fires_pos = store.constant(false);
            dd::bdd fires_neg = store.constant(false);
            for (const auto& c : act.causes) {
                if (c.fluent != static_cast<int>(f)) continue;
                dd::bdd cond = sd.formula_to_bdd(c.condition);
                if (c.positive)
                    fires_pos = fires_pos | cond;
                else
                    fires_neg = fires_neg | cond;
            }
            dd::bdd f_next = store.mk_var(xs_next[f]);
            dd::bdd clause = fires_pos.implies(f_next) & fires_neg.implies(!f_next);
            bool touched = std::find(act.possibly_changes.begin(),
                                     act.possibly_changes.end(),
                                     static_cast<int>(f)) != act.possibly_changes.end();
            if (d.inertial[f] && !touched) {
                dd::bdd f_cur = store.mk_var(xs[f]);
                clause = clause &
                         ((!fires_pos) & (!fires_neg)).implies(f_next.iff(f_cur));
            }
            t = t & clause;
        }
        sd.action_trans_.push_back(t);
        selected = selected & store.mk_var(alphas[a]).implies(t);
    }

    sd.trans_ = sd.one_hot_ & sd.legal_ & legal_next & selected;
    sd.applicable_ = store.exists(sd.layout_.next_state_vars(), sd.trans_);
    return sd;
}

} // namespace cmbp::sym
