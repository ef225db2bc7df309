#include "cmbp/lang.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cmbp/dd.hpp"

namespace cmbp::lang {

// --- formula builders -------------------------------------------------------

namespace {

formula make_node(formula_node n) {
    return std::make_shared<const formula_node>(std::move(n));
}

formula make_binary(formula_node::op kind, formula a, formula b) {
    formula_node n;
    n.kind = kind;
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return make_node(std::move(n));
}

} // namespace

formula f_const(bool value) {
    formula_node n;
    n.kind = formula_node::op::constant;
    n.value = value;
    return make_node(std::move(n));
}

formula f_atom(std::string name, source_span span) {
    formula_node n;
    n.kind = formula_node::op::atom;
    n.name = std::move(name);
    n.span = span;
    return make_node(std::move(n));
}

formula f_not(formula f) {
    formula_node n;
    n.kind = formula_node::op::negation;
    n.lhs = std::move(f);
    return make_node(std::move(n));
}

formula f_and(formula a, formula b) {
    return make_binary(formula_node::op::conjunction, std::move(a), std::move(b));
}
formula f_or(formula a, formula b) {
    return make_binary(formula_node::op::disjunction, std::move(a), std::move(b));
}
formula f_implies(formula a, formula b) {
    return make_binary(formula_node::op::implication, std::move(a), std::move(b));
}
formula f_iff(formula a, formula b) {
    return make_binary(formula_node::op::biconditional, std::move(a), std::move(b));
}

bool equal(const formula& a, const formula& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case formula_node::op::constant:
        return a->value == b->value;
    case formula_node::op::atom:
        return a->name == b->name;
    case formula_node::op::negation:
        return equal(a->lhs, b->lhs);
    default:
        return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

namespace {

int precedence(formula_node::op kind) {
    switch (kind) {
    case formula_node::op::biconditional: return 1;
    case formula_node::op::implication: return 2;
    case formula_node::op::disjunction: return 3;
    case formula_node::op::conjunction: return 4;
    default: return 5;
    }
}

void print(std::ostringstream& os, const formula& f, int parent_prec) {
    int prec = precedence(f->kind);
    switch (f->kind) {
    case formula_node::op::constant:
        os << (f->value ? "TRUE" : "FALSE");
        return;
    case formula_node::op::atom:
        os << f->name;
        return;
    case formula_node::op::negation:
        os << "!";
        print(os, f->lhs, prec);
        return;
    default:
        break;
    }
    const char* sym = f->kind == formula_node::op::conjunction   ? " & "
                      : f->kind == formula_node::op::disjunction ? " | "
                      : f->kind == formula_node::op::implication ? " -> "
                                                                 : " <-> ";
    bool parens = prec < parent_prec;
    bool right_assoc = f->kind == formula_node::op::implication;
    if (parens) os << "(";
    // the operand on the non-associating side needs parens at equal
    // precedence: the right one for &, |, <->, the left one for ->
    print(os, f->lhs, right_assoc ? prec + 1 : prec);
    os << sym;
    print(os, f->rhs, right_assoc ? prec : prec + 1);
    if (parens) os << ")";
}

} // namespace

std::string to_string(const formula& f) {
    if (!f) return "TRUE";
    std::ostringstream os;
    print(os, f, 0);
    return os.str();
}

// --- lexer --------------------------------------------------------------------

namespace {

enum class tok {
    ident,
    kw_domain,
    kw_actions,
    kw_fluents,
    kw_inertial,
    kw_always,
    kw_has,
    kw_preconditions,
    kw_causes,
    kw_if,
    kw_possibly,
    kw_changes,
    kw_initially,
    kw_conformant,
    kw_boolean,
    kw_true,
    kw_false,
    semicolon,
    colon,
    comma,
    lparen,
    rparen,
    bang,
    amp,
    pipe,
    arrow,
    darrow,
    end
};

struct token {
    tok kind;
    std::string text;
    source_span span;
};

const std::unordered_map<std::string, tok>& keywords() {
    static const std::unordered_map<std::string, tok> map = {
        {"DOMAIN", tok::kw_domain},        {"ACTIONS", tok::kw_actions},
        {"FLUENTS", tok::kw_fluents},      {"INERTIAL", tok::kw_inertial},
        {"ALWAYS", tok::kw_always},        {"HAS", tok::kw_has},
        {"PRECONDITIONS", tok::kw_preconditions},
        {"CAUSES", tok::kw_causes},        {"IF", tok::kw_if},
        {"POSSIBLY", tok::kw_possibly},    {"CHANGES", tok::kw_changes},
        {"INITIALLY", tok::kw_initially},  {"CONFORMANT", tok::kw_conformant},
        {"boolean", tok::kw_boolean},      {"TRUE", tok::kw_true},
        {"FALSE", tok::kw_false},
    };
    return map;
}

bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::vector<token> lex(const std::string& text) {
    std::vector<token> out;
    std::uint32_t line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        source_span span{line, col, i, i + 1};
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string word = text.substr(i, j - i);
            span.end = j;
            auto kw = keywords().find(word);
            out.push_back({kw == keywords().end() ? tok::ident : kw->second,
                           std::move(word), span});
            advance(j - i);
            continue;
        }
        switch (c) {
        case ';': out.push_back({tok::semicolon, ";", span}); advance(1); continue;
        case ':': out.push_back({tok::colon, ":", span}); advance(1); continue;
        case ',': out.push_back({tok::comma, ",", span}); advance(1); continue;
        case '(': out.push_back({tok::lparen, "(", span}); advance(1); continue;
        case ')': out.push_back({tok::rparen, ")", span}); advance(1); continue;
        case '!': out.push_back({tok::bang, "!", span}); advance(1); continue;
        case '&': out.push_back({tok::amp, "&", span}); advance(1); continue;
        case '|': out.push_back({tok::pipe, "|", span}); advance(1); continue;
        case '-':
            if (i + 1 < text.size() && text[i + 1] == '>') {
                span.end = i + 2;
                out.push_back({tok::arrow, "->", span});
                advance(2);
                continue;
            }
            throw parse_error("stray '-'", span);
        case '<':
            if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
                span.end = i + 3;
                out.push_back({tok::darrow, "<->", span});
                advance(3);
                continue;
            }
            throw parse_error("stray '<'", span);
        default:
            throw parse_error(std::string("unexpected character '") + c + "'", span);
        }
    }
    out.push_back({tok::end, "", {line, col, i, i}});
    return out;
}

// --- parser --------------------------------------------------------------------

class parser {
public:
    explicit parser(const std::string& text) : tokens_(lex(text)) {}

    domain_ast run() {
        domain_ast ast;
        expect(tok::kw_domain, "expected DOMAIN");
        ast.name = expect(tok::ident, "expected domain name").text;
        while (!at(tok::end)) decl(ast);
        if (!ast.initially)
            throw parse_error("missing INITIALLY clause", peek().span);
        if (!ast.goal)
            throw parse_error("missing CONFORMANT clause", peek().span);
        return ast;
    }

private:
    const token& peek() const { return tokens_[pos_]; }
    bool at(tok k) const { return peek().kind == k; }

    token expect(tok k, const char* msg) {
        if (!at(k)) throw parse_error(std::string(msg) + ", got '" + peek().text + "'",
                                      peek().span);
        return tokens_[pos_++];
    }

    bool accept(tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }

    void decl(domain_ast& ast) {
        const token& t = peek();
        switch (t.kind) {
        case tok::kw_actions: {
            ++pos_;
            ident_list(ast.actions, declared_actions_, "action");
            expect(tok::semicolon, "expected ';'");
            return;
        }
        case tok::kw_fluents: {
            ++pos_;
            ident_list(ast.fluents, declared_fluents_, "fluent");
            expect(tok::colon, "expected ':'");
            expect(tok::kw_boolean, "expected 'boolean'");
            expect(tok::semicolon, "expected ';'");
            return;
        }
        case tok::kw_inertial: {
            ++pos_;
            ident_list(ast.inertial, declared_inertial_, "inertial fluent");
            expect(tok::semicolon, "expected ';'");
            return;
        }
        case tok::kw_always: {
            ++pos_;
            ast.always.push_back(parse_formula());
            expect(tok::semicolon, "expected ';'");
            return;
        }
        case tok::kw_initially: {
            source_span span = t.span;
            ++pos_;
            if (ast.initially)
                throw parse_error("duplicate INITIALLY clause", span);
            ast.initially = parse_formula();
            expect(tok::semicolon, "expected ';'");
            return;
        }
        case tok::kw_conformant: {
            source_span span = t.span;
            ++pos_;
            if (ast.goal) throw parse_error("duplicate CONFORMANT clause", span);
            ast.goal = parse_formula();
            expect(tok::semicolon, "expected ';'");
            return;
        }
        case tok::ident:
            rule(ast);
            return;
        default:
            throw parse_error("expected a declaration, got '" + t.text + "'", t.span);
        }
    }

    void ident_list(std::vector<std::string>& out,
                    std::unordered_set<std::string>& seen, const char* what) {
        for (;;) {
            token id = expect(tok::ident, "expected identifier");
            if (!seen.insert(id.text).second)
                throw parse_error(std::string("duplicate ") + what + " '" + id.text + "'",
                                  id.span);
            out.push_back(id.text);
            if (!accept(tok::comma)) return;
        }
    }

    void rule(domain_ast& ast) {
        token action = expect(tok::ident, "expected action name");
        if (accept(tok::kw_has)) {
            expect(tok::kw_preconditions, "expected PRECONDITIONS");
            formula f = parse_formula();
            expect(tok::semicolon, "expected ';'");
            ast.preconditions.push_back({action.text, std::move(f), action.span});
            return;
        }
        if (accept(tok::kw_causes)) {
            bool positive = !accept(tok::bang);
            token fl = expect(tok::ident, "expected fluent literal");
            formula cond;
            if (accept(tok::kw_if)) cond = parse_formula();
            expect(tok::semicolon, "expected ';'");
            ast.causes.push_back(
                {action.text, positive, fl.text, std::move(cond), action.span});
            return;
        }
        if (accept(tok::kw_possibly)) {
            expect(tok::kw_changes, "expected CHANGES");
            token fl = expect(tok::ident, "expected fluent name");
            expect(tok::semicolon, "expected ';'");
            ast.possibly_changes.push_back({action.text, fl.text, action.span});
            return;
        }
        throw parse_error("expected HAS, CAUSES or POSSIBLY after '" + action.text + "'",
                          peek().span);
    }

    // precedence climbing: <-> is lowest, then ->, |, &, !
    formula parse_formula() { return parse_iff(); }

    formula parse_iff() {
        formula lhs = parse_implies();
        while (accept(tok::darrow)) lhs = f_iff(std::move(lhs), parse_implies());
        return lhs;
    }

    formula parse_implies() {
        formula lhs = parse_or();
        if (accept(tok::arrow)) return f_implies(std::move(lhs), parse_implies());
        return lhs;
    }

    formula parse_or() {
        formula lhs = parse_and();
        while (accept(tok::pipe)) lhs = f_or(std::move(lhs), parse_and());
        return lhs;
    }

    formula parse_and() {
        formula lhs = parse_unary();
        while (accept(tok::amp)) lhs = f_and(std::move(lhs), parse_unary());
        return lhs;
    }

    formula parse_unary() {
        if (accept(tok::bang)) return f_not(parse_unary());
        if (at(tok::lparen)) {
            ++pos_;
            formula f = parse_formula();
            expect(tok::rparen, "expected ')'");
            return f;
        }
        if (at(tok::kw_true)) {
            ++pos_;
            return f_const(true);
        }
        if (at(tok::kw_false)) {
            ++pos_;
            return f_const(false);
        }
        token id = expect(tok::ident, "expected a fluent, TRUE, FALSE, '!' or '('");
        return f_atom(id.text, id.span);
    }

    std::vector<token> tokens_;
    std::size_t pos_ = 0;
    std::unordered_set<std::string> declared_actions_;
    std::unordered_set<std::string> declared_fluents_;
    std::unordered_set<std::string> declared_inertial_;
};

} // namespace

domain_ast parse(const std::string& text) { return parser(text).run(); }

// --- pretty printer ---------------------------------------------------------------

namespace {

void print_list(std::ostringstream& os, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ", ";
        os << names[i];
    }
}

} // namespace

std::string pretty_print(const domain_ast& ast) {
    std::ostringstream os;
    os << "DOMAIN " << ast.name << "\n\n";
    if (!ast.actions.empty()) {
        os << "ACTIONS ";
        print_list(os, ast.actions);
        os << ";\n";
    }
    if (!ast.fluents.empty()) {
        os << "FLUENTS ";
        print_list(os, ast.fluents);
        os << " : boolean;\n";
    }
    if (!ast.inertial.empty()) {
        os << "INERTIAL ";
        print_list(os, ast.inertial);
        os << ";\n";
    }
    for (const auto& f : ast.always) os << "ALWAYS " << to_string(f) << ";\n";
    os << "\n";
    for (const auto& p : ast.preconditions)
        os << p.action << " HAS PRECONDITIONS " << to_string(p.condition) << ";\n";
    for (const auto& c : ast.causes) {
        os << c.action << " CAUSES " << (c.positive ? "" : "!") << c.fluent;
        if (c.condition) os << " IF " << to_string(c.condition);
        os << ";\n";
    }
    for (const auto& p : ast.possibly_changes)
        os << p.action << " POSSIBLY CHANGES " << p.fluent << ";\n";
    os << "\nINITIALLY " << to_string(ast.initially) << ";\n";
    os << "CONFORMANT " << to_string(ast.goal) << ";\n";
    return os.str();
}

bool structurally_equal(const domain_ast& a, const domain_ast& b) {
    if (a.name != b.name || a.actions != b.actions || a.fluents != b.fluents ||
        a.inertial != b.inertial)
        return false;
    if (a.always.size() != b.always.size()) return false;
    for (std::size_t i = 0; i < a.always.size(); ++i)
        if (!equal(a.always[i], b.always[i])) return false;
    if (a.preconditions.size() != b.preconditions.size()) return false;
    for (std::size_t i = 0; i < a.preconditions.size(); ++i) {
        if (a.preconditions[i].action != b.preconditions[i].action ||
            !equal(a.preconditions[i].condition, b.preconditions[i].condition))
            return false;
    }
    if (a.causes.size() != b.causes.size()) return false;
    for (std::size_t i = 0; i < a.causes.size(); ++i) {
        const auto& x = a.causes[i];
        const auto& y = b.causes[i];
        if (x.action != y.action || x.positive != y.positive || x.fluent != y.fluent)
            return false;
        if ((x.condition == nullptr) != (y.condition == nullptr)) return false;
        if (x.condition && !equal(x.condition, y.condition)) return false;
    }
    if (a.possibly_changes.size() != b.possibly_changes.size()) return false;
    for (std::size_t i = 0; i < a.possibly_changes.size(); ++i) {
        if (a.possibly_changes[i].action != b.possibly_changes[i].action ||
            a.possibly_changes[i].fluent != b.possibly_changes[i].fluent)
            return false;
    }
    return equal(a.initially, b.initially) && equal(a.goal, b.goal);
}

// --- validation -----------------------------------------------------------------

namespace {

formula resolve(const formula& f,
                const std::unordered_map<std::string, int>& fluents) {
    if (!f) return f;
    switch (f->kind) {
    case formula_node::op::constant:
        return f;
    case formula_node::op::atom: {
        auto it = fluents.find(f->name);
        if (it == fluents.end())
            throw validation_error("undeclared fluent '" + f->name + "'", f->span);
        formula_node n = *f;
        n.fluent = it->second;
        return std::make_shared<const formula_node>(std::move(n));
    }
    case formula_node::op::negation: {
        formula_node n = *f;
        n.lhs = resolve(f->lhs, fluents);
        return std::make_shared<const formula_node>(std::move(n));
    }
    default: {
        formula_node n = *f;
        n.lhs = resolve(f->lhs, fluents);
        n.rhs = resolve(f->rhs, fluents);
        return std::make_shared<const formula_node>(std::move(n));
    }
    }
}

dd::bdd formula_bdd(dd::node_store& store, const formula& f,
                    std::span<const dd::var_id> vars) {
    if (!f) return store.constant(true);
    switch (f->kind) {
    case formula_node::op::constant:
        return store.constant(f->value);
    case formula_node::op::atom:
        assert(f->fluent >= 0);
        return store.mk_var(vars[static_cast<std::size_t>(f->fluent)]);
    case formula_node::op::negation:
        return !formula_bdd(store, f->lhs, vars);
    case formula_node::op::conjunction:
        return formula_bdd(store, f->lhs, vars) & formula_bdd(store, f->rhs, vars);
    case formula_node::op::disjunction:
        return formula_bdd(store, f->lhs, vars) | formula_bdd(store, f->rhs, vars);
    case formula_node::op::implication:
        return formula_bdd(store, f->lhs, vars).implies(formula_bdd(store, f->rhs, vars));
    case formula_node::op::biconditional:
        return formula_bdd(store, f->lhs, vars).iff(formula_bdd(store, f->rhs, vars));
    }
    throw internal_error("formula_bdd: bad node kind");
}

} // namespace

int domain::fluent_index(const std::string& n) const {
    for (std::size_t i = 0; i < fluents.size(); ++i)
        if (fluents[i] == n) return static_cast<int>(i);
    return -1;
}

int domain::action_index(const std::string& n) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == n) return static_cast<int>(i);
    return -1;
}

domain validate(const domain_ast& ast) {
    if (ast.actions.empty()) throw validation_error("no actions declared");
    if (ast.fluents.empty()) throw validation_error("no fluents declared");

    std::unordered_map<std::string, int> fluent_idx;
    for (std::size_t i = 0; i < ast.fluents.size(); ++i)
        fluent_idx.emplace(ast.fluents[i], static_cast<int>(i));
    std::unordered_map<std::string, int> action_idx;
    for (std::size_t i = 0; i < ast.actions.size(); ++i) {
        if (fluent_idx.count(ast.actions[i]))
            throw validation_error("'" + ast.actions[i] +
                                   "' is declared both as action and fluent");
        action_idx.emplace(ast.actions[i], static_cast<int>(i));
    }

    domain d;
    d.name = ast.name;
    d.fluents = ast.fluents;
    d.ast = ast;
    d.inertial.assign(ast.fluents.size(), false);
    for (const auto& n : ast.inertial) {
        auto it = fluent_idx.find(n);
        if (it == fluent_idx.end())
            throw validation_error("INERTIAL lists undeclared fluent '" + n + "'");
        d.inertial[static_cast<std::size_t>(it->second)] = true;
    }

    d.actions.resize(ast.actions.size());
    for (std::size_t i = 0; i < ast.actions.size(); ++i)
        d.actions[i].name = ast.actions[i];

    for (const auto& f : ast.always) d.always.push_back(resolve(f, fluent_idx));

    for (const auto& p : ast.preconditions) {
        auto it = action_idx.find(p.action);
        if (it == action_idx.end())
            throw validation_error("undeclared action '" + p.action + "'", p.span);
        auto& act = d.actions[static_cast<std::size_t>(it->second)];
        formula resolved = resolve(p.condition, fluent_idx);
        act.precondition = act.precondition
                               ? f_and(act.precondition, std::move(resolved))
                               : std::move(resolved);
    }
    for (const auto& c : ast.causes) {
        auto it = action_idx.find(c.action);
        if (it == action_idx.end())
            throw validation_error("undeclared action '" + c.action + "'", c.span);
        auto fit = fluent_idx.find(c.fluent);
        if (fit == fluent_idx.end())
            throw validation_error("undeclared fluent '" + c.fluent + "'", c.span);
        d.actions[static_cast<std::size_t>(it->second)].causes.push_back(
            {c.positive, fit->second, resolve(c.condition, fluent_idx)});
    }
    for (const auto& p : ast.possibly_changes) {
        auto it = action_idx.find(p.action);
        if (it == action_idx.end())
            throw validation_error("undeclared action '" + p.action + "'", p.span);
        auto fit = fluent_idx.find(p.fluent);
        if (fit == fluent_idx.end())
            throw validation_error("undeclared fluent '" + p.fluent + "'", p.span);
        auto& list = d.actions[static_cast<std::size_t>(it->second)].possibly_changes;
        if (std::find(list.begin(), list.end(), fit->second) == list.end())
            list.push_back(fit->second);
    }

    d.initially = resolve(ast.initially, fluent_idx);
    d.goal = resolve(ast.goal, fluent_idx);

    // satisfiability checks, done symbolically on a scratch store
    dd::node_store scratch(dd::store_options{.unique_table_bits = 12});
    std::vector<dd::var_id> vars;
    for (const auto& n : d.fluents) vars.push_back(scratch.new_var(n));
    dd::bdd states = scratch.constant(true);
    for (const auto& f : d.always) states = states & formula_bdd(scratch, f, vars);
    if (states.is_false())
        throw validation_error("ALWAYS constraints are unsatisfiable");
    if ((formula_bdd(scratch, d.initially, vars) & states).is_false())
        throw validation_error("INITIALLY is unsatisfiable within the legal states");
    if ((formula_bdd(scratch, d.goal, vars) & states).is_false())
        throw validation_error("CONFORMANT goal is unsatisfiable within the legal states");

    for (const auto& act : d.actions) {
        for (std::size_t f = 0; f < d.fluents.size(); ++f) {
            dd::bdd pos = scratch.constant(false);
            dd::bdd neg = scratch.constant(false);
            for (const auto& c : act.causes) {
                if (c.fluent != static_cast<int>(f)) continue;
                dd::bdd cond = formula_bdd(scratch, c.condition, vars);
                if (c.positive)
                    pos = pos | cond;
                else
                    neg = neg | cond;
            }
            if (!(pos & neg & states).is_false())
                throw validation_error("action '" + act.name +
                                       "' has conflicting effects on '" +
                                       d.fluents[f] + "'");
        }
    }
    return d;
}

domain load(const std::string& text) { return validate(parse(text)); }

// --- explicit semantics -------------------------------------------------------------

bool eval(const formula& f, state s) {
    if (!f) return true;
    switch (f->kind) {
    case formula_node::op::constant:
        return f->value;
    case formula_node::op::atom:
        if (f->fluent < 0) throw usage_error("eval: unresolved formula");
        return (s >> f->fluent) & 1;
    case formula_node::op::negation:
        return !eval(f->lhs, s);
    case formula_node::op::conjunction:
        return eval(f->lhs, s) && eval(f->rhs, s);
    case formula_node::op::disjunction:
        return eval(f->lhs, s) || eval(f->rhs, s);
    case formula_node::op::implication:
        return !eval(f->lhs, s) || eval(f->rhs, s);
    case formula_node::op::biconditional:
        return eval(f->lhs, s) == eval(f->rhs, s);
    }
    throw internal_error("eval: bad node kind");
}

bool legal(const domain& d, state s) {
    for (const auto& f : d.always)
        if (!eval(f, s)) return false;
    return true;
}

std::vector<state> enumerate_states(const domain& d, std::size_t max_fluents) {
    if (d.fluents.size() > max_fluents)
        throw resource_error("enumerate_states: too many fluents (" +
                             std::to_string(d.fluents.size()) + " > " +
                             std::to_string(max_fluents) + ")");
    std::vector<state> out;
    const state limit = state{1} << d.fluents.size();
    for (state s = 0; s < limit; ++s)
        if (legal(d, s)) out.push_back(s);
    return out;
}

std::vector<state> explicit_step(const domain& d, state s, std::size_t action) {
    if (action >= d.actions.size()) throw usage_error("explicit_step: unknown action");
    if (!legal(d, s)) throw usage_error("explicit_step: state violates ALWAYS");
    const auto& act = d.actions[action];
    if (act.precondition && !eval(act.precondition, s)) return {};

    state forced_true = 0, forced_false = 0;
    for (const auto& c : act.causes) {
        if (c.condition && !eval(c.condition, s)) continue;
        if (c.positive)
            forced_true |= state{1} << c.fluent;
        else
            forced_false |= state{1} << c.fluent;
    }
    if (forced_true & forced_false) return {}; // rejected by validate() already

    state forced = forced_true | forced_false;
    state pc = 0;
    for (int f : act.possibly_changes) pc |= state{1} << f;

    std::vector<int> free_bits;
    state base = forced_true;
    for (std::size_t f = 0; f < d.fluents.size(); ++f) {
        state bit = state{1} << f;
        if (forced & bit) continue;
        if (d.inertial[f] && !(pc & bit)) {
            base |= s & bit;
        } else {
            free_bits.push_back(static_cast<int>(f));
        }
    }
    if (free_bits.size() > 26)
        throw resource_error("explicit_step: too many unconstrained fluents");

    std::vector<state> out;
    const std::size_t combos = std::size_t{1} << free_bits.size();
    for (std::size_t m = 0; m < combos; ++m) {
        state t = base;
        for (std::size_t k = 0; k < free_bits.size(); ++k)
            if ((m >> k) & 1) t |= state{1} << free_bits[k];
        if (legal(d, t)) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cmbp::lang
