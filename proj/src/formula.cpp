#include "fopkit/formula.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fopkit {

struct Formula::Node {
    NodeKind kind = NodeKind::True;
    Predicate predicate = Predicate::Relation;
    std::string symbol;
    std::vector<Term> args;
    std::vector<Formula> children;
    std::vector<std::string> variables;
    std::size_t so_arity = 0;
};

Formula make_formula(Formula::Node node) {
    return Formula(std::make_shared<const Formula::Node>(std::move(node)));
}

namespace {

const Formula::Node& true_node() {
    static const Formula::Node node{};
    return node;
}

}  // namespace

Formula::Formula() : node_(std::shared_ptr<const Node>(&true_node(), [](const Node*) {})) {}

NodeKind Formula::kind() const noexcept { return node_->kind; }
Predicate Formula::predicate() const noexcept { return node_->predicate; }
const std::string& Formula::symbol() const noexcept { return node_->symbol; }
const std::vector<Term>& Formula::args() const noexcept { return node_->args; }
const std::vector<Formula>& Formula::children() const noexcept { return node_->children; }
const std::vector<std::string>& Formula::variables() const noexcept { return node_->variables; }
std::size_t Formula::so_arity() const noexcept { return node_->so_arity; }

bool Formula::is_quantifier() const noexcept {
    auto k = kind();
    return k == NodeKind::Forall || k == NodeKind::Exists || is_so_quantifier();
}

bool Formula::is_so_quantifier() const noexcept {
    return kind() == NodeKind::ForallSO || kind() == NodeKind::ExistsSO;
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    return a.kind == b.kind && a.predicate == b.predicate && a.symbol == b.symbol &&
           a.args == b.args && a.variables == b.variables && a.so_arity == b.so_arity &&
           a.children == b.children;
}

const char* predicate_name(Predicate p) {
    switch (p) {
        case Predicate::Equal: return "=";
        case Predicate::LessEqual: return "<=";
        case Predicate::Bit: return "bit";
        case Predicate::Successor: return "suc";
        case Predicate::Relation: break;
    }
    return "";
}

namespace fo {

Formula top() { return Formula(); }

Formula bottom() {
    Formula::Node n;
    n.kind = NodeKind::False;
    return make_formula(std::move(n));
}

Formula atom(std::string relation, std::vector<Term> args) {
    Formula::Node n;
    n.kind = NodeKind::Atom;
    n.predicate = Predicate::Relation;
    n.symbol = std::move(relation);
    n.args = std::move(args);
    return make_formula(std::move(n));
}

Formula numeric_atom(Predicate p, Term a, Term b) {
    if (p == Predicate::Relation) throw std::invalid_argument("numeric_atom: relation predicate");
    Formula::Node n;
    n.kind = NodeKind::Atom;
    n.predicate = p;
    n.symbol = predicate_name(p);
    n.args = {std::move(a), std::move(b)};
    return make_formula(std::move(n));
}

Formula eq(Term a, Term b) { return numeric_atom(Predicate::Equal, std::move(a), std::move(b)); }
Formula le(Term a, Term b) { return numeric_atom(Predicate::LessEqual, std::move(a), std::move(b)); }
Formula bit(Term a, Term b) { return numeric_atom(Predicate::Bit, std::move(a), std::move(b)); }
Formula suc(Term a, Term b) { return numeric_atom(Predicate::Successor, std::move(a), std::move(b)); }

namespace {

Formula node_with_children(NodeKind kind, std::vector<Formula> children) {
    Formula::Node n;
    n.kind = kind;
    n.children = std::move(children);
    return make_formula(std::move(n));
}

Formula quantifier(NodeKind kind, std::vector<std::string> vars, Formula body) {
    if (vars.empty()) throw std::invalid_argument("quantifier without variables");
    Formula::Node n;
    n.kind = kind;
    n.variables = std::move(vars);
    n.children = {std::move(body)};
    return make_formula(std::move(n));
}

Formula so_quantifier(NodeKind kind, std::string relation, std::size_t arity, Formula body) {
    if (arity == 0) throw std::invalid_argument("second-order quantifier of arity 0");
    Formula::Node n;
    n.kind = kind;
    n.symbol = std::move(relation);
    n.so_arity = arity;
    n.children = {std::move(body)};
    return make_formula(std::move(n));
}

}  // namespace

Formula neg(Formula f) { return node_with_children(NodeKind::Not, {std::move(f)}); }
Formula conj(std::vector<Formula> parts) { return node_with_children(NodeKind::And, std::move(parts)); }
Formula disj(std::vector<Formula> parts) { return node_with_children(NodeKind::Or, std::move(parts)); }
Formula implies(Formula a, Formula b) {
    return node_with_children(NodeKind::Implies, {std::move(a), std::move(b)});
}
Formula iff(Formula a, Formula b) {
    return node_with_children(NodeKind::Iff, {std::move(a), std::move(b)});
}
Formula forall(std::vector<std::string> vars, Formula body) {
    return quantifier(NodeKind::Forall, std::move(vars), std::move(body));
}
Formula exists(std::vector<std::string> vars, Formula body) {
    return quantifier(NodeKind::Exists, std::move(vars), std::move(body));
}
Formula forall_so(std::string relation, std::size_t arity, Formula body) {
    return so_quantifier(NodeKind::ForallSO, std::move(relation), arity, std::move(body));
}
Formula exists_so(std::string relation, std::size_t arity, Formula body) {
    return so_quantifier(NodeKind::ExistsSO, std::move(relation), arity, std::move(body));
}

Formula conj_flat(std::vector<Formula> parts) {
    if (parts.empty()) return top();
    if (parts.size() == 1) return std::move(parts.front());
    return conj(std::move(parts));
}

Formula disj_flat(std::vector<Formula> parts) {
    if (parts.empty()) return bottom();
    if (parts.size() == 1) return std::move(parts.front());
    return disj(std::move(parts));
}

}  // namespace fo

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
    switch (f.kind()) {
        case NodeKind::Atom:
            for (const auto& t : f.args()) {
                if (!t.is_variable()) continue;
                if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
                if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
            }
            return;
        case NodeKind::Forall:
        case NodeKind::Exists: {
            auto mark = bound.size();
            bound.insert(bound.end(), f.variables().begin(), f.variables().end());
            collect_free(f.body(), bound, out);
            bound.resize(mark);
            return;
        }
        default:
            for (const auto& c : f.children()) collect_free(c, bound, out);
    }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
    if (f.is_atom()) {
        for (const auto& t : f.args())
            if (t.is_variable()) out.insert(t.name);
        return;
    }
    for (const auto& v : f.variables()) out.insert(v);
    for (const auto& c : f.children()) collect_all(c, out);
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
    std::vector<std::string> bound;
    std::vector<std::string> out;
    collect_free(f, bound, out);
    return out;
}

std::vector<std::string> all_variables(const Formula& f) {
    std::set<std::string> names;
    collect_all(f, names);
    return {names.begin(), names.end()};
}

bool is_quantifier_free(const Formula& f) {
    if (f.is_quantifier()) return false;
    return std::all_of(f.children().begin(), f.children().end(), is_quantifier_free);
}

bool is_first_order(const Formula& f) {
    if (f.is_so_quantifier()) return false;
    return std::all_of(f.children().begin(), f.children().end(), is_first_order);
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

bool mentions_no_relation(const Formula& f) {
    if (f.is_atom()) return is_numeric(f.predicate());
    return std::all_of(f.children().begin(), f.children().end(), mentions_no_relation);
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
    for (std::size_t i = 0;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!used.count(candidate)) return candidate;
    }
}

Formula substitute_impl(const Formula& f, const std::map<std::string, Term>& repl) {
    if (repl.empty()) return f;
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::False: return f;
        case NodeKind::Atom: {
            std::vector<Term> args = f.args();
            bool changed = false;
            for (auto& t : args) {
                if (!t.is_variable()) continue;
                if (auto it = repl.find(t.name); it != repl.end()) {
                    t = it->second;
                    changed = true;
                }
            }
            if (!changed) return f;
            if (f.predicate() == Predicate::Relation) return fo::atom(f.symbol(), std::move(args));
            return fo::numeric_atom(f.predicate(), std::move(args[0]), std::move(args[1]));
        }
        case NodeKind::Forall:
        case NodeKind::Exists: {
            std::map<std::string, Term> inner = repl;
            for (const auto& v : f.variables()) inner.erase(v);
            auto body_free = free_variables(f.body());
            std::set<std::string> incoming;  // variable names introduced by the replacement
            for (const auto& [name, term] : inner) {
                if (std::find(body_free.begin(), body_free.end(), name) == body_free.end()) continue;
                if (term.is_variable()) incoming.insert(term.name);
            }
            std::vector<std::string> vars = f.variables();
            std::set<std::string> used;
            collect_all(f, used);
            for (const auto& [name, term] : inner)
                if (term.is_variable()) used.insert(term.name);
            for (auto& v : vars) {
                if (!incoming.count(v)) continue;
                std::string fresh = fresh_name(v, used);
                used.insert(fresh);
                inner[v] = Term::variable(fresh);
                v = fresh;
            }
            Formula body = substitute_impl(f.body(), inner);
            return f.kind() == NodeKind::Forall ? fo::forall(std::move(vars), std::move(body))
                                                : fo::exists(std::move(vars), std::move(body));
        }
        case NodeKind::ForallSO:
        case NodeKind::ExistsSO: {
            Formula body = substitute_impl(f.body(), repl);
            return f.kind() == NodeKind::ForallSO ? fo::forall_so(f.symbol(), f.so_arity(), body)
                                                  : fo::exists_so(f.symbol(), f.so_arity(), body);
        }
        default: {
            std::vector<Formula> kids;
            kids.reserve(f.children().size());
            for (const auto& c : f.children()) kids.push_back(substitute_impl(c, repl));
            switch (f.kind()) {
                case NodeKind::Not: return fo::neg(kids[0]);
                case NodeKind::And: return fo::conj(std::move(kids));
                case NodeKind::Or: return fo::disj(std::move(kids));
                case NodeKind::Implies: return fo::implies(kids[0], kids[1]);
                case NodeKind::Iff: return fo::iff(kids[0], kids[1]);
                default: return f;
            }
        }
    }
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement) {
    return substitute_impl(f, replacement);
}

}  // namespace fopkit
