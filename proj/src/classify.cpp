#include "fopkit/classify.hpp"

#include <algorithm>

namespace fopkit {

namespace {

void flatten(const Formula& f, NodeKind op, std::vector<Formula>& out) {
    if (f.kind() == op) {
        for (const auto& c : f.children()) flatten(c, op, out);
    } else if ((op == NodeKind::And && f.kind() == NodeKind::True) ||
               (op == NodeKind::Or && f.kind() == NodeKind::False)) {
        // unit of the operator
    } else {
        out.push_back(f);
    }
}

bool literal_is_numeric(const Formula& lit) {
    const Formula& a = lit.kind() == NodeKind::Not ? lit.child(0) : lit;
    return is_numeric(a.predicate());
}

/// Widths of a normal form whose outer operator is `outer` and inner `inner`.
/// Returns (max literals, max relational literals) or nullopt.
std::optional<std::pair<std::size_t, std::size_t>> normal_form_width(const Formula& f,
                                                                     NodeKind outer,
                                                                     NodeKind inner) {
    std::vector<Formula> groups;
    flatten(f, outer, groups);
    std::size_t width = 0;
    std::size_t relational = 0;
    for (const auto& g : groups) {
        std::vector<Formula> lits;
        flatten(g, inner, lits);
        std::size_t rel = 0;
        for (const auto& l : lits) {
            if (!is_literal(l)) return std::nullopt;
            if (!literal_is_numeric(l)) ++rel;
        }
        width = std::max(width, lits.size());
        relational = std::max(relational, rel);
    }
    return std::make_pair(width, relational);
}

bool flat_literals(const Formula& f, NodeKind op) {
    std::vector<Formula> lits;
    flatten(f, op, lits);
    return std::all_of(lits.begin(), lits.end(), is_literal);
}

}  // namespace

bool is_literal(const Formula& f) {
    if (f.is_atom()) return true;
    return f.kind() == NodeKind::Not && f.child(0).is_atom();
}

bool is_relational_literal(const Formula& f) { return is_literal(f) && !literal_is_numeric(f); }

std::vector<Formula> ProjectiveForm::guards() const {
    std::vector<Formula> out;
    if (numeric_part) out.push_back(*numeric_part);
    for (const auto& g : guarded) out.push_back(g.guard);
    return out;
}

std::optional<ProjectiveForm> projective_form(const Formula& f) {
    if (!is_first_order(f)) return std::nullopt;
    std::vector<Formula> disjuncts;
    flatten(f, NodeKind::Or, disjuncts);
    ProjectiveForm form;
    std::vector<Formula> numeric;
    for (const auto& d : disjuncts) {
        if (mentions_no_relation(d)) {
            numeric.push_back(d);
            continue;
        }
        if (is_relational_literal(d)) {
            form.guarded.push_back({fo::top(), d});
            continue;
        }
        std::vector<Formula> parts;
        flatten(d, NodeKind::And, parts);
        std::optional<Formula> lambda;
        std::vector<Formula> guard;
        for (const auto& p : parts) {
            if (mentions_no_relation(p)) {
                guard.push_back(p);
            } else if (is_relational_literal(p) && !lambda) {
                lambda = p;
            } else {
                return std::nullopt;
            }
        }
        if (!lambda) return std::nullopt;
        form.guarded.push_back({fo::conj_flat(std::move(guard)), *lambda});
    }
    if (!numeric.empty()) form.numeric_part = fo::disj_flat(std::move(numeric));
    return form;
}

Classification classify(const Formula& f) {
    Classification c;
    if (is_literal(f)) {
        const Formula& a = f.kind() == NodeKind::Not ? f.child(0) : f;
        c.literal = Classification::LiteralInfo{f.kind() != NodeKind::Not, is_numeric(a.predicate())};
    }
    c.clause = flat_literals(f, NodeKind::Or) && f.kind() != NodeKind::True &&
               (f.kind() != NodeKind::And || is_literal(f));
    c.implicant = flat_literals(f, NodeKind::And) && f.kind() != NodeKind::False &&
                  (f.kind() != NodeKind::Or || is_literal(f));
    if (auto w = normal_form_width(f, NodeKind::And, NodeKind::Or)) {
        c.cnf_width = w->first;
        c.cnf_relational_width = w->second;
    }
    if (auto w = normal_form_width(f, NodeKind::Or, NodeKind::And)) {
        c.dnf_width = w->first;
        c.dnf_relational_width = w->second;
    }
    c.numeric = mentions_no_relation(f);
    c.projective = projective_form(f).has_value();

    const Formula* g = &f;
    while (g->kind() == NodeKind::Forall) g = &g->body();
    c.universal_fo = is_quantifier_free(*g);

    g = &f;
    while (g->kind() == NodeKind::ExistsSO) g = &g->body();
    c.sigma_one_one = is_first_order(*g);
    return c;
}

bool Classification::contains(const SyntacticClass& k) const {
    switch (k.kind) {
        case ClassKind::Literal:
            return literal && literal->positive == k.positive && literal->numeric == k.numeric;
        case ClassKind::Clause: return clause;
        case ClassKind::Implicant: return implicant;
        case ClassKind::CNF: return cnf_width && *cnf_width <= k.k;
        case ClassKind::cnf: return cnf_relational_width && *cnf_relational_width <= k.k;
        case ClassKind::DNF: return dnf_width && *dnf_width <= k.k;
        case ClassKind::dnf: return dnf_relational_width && *dnf_relational_width <= k.k;
        case ClassKind::Numeric: return numeric;
        case ClassKind::Projective: return projective;
        case ClassKind::UniversalFO: return universal_fo;
        case ClassKind::SigmaOneOne: return sigma_one_one;
    }
    return false;
}

std::vector<SyntacticClass> Classification::classes() const {
    std::vector<SyntacticClass> out;
    if (literal) out.push_back(SyntacticClass::literal(literal->positive, literal->numeric));
    if (clause) out.push_back(SyntacticClass::of(ClassKind::Clause));
    if (implicant) out.push_back(SyntacticClass::of(ClassKind::Implicant));
    if (cnf_width) out.push_back(SyntacticClass::of(ClassKind::CNF, *cnf_width));
    if (cnf_relational_width) out.push_back(SyntacticClass::of(ClassKind::cnf, *cnf_relational_width));
    if (dnf_width) out.push_back(SyntacticClass::of(ClassKind::DNF, *dnf_width));
    if (dnf_relational_width) out.push_back(SyntacticClass::of(ClassKind::dnf, *dnf_relational_width));
    if (numeric) out.push_back(SyntacticClass::of(ClassKind::Numeric));
    if (projective) out.push_back(SyntacticClass::of(ClassKind::Projective));
    if (universal_fo) out.push_back(SyntacticClass::of(ClassKind::UniversalFO));
    if (sigma_one_one) out.push_back(SyntacticClass::of(ClassKind::SigmaOneOne));
    return out;
}

std::string to_string(const SyntacticClass& c) {
    switch (c.kind) {
        case ClassKind::Literal:
            return std::string("Literal(") + (c.positive ? "positive" : "negative") + ", " +
                   (c.numeric ? "numeric" : "non-numeric") + ")";
        case ClassKind::Clause: return "Clause";
        case ClassKind::Implicant: return "Implicant";
        case ClassKind::CNF: return "CNF(" + std::to_string(c.k) + ")";
        case ClassKind::cnf: return "cnf(" + std::to_string(c.k) + ")";
        case ClassKind::DNF: return "DNF(" + std::to_string(c.k) + ")";
        case ClassKind::dnf: return "dnf(" + std::to_string(c.k) + ")";
        case ClassKind::Numeric: return "Numeric";
        case ClassKind::Projective: return "Projective";
        case ClassKind::UniversalFO: return "UniversalFO";
        case ClassKind::SigmaOneOne: return "SigmaOneOne";
    }
    return "?";
}

}  // namespace fopkit
