#include "fopkit/normal_form.hpp"

#include <algorithm>
#include <set>

#include "fopkit/classify.hpp"
#include "fopkit/error.hpp"

namespace fopkit {

namespace {

Formula nnf(const Formula& f, bool negate) {
    switch (f.kind()) {
        case NodeKind::True: return negate ? fo::bottom() : f;
        case NodeKind::False: return negate ? fo::top() : f;
        case NodeKind::Atom: return negate ? fo::neg(f) : f;
        case NodeKind::Not: return nnf(f.child(0), !negate);
        case NodeKind::And:
        case NodeKind::Or: {
            std::vector<Formula> kids;
            for (const auto& c : f.children()) kids.push_back(nnf(c, negate));
            bool conjunctive = (f.kind() == NodeKind::And) != negate;
            return conjunctive ? fo::conj(std::move(kids)) : fo::disj(std::move(kids));
        }
        case NodeKind::Implies: {
            // a -> b  ==  !a | b
            Formula as_or = fo::disj({fo::neg(f.child(0)), f.child(1)});
            return nnf(as_or, negate);
        }
        case NodeKind::Iff: {
            // a <-> b  ==  (!a | b) & (a | !b)
            const Formula& a = f.child(0);
            const Formula& b = f.child(1);
            Formula as_and = fo::conj({fo::disj({fo::neg(a), b}), fo::disj({a, fo::neg(b)})});
            return nnf(as_and, negate);
        }
        case NodeKind::Forall:
        case NodeKind::Exists: {
            bool universal = (f.kind() == NodeKind::Forall) != negate;
            Formula body = nnf(f.body(), negate);
            return universal ? fo::forall(f.variables(), body) : fo::exists(f.variables(), body);
        }
        case NodeKind::ForallSO:
        case NodeKind::ExistsSO: {
            bool universal = (f.kind() == NodeKind::ForallSO) != negate;
            Formula body = nnf(f.body(), negate);
            return universal ? fo::forall_so(f.symbol(), f.so_arity(), body)
                             : fo::exists_so(f.symbol(), f.so_arity(), body);
        }
    }
    return f;
}

using Groups = std::vector<std::vector<Formula>>;

void add_unique(std::vector<Formula>& group, const Formula& lit) {
    if (std::find(group.begin(), group.end(), lit) == group.end()) group.push_back(lit);
}

bool complementary(const std::vector<Formula>& group) {
    for (const auto& l : group)
        if (std::find(group.begin(), group.end(), complement(l)) != group.end()) return true;
    return false;
}

Groups normalize(Groups groups) {
    Groups out;
    for (auto& g : groups) {
        if (complementary(g)) continue;
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
    }
    return out;
}

/// Groups of literals. `outer_and` selects CNF (true) or DNF (false).
/// The empty result is the unit of the outer operator; a group that is empty
/// is the unit of the inner operator (false in CNF, true in DNF).
Groups distribute(const Formula& f, bool outer_and) {
    NodeKind outer = outer_and ? NodeKind::And : NodeKind::Or;
    NodeKind inner = outer_and ? NodeKind::Or : NodeKind::And;
    switch (f.kind()) {
        case NodeKind::True: return outer_and ? Groups{} : Groups{{}};
        case NodeKind::False: return outer_and ? Groups{{}} : Groups{};
        case NodeKind::Atom:
        case NodeKind::Not: return {{f}};
        default: break;
    }
    if (f.kind() == outer) {
        Groups out;
        for (const auto& c : f.children()) {
            for (auto& g : distribute(c, outer_and))
                if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
        }
        return normalize(std::move(out));
    }
    if (f.kind() == inner) {
        Groups acc{{}};  // unit of the inner product
        for (const auto& c : f.children()) {
            Groups part = distribute(c, outer_and);
            Groups next;
            for (const auto& a : acc) {
                for (const auto& b : part) {
                    std::vector<Formula> merged = a;
                    for (const auto& l : b) add_unique(merged, l);
                    next.push_back(std::move(merged));
                }
            }
            acc = normalize(std::move(next));
        }
        return acc;
    }
    throw Error(ErrorKind::UnsupportedFormula, "normal form requires a quantifier-free formula");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula complement(const Formula& literal) {
    if (literal.kind() == NodeKind::Not) return literal.child(0);
    return fo::neg(literal);
}

std::vector<Clause> to_cnf(const Formula& qf) {
    if (!is_quantifier_free(qf))
        throw Error(ErrorKind::UnsupportedFormula, "to_cnf requires a quantifier-free formula");
    return distribute(to_nnf(qf), true);
}

std::vector<Implicant> to_dnf(const Formula& qf) {
    if (!is_quantifier_free(qf))
        throw Error(ErrorKind::UnsupportedFormula, "to_dnf requires a quantifier-free formula");
    return distribute(to_nnf(qf), false);
}

Formula cnf_formula(const std::vector<Clause>& clauses) {
    std::vector<Formula> parts;
    for (const auto& c : clauses) parts.push_back(fo::disj_flat(c));
    return fo::conj_flat(std::move(parts));
}

Formula dnf_formula(const std::vector<Implicant>& implicants) {
    std::vector<Formula> parts;
    for (const auto& i : implicants) parts.push_back(fo::conj_flat(i));
    return fo::disj_flat(std::move(parts));
}

Formula PrenexUniversal::sentence() const {
    return variables.empty() ? matrix : fo::forall(variables, matrix);
}

namespace {

struct Prenexer {
    std::set<std::string> used;
    std::vector<std::string> prefix;

    std::string fresh(const std::string& base) {
        for (std::size_t i = 0;; ++i) {
            std::string candidate = base + "_" + std::to_string(i);
            if (!used.count(candidate)) {
                used.insert(candidate);
                return candidate;
            }
        }
    }

    Formula pull(const Formula& f) {
        switch (f.kind()) {
            case NodeKind::True:
            case NodeKind::False:
            case NodeKind::Atom:
            case NodeKind::Not: return f;
            case NodeKind::And:
            case NodeKind::Or: {
                std::vector<Formula> kids;
                for (const auto& c : f.children()) kids.push_back(pull(c));
                return f.kind() == NodeKind::And ? fo::conj(std::move(kids))
                                                 : fo::disj(std::move(kids));
            }
            case NodeKind::Forall: {
                std::map<std::string, Term> rename;
                for (const auto& v : f.variables()) {
                    bool clash = std::find(prefix.begin(), prefix.end(), v) != prefix.end();
                    std::string name = clash ? fresh(v) : v;
                    if (clash) rename[v] = Term::variable(name);
                    prefix.push_back(name);
                }
                return pull(substitute(f.body(), rename));
            }
            case NodeKind::Exists: {
                auto body_free = free_variables(f.body());
                for (const auto& v : f.variables()) {
                    if (std::find(body_free.begin(), body_free.end(), v) != body_free.end())
                        throw Error(ErrorKind::NotUniversal,
                                    "existential quantifier over '" + v + "' is essential");
                }
                return pull(f.body());
            }
            default:
                throw Error(ErrorKind::NotUniversal, "second-order quantifier in universal sentence");
        }
    }
};

}  // namespace

PrenexUniversal to_prenex_universal(const Formula& f) {
    Prenexer p;
    for (const auto& v : all_variables(f)) p.used.insert(v);
    // Free variables stay free; a bound variable sharing their name is renamed.
    for (const auto& v : free_variables(f)) p.prefix.push_back(v);
    std::size_t free_count = p.prefix.size();
    Formula matrix = p.pull(to_nnf(f));

    PrenexUniversal out;
    out.variables.assign(p.prefix.begin() + static_cast<std::ptrdiff_t>(free_count), p.prefix.end());
    out.clauses = to_cnf(matrix);
    out.matrix = cnf_formula(out.clauses);
    for (const auto& c : out.clauses) {
        std::size_t relational = static_cast<std::size_t>(
            std::count_if(c.begin(), c.end(), [](const Formula& l) { return is_relational_literal(l); }));
        out.r = std::max(out.r, relational);
    }
    return out;
}

}  // namespace fopkit
