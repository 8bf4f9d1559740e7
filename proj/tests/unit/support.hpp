#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fopkit/eval.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"

namespace testing {

using namespace fopkit;

inline std::string source_path(const std::string& relative) { return std::string(FOPKIT_SOURCE_DIR) + "/" + relative; }

using RelationValues = std::map<std::string, std::set<Tuple>>;

inline Element term_value(const Structure& a, const Term& t, const Assignment& asg) {
    switch (t.kind) {
        case Term::Kind::Variable: return asg.at(t.name);
        case Term::Kind::Constant: return a.constant(t.name);
        case Term::Kind::Number: return t.value;
        case Term::Kind::Max: return static_cast<Element>(a.size() - 1);
    }
    return 0;
}

/// Direct recursive reading of the semantics, with second-order variables
/// ranging over explicit tuple sets. Only for tiny universes.
inline bool reference_eval(const Structure& a, const Formula& f, Assignment asg = {}, RelationValues so = {}) {
    const std::size_t n = a.size();
    switch (f.kind()) {
        case NodeKind::True: return true;
        case NodeKind::False: return false;
        case NodeKind::Atom: {
            Tuple args;
            for (const auto& t : f.args()) args.push_back(term_value(a, t, asg));
            switch (f.predicate()) {
                case Predicate::Equal: return args[0] == args[1];
                case Predicate::LessEqual: return args[0] <= args[1];
                case Predicate::Bit: return (args[0] >> args[1]) % 2 == 1;
                case Predicate::Successor: return args[1] == args[0] + 1;
                case Predicate::Relation: {
                    auto it = so.find(f.symbol());
                    if (it != so.end()) return it->second.count(args) != 0;
                    return a.holds(a.relation(f.symbol()), args);
                }
            }
            return false;
        }
        case NodeKind::Not: return !reference_eval(a, f.body(), asg, so);
        case NodeKind::And:
            for (const auto& c : f.children())
                if (!reference_eval(a, c, asg, so)) return false;
            return true;
        case NodeKind::Or:
            for (const auto& c : f.children())
                if (reference_eval(a, c, asg, so)) return true;
            return false;
        case NodeKind::Implies: return !reference_eval(a, f.child(0), asg, so) || reference_eval(a, f.child(1), asg, so);
        case NodeKind::Iff: return reference_eval(a, f.child(0), asg, so) == reference_eval(a, f.child(1), asg, so);
        case NodeKind::Forall:
        case NodeKind::Exists: {
            const bool universal = f.kind() == NodeKind::Forall;
            const auto& vars = f.variables();
            std::uint64_t count = power(n, vars.size());
            for (std::uint64_t i = 0; i < count; ++i) {
                Tuple values = tuple_at(i, vars.size(), n);
                Assignment inner = asg;
                for (std::size_t v = 0; v < vars.size(); ++v) inner[vars[v]] = values[v];
                bool r = reference_eval(a, f.body(), inner, so);
                if (universal && !r) return false;
                if (!universal && r) return true;
            }
            return universal;
        }
        case NodeKind::ForallSO:
        case NodeKind::ExistsSO: {
            const bool universal = f.kind() == NodeKind::ForallSO;
            const std::size_t arity = f.so_arity();
            const std::uint64_t cells = power(n, arity);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
                std::set<Tuple> value;
                for (std::uint64_t c = 0; c < cells; ++c)
                    if ((mask >> c) & 1u) value.insert(tuple_at(c, arity, n));
                RelationValues inner = so;
                inner[f.symbol()] = value;
                bool r = reference_eval(a, f.body(), asg, inner);
                if (universal && !r) return false;
                if (!universal && r) return true;
            }
            return universal;
        }
    }
    return false;
}

inline Structure random_structure(std::mt19937_64& rng, const Vocabulary& voc, std::size_t n, double density = 0.5) {
    Structure a(voc, n);
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<Element> element(0, static_cast<Element>(n - 1));
    for (std::size_t r = 0; r < voc.relations().size(); ++r)
        for (std::uint64_t c = 0; c < a.cells(r); ++c)
            if (coin(rng)) a.set_at(r, c);
    for (std::size_t c = 0; c < voc.constants().size(); ++c) a.set_constant(c, element(rng));
    return a;
}

struct FormulaGenerator {
    std::mt19937_64& rng;
    Vocabulary voc;
    std::vector<std::string> variables;
    bool quantifiers = true;
    bool numeric = true;

    Term term() {
        std::uniform_int_distribution<int> pick(0, 5);
        int c = pick(rng);
        if (c <= 2 && !variables.empty())
            return fo::var(variables[std::uniform_int_distribution<std::size_t>(0, variables.size() - 1)(rng)]);
        if (c == 3 && !voc.constants().empty())
            return Term::constant(voc.constants()[std::uniform_int_distribution<std::size_t>(0, voc.constants().size() - 1)(rng)]);
        if (c == 4) return Term::max();
        return fo::num(std::uniform_int_distribution<Element>(0, 1)(rng));
    }

    Formula atom() {
        std::uniform_int_distribution<int> pick(0, 9);
        int c = pick(rng);
        if (numeric && c >= 7) {
            Predicate p = std::array{Predicate::Equal, Predicate::LessEqual, Predicate::Bit, Predicate::Successor}
                [std::uniform_int_distribution<int>(0, 3)(rng)];
            return fo::numeric_atom(p, term(), term());
        }
        const auto& rels = voc.relations();
        const auto& r = rels[std::uniform_int_distribution<std::size_t>(0, rels.size() - 1)(rng)];
        std::vector<Term> args;
        for (std::size_t i = 0; i < r.arity; ++i) args.push_back(term());
        return fo::atom(r.name, args);
    }

    Formula formula(int depth) {
        if (depth <= 0) return atom();
        std::uniform_int_distribution<int> pick(0, quantifiers ? 9 : 7);
        switch (pick(rng)) {
            case 0:
            case 1: return atom();
            case 2: return fo::neg(formula(depth - 1));
            case 3: return fo::conj({formula(depth - 1), formula(depth - 1)});
            case 4: return fo::disj({formula(depth - 1), formula(depth - 1), formula(depth - 1)});
            case 5: return fo::implies(formula(depth - 1), formula(depth - 1));
            case 6: return fo::iff(formula(depth - 1), formula(depth - 1));
            case 7: return std::uniform_int_distribution<int>(0, 1)(rng) ? fo::top() : fo::bottom();
            default: {
                std::string v = "q" + std::to_string(variables.size());
                variables.push_back(v);
                Formula body = formula(depth - 1);
                variables.pop_back();
                return std::uniform_int_distribution<int>(0, 1)(rng) ? fo::forall({v}, body) : fo::exists({v}, body);
            }
        }
    }
};

/// Every assignment of `vars` over [n].
inline std::vector<Assignment> all_assignments(const std::vector<std::string>& vars, std::size_t n) {
    std::vector<Assignment> out;
    std::uint64_t count = power(n, vars.size());
    for (std::uint64_t i = 0; i < count; ++i) {
        Tuple t = tuple_at(i, vars.size(), n);
        Assignment asg;
        for (std::size_t v = 0; v < vars.size(); ++v) asg[vars[v]] = t[v];
        out.push_back(asg);
    }
    return out;
}

}  // namespace testing
