#include "fopkit/fop.hpp"

#include <algorithm>
#include <functional>

#include "fopkit/error.hpp"
#include "fopkit/eval.hpp"
#include "fopkit/normal_form.hpp"
#include "fopkit/parallel.hpp"

namespace fopkit {

std::string FoQuery::variable(std::size_t i) { return "x" + std::to_string(i + 1); }

std::vector<std::string> FoQuery::relation_variables(std::size_t relation) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity * target.relations().at(relation).arity; ++i) out.push_back(variable(i));
    return out;
}

std::vector<std::string> FoQuery::constant_variables() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity; ++i) out.push_back(variable(i));
    return out;
}

Structure apply(const FoQuery& q, const Structure& a) {
    if (!(a.vocabulary() == q.source))
        throw Error(ErrorKind::VocabularyMismatch, "fop " + q.name + " expects vocabulary " + q.source.name());
    const std::size_t n = a.size();
    const std::uint64_t universe = power(n, q.arity);
    Structure out(q.target, universe);
    for (std::size_t r = 0; r < q.relation_formulas.size(); ++r) {
        auto vars = q.relation_variables(r);
        CompiledFormula phi(q.relation_formulas[r], q.source, vars);
        const std::uint64_t cells = out.cells(r);
        // Element tuples of the image flatten to one tuple over [n].
        for (std::uint64_t i = 0; i < cells; ++i) {
            Tuple args = tuple_at(i, vars.size(), n);
            if (phi.evaluate(a, args)) out.set_at(r, i);
        }
    }
    for (std::size_t c = 0; c < q.constant_formulas.size(); ++c) {
        CompiledFormula psi(q.constant_formulas[c], q.source, q.constant_variables());
        std::uint64_t hits = 0, value = 0;
        for (std::uint64_t e = 0; e < universe; ++e) {
            if (psi.evaluate(a, tuple_at(e, q.arity, n))) {
                ++hits;
                value = e;
            }
        }
        if (hits != 1)
            throw Error(ErrorKind::ConstantNotUnique, "constant " + q.target.constants()[c] + " of fop " + q.name +
                                                          " is satisfied by " + std::to_string(hits) + " tuples");
        out.set_constant(c, static_cast<Element>(value));
    }
    return out;
}

namespace {

void check_formula(const FoQuery& q, const std::string& symbol, const Formula& f,
                   const std::vector<std::string>& vars, std::size_t bound, FopValidation& report) {
    for (const auto& v : free_variables(f)) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
            report.violations.push_back({FopViolation::Kind::FreeVariable, symbol, 0, {}, {}, 0, 0,
                                         "variable " + v + " is not among x1..x" + std::to_string(vars.size())});
            return;
        }
    }
    auto form = projective_form(f);
    if (!form) {
        report.violations.push_back(
            {FopViolation::Kind::NotProjective, symbol, 0, {}, {}, 0, 0, "formula for " + symbol + " is not projective"});
        return;
    }
    auto guards = form->guards();
    if (guards.size() < 2) return;
    std::vector<CompiledFormula> compiled;
    for (const auto& g : guards) compiled.emplace_back(g, q.source, vars);
    const std::size_t consts = q.source.constants().size();
    for (std::size_t n = 2; n <= bound; ++n) {
        Structure s(q.source, n);
        const std::uint64_t const_count = power(n, consts);
        const std::uint64_t var_count = power(n, vars.size());
        for (std::uint64_t ci = 0; ci < const_count; ++ci) {
            Tuple cv = tuple_at(ci, consts, n);
            for (std::size_t j = 0; j < consts; ++j) s.set_constant(j, cv[j]);
            for (std::uint64_t vi = 0; vi < var_count; ++vi) {
                Tuple vv = tuple_at(vi, vars.size(), n);
                std::optional<std::size_t> first;
                for (std::size_t g = 0; g < compiled.size(); ++g) {
                    if (!compiled[g].evaluate(s, vv)) continue;
                    if (!first) {
                        first = g;
                        continue;
                    }
                    report.violations.push_back({FopViolation::Kind::Overlap, symbol, n, vv, cv, *first, g,
                                                 "guards " + std::to_string(*first) + " and " + std::to_string(g) +
                                                     " of " + symbol + " overlap"});
                    return;
                }
            }
        }
    }
}

}  // namespace

FopValidation validate_fop(const FoQuery& q, std::size_t bound) {
    FopValidation report;
    report.bound = bound;
    for (std::size_t r = 0; r < q.relation_formulas.size(); ++r)
        check_formula(q, q.target.relations()[r].name, q.relation_formulas[r], q.relation_variables(r), bound,
                      report);
    for (std::size_t c = 0; c < q.constant_formulas.size(); ++c)
        check_formula(q, q.target.constants()[c], q.constant_formulas[c], q.constant_variables(), bound, report);
    return report;
}

Fop::Fop(FoQuery q, std::size_t bound) : query_(std::move(q)) {
    if (query_.relation_formulas.size() != query_.target.relations().size() ||
        query_.constant_formulas.size() != query_.target.constants().size())
        throw Error(ErrorKind::NotProjective, "fop " + query_.name + " does not define every target symbol");
    FopValidation report = validate_fop(query_, bound);
    if (!report.valid()) throw Error(ErrorKind::NotProjective, report.violations.front().message);
    for (const auto& f : query_.relation_formulas) relation_forms_.push_back(*projective_form(f));
    for (const auto& f : query_.constant_formulas) constant_forms_.push_back(*projective_form(f));
}

Formula PullbackCase::formula() const {
    if (!literal) return guard;
    if (guard.kind() == NodeKind::True) return *literal;
    return fo::conj({guard, *literal});
}

std::vector<std::string> expand_variable(const std::string& u, std::size_t k) {
    if (k == 1) return {u};
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back(u + "_" + std::to_string(i));
    return out;
}

Pullback pullback(const Fop& rho, const Formula& eta) {
    const FoQuery& q = rho.query();
    bool positive = true;
    Formula atom = eta;
    if (atom.kind() == NodeKind::Not) {
        positive = false;
        atom = atom.body();
    }
    auto not_literal = [&]() -> Error {
        return Error(ErrorKind::NotLiteral, "pullback needs a relational literal or c = u over " + q.target.name());
    };
    if (!atom.is_atom()) throw not_literal();

    const ProjectiveForm* form = nullptr;
    std::vector<std::string> eta_vars;
    if (atom.predicate() == Predicate::Relation) {
        auto r = q.target.relation_index(atom.symbol());
        if (!r || atom.args().size() != q.target.relations()[*r].arity) throw not_literal();
        for (const auto& t : atom.args()) {
            if (!t.is_variable()) throw not_literal();
            eta_vars.push_back(t.name);
        }
        form = &rho.relation_form(*r);
    } else if (atom.predicate() == Predicate::Equal) {
        const Term& a = atom.args()[0];
        const Term& b = atom.args()[1];
        const Term* c = a.kind == Term::Kind::Constant ? &a : b.kind == Term::Kind::Constant ? &b : nullptr;
        const Term* u = c == &a ? &b : &a;
        if (!c || !u->is_variable()) throw not_literal();
        auto slot = q.target.constant_index(c->name);
        if (!slot) throw not_literal();
        eta_vars.push_back(u->name);
        form = &rho.constant_form(*slot);
    } else {
        throw not_literal();
    }

    std::map<std::string, Term> repl;
    Pullback out;
    for (std::size_t i = 0; i < eta_vars.size(); ++i) {
        auto expanded = expand_variable(eta_vars[i], q.arity);
        for (std::size_t j = 0; j < q.arity; ++j) repl.emplace(FoQuery::variable(i * q.arity + j), fo::var(expanded[j]));
        for (const auto& v : expanded)
            if (std::find(out.variables.begin(), out.variables.end(), v) == out.variables.end())
                out.variables.push_back(v);
    }
    auto sub = [&](const Formula& f) { return substitute(f, repl); };

    if (positive) {
        if (form->numeric_part) out.cases.push_back({sub(*form->numeric_part), std::nullopt});
        for (const auto& g : form->guarded) out.cases.push_back({sub(g.guard), sub(g.literal)});
    } else {
        std::vector<Formula> none;
        for (const auto& g : form->guards()) none.push_back(fo::neg(sub(g)));
        out.cases.push_back({fo::conj_flat(std::move(none)), std::nullopt});
        for (const auto& g : form->guarded) out.cases.push_back({sub(g.guard), complement(sub(g.literal))});
    }
    std::vector<Formula> parts;
    for (const auto& c : out.cases) parts.push_back(c.formula());
    out.mu = fo::disj_flat(std::move(parts));
    return out;
}

std::vector<Formula> target_literal_forms(const Vocabulary& vocabulary) {
    std::vector<Formula> out;
    auto both = [&](Formula f) {
        out.push_back(f);
        out.push_back(fo::neg(std::move(f)));
    };
    for (const auto& r : vocabulary.relations()) {
        // restricted growth strings: position i uses one of u1..u(max+1)
        std::vector<std::size_t> pattern(r.arity, 0);
        std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
            if (i == r.arity) {
                std::vector<Term> args;
                for (std::size_t v : pattern) args.push_back(fo::var("u" + std::to_string(v + 1)));
                both(fo::atom(r.name, std::move(args)));
                return;
            }
            for (std::size_t v = 0; v <= used && v < r.arity; ++v) {
                pattern[i] = v;
                go(i + 1, std::max(used, v + 1));
            }
        };
        go(0, 0);
    }
    for (const auto& c : vocabulary.constants()) both(fo::eq(Term::constant(c), fo::var("u1")));
    return out;
}

PullbackCheck check_pullback(const Fop& rho, std::size_t size_bound, std::uint64_t budget, unsigned workers) {
    const FoQuery& q = rho.query();
    PullbackCheck report;
    report.literals = target_literal_forms(q.target);
    BigCount total = 0;
    for (std::size_t n = 2; n <= size_bound; ++n) total += count_structures(q.source, n);
    if (total > budget) throw BudgetExceeded("pullback check", total.str(), std::to_string(budget));

    struct Compiled {
        std::vector<std::string> eta_vars;
        CompiledFormula eta;
        CompiledFormula mu;
    };
    std::vector<Compiled> compiled;
    for (const auto& lit : report.literals) {
        auto vars = free_variables(lit);
        std::vector<std::string> eta_vars(vars.begin(), vars.end());
        std::sort(eta_vars.begin(), eta_vars.end());
        std::vector<std::string> mu_vars;
        for (const auto& u : eta_vars)
            for (const auto& v : expand_variable(u, q.arity)) mu_vars.push_back(v);
        compiled.push_back({eta_vars, CompiledFormula(lit, q.target, eta_vars),
                            CompiledFormula(pullback(rho, lit).mu, q.source, mu_vars)});
    }

    // Number of assignments checked against one source structure.
    auto triples = [&](std::size_t n) {
        std::uint64_t sum = 0;
        for (const auto& c : compiled) sum += power(power(n, q.arity), c.eta_vars.size());
        return sum;
    };
    auto first_bad = [&](const Structure& b) -> std::optional<PullbackMismatch> {
        Structure image = apply(q, b);
        const std::size_t n = b.size();
        for (std::size_t l = 0; l < compiled.size(); ++l) {
            const auto& c = compiled[l];
            std::uint64_t assignments = power(image.size(), c.eta_vars.size());
            Tuple mu_args;
            for (std::uint64_t i = 0; i < assignments; ++i) {
                Tuple args = tuple_at(i, c.eta_vars.size(), image.size());
                mu_args.clear();
                for (Element e : args)
                    for (Element d : tuple_at(e, q.arity, n)) mu_args.push_back(d);
                bool left = c.eta.evaluate(image, args);
                bool right = c.mu.evaluate(b, mu_args);
                if (left == right) continue;
                Assignment asg;
                for (std::size_t v = 0; v < args.size(); ++v) asg[c.eta_vars[v]] = args[v];
                return PullbackMismatch{report.literals[l], b, asg, left, right};
            }
        }
        return std::nullopt;
    };
    for (std::size_t n = 2; n <= size_bound; ++n) {
        StructureSpace space(q.source, n);
        std::uint64_t count = static_cast<std::uint64_t>(space.count());
        auto bad = first_index(count, workers, [&](std::uint64_t i) { return first_bad(space.at(i)).has_value(); }, 64);
        std::uint64_t visited = bad ? *bad + 1 : count;
        report.structures += visited;
        report.checked += visited * triples(n);
        if (bad) {
            report.mismatch = first_bad(space.at(*bad));
            return report;
        }
    }
    return report;
}

namespace fops {

FoQuery identity(const Vocabulary& vocabulary) {
    FoQuery q;
    q.name = "identity";
    q.source = q.target = vocabulary;
    q.arity = 1;
    for (const auto& r : vocabulary.relations()) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < r.arity; ++i) args.push_back(fo::var(FoQuery::variable(i)));
        q.relation_formulas.push_back(fo::atom(r.name, args));
    }
    for (const auto& c : vocabulary.constants())
        q.constant_formulas.push_back(fo::eq(fo::var(FoQuery::variable(0)), Term::constant(c)));
    return q;
}

FoQuery swap_one_max() {
    FoQuery q;
    q.name = "swap";
    q.source = q.target = vocabularies::graph();
    q.arity = 1;
    struct Case {
        Formula guard;
        Term image;
    };
    auto cases = [](const std::string& x) {
        Term v = fo::var(x);
        Formula is_one = fo::eq(v, fo::num(1));
        Formula is_max = fo::eq(v, Term::max());
        return std::vector<Case>{
            {is_one, Term::max()},
            {fo::conj({is_max, fo::neg(is_one)}), fo::num(1)},
            {fo::conj({fo::neg(is_one), fo::neg(is_max)}), v},
        };
    };
    std::vector<Formula> disjuncts;
    for (const auto& a : cases("x1"))
        for (const auto& b : cases("x2"))
            disjuncts.push_back(fo::conj({a.guard, b.guard, fo::atom("E", {a.image, b.image})}));
    q.relation_formulas.push_back(fo::disj(std::move(disjuncts)));
    return q;
}

}  // namespace fops

}  // namespace fopkit
