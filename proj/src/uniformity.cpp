#include "fopkit/uniformity.hpp"

#include <algorithm>
#include <map>

#include "fopkit/error.hpp"
#include "fopkit/io.hpp"
#include "fopkit/parallel.hpp"

namespace fopkit {

Formula GroundItem::formula(const Vocabulary& vocabulary) const {
    if (kind == Kind::Binding)
        return fo::eq(Term::constant(vocabulary.constants().at(symbol)), Term::number(value));
    std::vector<Term> args;
    for (Element e : tuple) args.push_back(Term::number(e));
    Formula atom = fo::atom(vocabulary.relations().at(symbol).name, std::move(args));
    return positive ? atom : fo::neg(atom);
}

Formula conjunction_formula(const Vocabulary& vocabulary, const GroundConjunction& c) {
    std::vector<Formula> parts;
    for (const auto& item : c) parts.push_back(item.formula(vocabulary));
    return fo::conj_flat(std::move(parts));
}

GroundConjunction ground_conjunction(const Vocabulary& vocabulary, const Formula& f, std::size_t m) {
    GroundConjunction out;
    auto ground = [&](const Term& t) -> std::optional<Element> {
        if (t.kind == Term::Kind::Number) {
            if (t.value >= m) throw Error(ErrorKind::OutOfUniverse, "numeral outside the universe");
            return t.value;
        }
        if (t.kind == Term::Kind::Max) return static_cast<Element>(m - 1);
        return std::nullopt;
    };
    auto bad = [] { return Error(ErrorKind::NotLiteral, "expected a conjunction of ground literals and c = b"); };
    std::vector<Formula> stack{f};
    std::vector<Formula> parts;
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (g.kind() == NodeKind::And) {
            for (auto it = g.children().rbegin(); it != g.children().rend(); ++it) stack.push_back(*it);
        } else if (g.kind() != NodeKind::True) {
            parts.push_back(g);
        }
    }
    for (const auto& g : parts) {
        bool positive = g.kind() != NodeKind::Not;
        const Formula& a = positive ? g : g.body();
        if (!a.is_atom()) throw bad();
        if (a.predicate() == Predicate::Relation) {
            auto r = vocabulary.relation_index(a.symbol());
            if (!r) throw Error(ErrorKind::VocabularyMismatch, "relation " + a.symbol() + " is not in the vocabulary");
            GroundItem item;
            item.symbol = *r;
            item.positive = positive;
            for (const auto& t : a.args()) {
                auto v = ground(t);
                if (!v) throw bad();
                item.tuple.push_back(*v);
            }
            out.push_back(item);
        } else if (a.predicate() == Predicate::Equal && positive) {
            const Term& x = a.args()[0];
            const Term& y = a.args()[1];
            const Term& c = x.kind == Term::Kind::Constant ? x : y;
            const Term& v = x.kind == Term::Kind::Constant ? y : x;
            auto value = ground(v);
            auto slot = c.kind == Term::Kind::Constant ? vocabulary.constant_index(c.name) : std::nullopt;
            if (!slot || !value) throw bad();
            GroundItem item;
            item.kind = GroundItem::Kind::Binding;
            item.symbol = *slot;
            item.value = *value;
            out.push_back(item);
        } else {
            throw bad();
        }
    }
    return out;
}

std::vector<GroundItem> ground_items(const Vocabulary& vocabulary, std::size_t m) {
    std::vector<GroundItem> out;
    for (std::size_t r = 0; r < vocabulary.relations().size(); ++r) {
        std::size_t arity = vocabulary.relations()[r].arity;
        std::uint64_t cells = power(m, arity);
        for (std::uint64_t i = 0; i < cells; ++i) {
            Tuple t = tuple_at(i, arity, m);
            for (bool positive : {true, false}) {
                GroundItem item;
                item.symbol = r;
                item.tuple = t;
                item.positive = positive;
                out.push_back(item);
            }
        }
    }
    for (std::size_t c = 0; c < vocabulary.constants().size(); ++c)
        for (Element b = 0; b < m; ++b) {
            GroundItem item;
            item.kind = GroundItem::Kind::Binding;
            item.symbol = c;
            item.value = b;
            out.push_back(item);
        }
    return out;
}

namespace {

bool clash(const GroundItem& a, const GroundItem& b) {
    if (a.kind != b.kind || a.symbol != b.symbol) return false;
    if (a.kind == GroundItem::Kind::Binding) return true;  // distinct items bind the same constant twice
    return a.tuple == b.tuple && a.positive != b.positive;
}

// Calls fn(indices) for every clash-free combination of `size` items, in
// lexicographic order.
template <typename Fn>
void for_each_combination(const std::vector<GroundItem>& items, std::size_t size, Fn fn) {
    std::vector<std::uint32_t> idx;
    std::function<void(std::uint32_t)> go = [&](std::uint32_t start) {
        if (idx.size() == size) {
            fn(idx);
            return;
        }
        for (std::uint32_t i = start; i + (size - idx.size()) <= items.size(); ++i) {
            bool ok = true;
            for (std::uint32_t j : idx)
                if (clash(items[j], items[i])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            idx.push_back(i);
            go(i + 1);
            idx.pop_back();
        }
    };
    go(0);
}

}  // namespace

std::vector<GroundConjunction> enumerate_conjunctions(const Vocabulary& vocabulary, std::size_t m, std::size_t k) {
    auto items = ground_items(vocabulary, m);
    std::vector<GroundConjunction> out;
    for (std::size_t size = 0; size <= k && size <= items.size(); ++size)
        for_each_combination(items, size, [&](const std::vector<std::uint32_t>& idx) {
            GroundConjunction c;
            for (auto i : idx) c.push_back(items[i]);
            out.push_back(std::move(c));
        });
    return out;
}

Structure least_model(const Vocabulary& vocabulary, std::size_t m, const GroundConjunction& c) {
    Structure a(vocabulary, m);
    for (const auto& item : c) {
        if (item.kind == GroundItem::Kind::Binding)
            a.set_constant(item.symbol, item.value);
        else if (item.positive)
            a.set(item.symbol, item.tuple);
    }
    return a;
}

std::vector<Element> constrained_elements(const GroundConjunction& c) {
    std::vector<Element> out;
    for (const auto& item : c) {
        if (item.kind == GroundItem::Kind::Binding)
            out.push_back(item.value);
        else
            out.insert(out.end(), item.tuple.begin(), item.tuple.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::vector<Element> fresh_elements(const Structure& a, const std::vector<Element>& constrained,
                                    std::initializer_list<Element> also = {}) {
    std::vector<Element> out;
    for (Element v = 0; v < a.size(); ++v)
        if (!std::binary_search(constrained.begin(), constrained.end(), v) &&
            std::find(also.begin(), also.end(), v) == also.end())
            out.push_back(v);
    return out;
}

bool bound(const WitnessInput& in, const std::string& constant) {
    auto slot = in.base.vocabulary().constant_index(constant);
    for (const auto& item : in.conjunction)
        if (item.kind == GroundItem::Kind::Binding && item.symbol == *slot) return true;
    return false;
}

// Edge pairs the conjunction asserts absent.
std::vector<std::pair<Element, Element>> forbidden_edges(const WitnessInput& in) {
    std::vector<std::pair<Element, Element>> out;
    std::size_t e = in.base.relation("E");
    for (const auto& item : in.conjunction)
        if (item.kind == GroundItem::Kind::Literal && item.symbol == e && !item.positive)
            out.push_back({item.tuple[0], item.tuple[1]});
    return out;
}

WitnessInput from_structure(const Structure& a, const std::vector<Element>& constrained, bool absent_forbidden) {
    WitnessInput in{a, {}, constrained, 0};
    std::sort(in.constrained.begin(), in.constrained.end());
    in.constrained.erase(std::unique(in.constrained.begin(), in.constrained.end()), in.constrained.end());
    if (absent_forbidden) {
        std::size_t e = a.relation("E");
        for (Element x : in.constrained)
            for (Element y : in.constrained)
                if (!a.holds(e, {x, y})) {
                    GroundItem item;
                    item.symbol = e;
                    item.tuple = {x, y};
                    item.positive = false;
                    in.conjunction.push_back(item);
                }
    }
    return in;
}

}  // namespace

Structure witness_reach(const WitnessInput& in) {
    auto fresh = fresh_elements(in.base, in.constrained);
    if (fresh.empty()) throw Error(ErrorKind::NoFreshVertex, "every vertex is mentioned by the conjunction");
    Structure out = in.base;
    std::size_t e = out.relation("E");
    Element s = out.constant("s"), t = out.constant("t"), a = fresh.front();
    out.set(e, {s, a});
    out.set(e, {a, t});
    return out;
}

Structure witness_altreach(const WitnessInput& in) {
    auto fresh = fresh_elements(in.base, in.constrained);
    if (fresh.empty()) throw Error(ErrorKind::NoFreshVertex, "every vertex is mentioned by the conjunction");
    Structure out = in.base;
    std::size_t e = out.relation("E");
    Element s = out.constant("s"), t = out.constant("t"), a = fresh.front();
    out.set(e, {s, a});
    out.set(e, {a, t});
    for (Element x : in.constrained) out.set(e, {x, a});
    // A universal s caught on a cycle of asserted edges never reaches t;
    // an unbound designated vertex can still be moved onto the other one.
    if (!deciders::altreach(out)) {
        if (!bound(in, "t"))
            out.set_constant("t", s);
        else if (!bound(in, "s"))
            out.set_constant("s", t);
    }
    return out;
}

Structure witness_hp(const WitnessInput& in) {
    const std::size_t m = in.base.size();
    if (in.k > 0 && m < 4 * in.k)
        throw Error(ErrorKind::PreconditionViolation,
                    "size " + std::to_string(m) + " is below 4k = " + std::to_string(4 * in.k));
    const Element last = static_cast<Element>(m - 1);
    auto forbidden = forbidden_edges(in);
    auto allowed = [&](Element x, Element y) {
        return std::find(forbidden.begin(), forbidden.end(), std::make_pair(x, y)) == forbidden.end();
    };
    std::vector<Element> v;
    for (Element x : in.constrained)
        if (x != 0 && x != last) v.push_back(x);
    auto w = fresh_elements(in.base, in.constrained, {0, last});

    std::vector<Element> path;
    if (w.size() >= v.size()) {
        // 0 c1 a1 c2 a2 ... cl al w1 ... wq max
        path.push_back(0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            path.push_back(w[i]);
            path.push_back(v[i]);
        }
        for (std::size_t i = v.size(); i < w.size(); ++i) path.push_back(w[i]);
        path.push_back(last);
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (!allowed(path[i], path[i + 1])) {
                path.clear();
                break;
            }
    }
    if (path.empty()) {
        // Too few fresh separators: any Hamiltonian 0..max path avoiding
        // the edges asserted absent.
        std::vector<bool> used(m, false);
        std::function<bool(Element)> go = [&](Element x) {
            if (path.size() == m) return x == last;
            for (Element y = 0; y < m; ++y) {
                if (used[y] || !allowed(x, y) || (y == last && path.size() + 1 != m)) continue;
                used[y] = true;
                path.push_back(y);
                if (go(y)) return true;
                path.pop_back();
                used[y] = false;
            }
            return false;
        };
        used[0] = true;
        path.push_back(0);
        if (!go(0)) throw Error(ErrorKind::NoFreshVertex, "no Hamiltonian path avoids the asserted non-edges");
    }
    Structure out = in.base;
    std::size_t e = out.relation("E");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) out.set(e, {path[i], path[i + 1]});
    return out;
}

Structure witness_comono(const WitnessInput& in) {
    auto fresh = fresh_elements(in.base, in.constrained);
    if (fresh.size() < 6)
        throw Error(ErrorKind::NoFreshVertex, "only " + std::to_string(fresh.size()) + " unmentioned vertices");
    Structure out = in.base;
    std::size_t e = out.relation("E");
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) out.set(e, {fresh[i], fresh[j]});
    return out;
}

Structure witness_reach(const Structure& a, const std::vector<Element>& constrained) {
    return witness_reach(from_structure(a, constrained, false));
}
Structure witness_altreach(const Structure& a, const std::vector<Element>& constrained) {
    return witness_altreach(from_structure(a, constrained, false));
}
Structure witness_hp(const Structure& a, const std::vector<Element>& constrained, std::size_t k) {
    WitnessInput in = from_structure(a, constrained, true);
    in.k = k;
    return witness_hp(in);
}
Structure witness_comono(const Structure& a, const std::vector<Element>& constrained) {
    return witness_comono(from_structure(a, constrained, false));
}

namespace {

using Builder = Structure (*)(const WitnessInput&);

const std::map<std::string, Builder>& builders() {
    static const std::map<std::string, Builder> b = {
        {"reach", &witness_reach},
        {"altreach", &witness_altreach},
        {"hp_0max", &witness_hp},
        {"co_mono_triangle", &witness_comono},
    };
    return b;
}

enum class Outcome : std::uint8_t { Inconsistent, Witnessed, Counterexample, Inconclusive };

struct Status {
    Outcome outcome = Outcome::Inconsistent;
    bool fallback = false;
    std::uint64_t candidates = 0;
    std::string note;
};

}  // namespace

std::vector<std::string> constructive_problems() {
    std::vector<std::string> out;
    for (const auto& [name, b] : builders()) out.push_back(name);
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Uniform: return "uniform";
        case Verdict::CounterexampleFound: return "counterexample";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "";
}

bool UniformityReport::uniform() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const MVerdict& v) { return v.verdict == Verdict::Uniform; });
}

UniformityReport check_uniformity(const UniformityQuery& q) {
    const Problem& p = problem(q.problem);
    if (q.n < 2) throw Error(ErrorKind::PreconditionViolation, "n must be at least 2");
    for (std::size_t m : q.m_values)
        if (m < q.n) throw Error(ErrorKind::PreconditionViolation, "m = " + std::to_string(m) + " is below n");
    Builder builder = nullptr;
    if (q.mode == UniformityMode::Constructive) {
        auto it = builders().find(p.name);
        if (it == builders().end())
            throw Error(ErrorKind::PreconditionViolation, "no witness builder for problem " + p.name);
        builder = it->second;
    }
    const Vocabulary& voc = p.vocabulary;
    StructurePredicate in_s = [&p](const Structure& a) { return p.decide(a); };

    UniformityReport report{q, {}};
    for (std::size_t m : q.m_values) {
        MVerdict verdict;
        verdict.m = m;

        auto examine = [&](const GroundConjunction& c, Status& st) {
            Formula f = conjunction_formula(voc, c);
            CompiledFormula compiled(f, voc);
            Structure base = least_model(voc, m, c);
            if (!compiled.evaluate(base)) return;
            auto search = [&] {
                try {
                    auto r = search_consistent(voc, f, {}, m, in_s, {q.budget, 1});
                    st.candidates = r.candidates;
                    st.outcome = r.witness ? Outcome::Witnessed : Outcome::Counterexample;
                } catch (const BudgetExceeded& e) {
                    st.outcome = Outcome::Inconclusive;
                    st.note = e.what();
                }
            };
            if (!builder) {
                search();
                return;
            }
            WitnessInput in{base, c, constrained_elements(c), q.k};
            std::optional<Structure> built;
            try {
                built = builder(in);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoFreshVertex && e.kind() != ErrorKind::PreconditionViolation) throw;
            }
            if (!built) {
                st.fallback = true;
                search();
                return;
            }
            bool member = p.decide(*built);
            bool satisfies = compiled.evaluate(*built);
            if (!member || !satisfies)
                throw Error(ErrorKind::ContradictoryWitnessBuilder,
                            "builder for " + p.name + " on " + print_formula(f) + " produced " +
                                print_structure(*built) + (member ? "" : " outside the problem") +
                                (satisfies ? "" : " falsifying the conjunction"));
            st.outcome = Outcome::Witnessed;
        };

        auto record = [&](const GroundConjunction& c, const Status& st) {
            ++verdict.conjunctions;
            if (st.outcome == Outcome::Inconsistent) return;
            ++verdict.consistent;
            if (st.fallback) ++verdict.builder_fallbacks;
            switch (st.outcome) {
                case Outcome::Witnessed: ++verdict.witnessed; break;
                case Outcome::Counterexample:
                    ++verdict.counterexamples;
                    if (!verdict.counterexample) {
                        UniformityCounterexample ce{c, conjunction_formula(voc, c), least_model(voc, m, c),
                                                    st.candidates, std::nullopt};
                        if (p.name == "mono_triangle") ce.coloring = coloring_census(ce.consistency_witness);
                        verdict.counterexample = std::move(ce);
                    }
                    break;
                case Outcome::Inconclusive:
                    if (verdict.note.empty()) verdict.note = st.note;
                    break;
                default: break;
            }
        };

        if (q.probe) {
            std::vector<GroundConjunction> list;
            for (const auto& f : *q.probe) list.push_back(ground_conjunction(voc, f, m));
            std::vector<Status> status(list.size());
            for_each_index(list.size(), q.workers, [&](std::uint64_t i) { examine(list[i], status[i]); }, 1);
            for (std::size_t i = 0; i < list.size(); ++i) record(list[i], status[i]);
        } else {
            auto items = ground_items(voc, m);
            for (std::size_t size = 0; size <= q.k && size <= items.size(); ++size) {
                std::vector<std::uint32_t> flat;
                for_each_combination(items, size, [&](const std::vector<std::uint32_t>& idx) {
                    flat.insert(flat.end(), idx.begin(), idx.end());
                });
                std::uint64_t count = size == 0 ? 1 : flat.size() / size;
                auto conj = [&](std::uint64_t i) {
                    GroundConjunction c;
                    for (std::size_t j = 0; j < size; ++j) c.push_back(items[flat[i * size + j]]);
                    return c;
                };
                std::vector<Status> status(count);
                for_each_index(count, q.workers, [&](std::uint64_t i) { examine(conj(i), status[i]); });
                for (std::uint64_t i = 0; i < count; ++i) record(conj(i), status[i]);
            }
        }
        if (verdict.counterexample)
            verdict.verdict = Verdict::CounterexampleFound;
        else if (!verdict.note.empty())
            verdict.verdict = Verdict::Inconclusive;
        report.verdicts.push_back(std::move(verdict));
    }
    return report;
}

}  // namespace fopkit
