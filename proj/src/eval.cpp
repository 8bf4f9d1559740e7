#include "fopkit/eval.hpp"

#include <algorithm>

#include "fopkit/error.hpp"
#include "fopkit/parallel.hpp"

namespace fopkit {

RelationTable::RelationTable(std::size_t arity_, std::uint64_t cells)
    : arity(arity_), bits((cells + 63) / 64, 0), known((cells + 63) / 64, 0) {}

void RelationTable::assign(std::uint64_t cell, bool value) {
    std::uint64_t mask = std::uint64_t{1} << (cell & 63);
    known[cell >> 6] |= mask;
    if (value)
        bits[cell >> 6] |= mask;
    else
        bits[cell >> 6] &= ~mask;
}

void RelationTable::forget(std::uint64_t cell) {
    std::uint64_t mask = std::uint64_t{1} << (cell & 63);
    known[cell >> 6] &= ~mask;
    bits[cell >> 6] &= ~mask;
}

void RelationTable::forget_all() {
    std::fill(bits.begin(), bits.end(), 0);
    std::fill(known.begin(), known.end(), 0);
}

struct CompiledFormula::Context {
    const Structure* a;
    std::size_t n;
    std::vector<Element> slots;
    std::span<const RelationTable> tables;
};

CompiledFormula::CompiledFormula(const Formula& f, const Vocabulary& vocabulary,
                                 std::vector<std::string> parameters,
                                 std::vector<RelationParameter> relations)
    : vocabulary_(vocabulary), parameters_(std::move(parameters)), relations_(std::move(relations)) {
    Scope scope;
    for (const auto& p : parameters_) scope.emplace_back(p, slot_count_++);
    root_ = compile(f, scope);
}

std::uint32_t CompiledFormula::compile(const Formula& f, Scope& scope) {
    CNode node{f.kind(), f.predicate(), false, 0, 0, 0, 0, 0};
    switch (f.kind()) {
        case NodeKind::True:
        case NodeKind::False:
            break;
        case NodeKind::Atom: {
            if (f.predicate() == Predicate::Relation) {
                std::size_t arity = 0;
                auto so = std::find_if(relations_.rbegin(), relations_.rend(),
                                       [&](const RelationParameter& r) { return r.name == f.symbol(); });
                if (so != relations_.rend()) {
                    node.so_relation = true;
                    node.relation = static_cast<std::uint32_t>(relations_.rend() - so - 1);
                    arity = so->arity;
                } else if (auto r = vocabulary_.relation_index(f.symbol())) {
                    node.relation = static_cast<std::uint32_t>(*r);
                    arity = vocabulary_.relations()[*r].arity;
                } else {
                    throw Error(ErrorKind::VocabularyMismatch,
                                "relation " + f.symbol() + " is not in the vocabulary");
                }
                if (f.args().size() != arity)
                    throw Error(ErrorKind::ArityMismatch, "relation " + f.symbol() + " has arity " +
                                                              std::to_string(arity));
            }
            node.first = static_cast<std::uint32_t>(terms_.size());
            node.count = static_cast<std::uint32_t>(f.args().size());
            for (const auto& t : f.args()) {
                CTerm ct{CTerm::Kind::Number, 0};
                switch (t.kind) {
                    case Term::Kind::Variable: {
                        auto it = std::find_if(scope.rbegin(), scope.rend(),
                                               [&](const auto& e) { return e.first == t.name; });
                        if (it == scope.rend())
                            throw Error(ErrorKind::UnboundVariable, "variable " + t.name + " is unbound");
                        ct = {CTerm::Kind::Slot, it->second};
                        break;
                    }
                    case Term::Kind::Constant: {
                        auto c = vocabulary_.constant_index(t.name);
                        if (!c)
                            throw Error(ErrorKind::VocabularyMismatch,
                                        "constant " + t.name + " is not in the vocabulary");
                        ct = {CTerm::Kind::Constant, static_cast<std::uint32_t>(*c)};
                        break;
                    }
                    case Term::Kind::Number:
                        ct = {CTerm::Kind::Number, t.value};
                        break;
                    case Term::Kind::Max:
                        ct = {CTerm::Kind::Max, 0};
                        break;
                }
                terms_.push_back(ct);
            }
            break;
        }
        case NodeKind::Forall:
        case NodeKind::Exists: {
            node.first_var = static_cast<std::uint32_t>(vars_.size());
            node.var_count = static_cast<std::uint32_t>(f.variables().size());
            std::size_t depth = scope.size();
            std::vector<std::uint32_t> slots;
            for (const auto& v : f.variables()) {
                slots.push_back(slot_count_);
                scope.emplace_back(v, slot_count_++);
            }
            vars_.insert(vars_.end(), slots.begin(), slots.end());
            std::uint32_t body = compile(f.body(), scope);
            scope.resize(depth);
            node.first = static_cast<std::uint32_t>(children_.size());
            node.count = 1;
            children_.push_back(body);
            break;
        }
        case NodeKind::ForallSO:
        case NodeKind::ExistsSO:
            throw Error(ErrorKind::UnsupportedFormula,
                        "second-order quantifier below the second-order prefix");
        default: {
            std::vector<std::uint32_t> kids;
            for (const auto& c : f.children()) kids.push_back(compile(c, scope));
            node.first = static_cast<std::uint32_t>(children_.size());
            node.count = static_cast<std::uint32_t>(kids.size());
            children_.insert(children_.end(), kids.begin(), kids.end());
            break;
        }
    }
    nodes_.push_back(node);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

bool CompiledFormula::atom(const CNode& n, Context& ctx, bool& known) const {
    known = true;
    Element vals[2];
    std::uint64_t index = 0;
    for (std::uint32_t i = 0; i < n.count; ++i) {
        const CTerm& t = terms_[n.first + i];
        Element v = 0;
        switch (t.kind) {
            case CTerm::Kind::Slot: v = ctx.slots[t.index]; break;
            case CTerm::Kind::Constant: v = ctx.a->constant(t.index); break;
            case CTerm::Kind::Number:
                if (t.index >= ctx.n)
                    throw Error(ErrorKind::OutOfUniverse, "numeral " + std::to_string(t.index) +
                                                              " outside a universe of size " +
                                                              std::to_string(ctx.n));
                v = t.index;
                break;
            case CTerm::Kind::Max: v = static_cast<Element>(ctx.n - 1); break;
        }
        if (i < 2) vals[i] = v;
        index = index * ctx.n + v;
    }
    switch (n.predicate) {
        case Predicate::Equal: return vals[0] == vals[1];
        case Predicate::LessEqual: return vals[0] <= vals[1];
        case Predicate::Bit: return bit(vals[0], vals[1], ctx.n);
        case Predicate::Successor: return vals[1] == vals[0] + 1;
        case Predicate::Relation: break;
    }
    if (!n.so_relation) return ctx.a->holds_at(n.relation, index);
    const RelationTable& t = ctx.tables[n.relation];
    known = (t.known[index >> 6] >> (index & 63)) & 1u;
    return (t.bits[index >> 6] >> (index & 63)) & 1u;
}

bool CompiledFormula::eval_quant(const CNode& n, std::uint32_t var, Context& ctx) const {
    if (var == n.var_count) return eval(children_[n.first], ctx);
    Element& slot = ctx.slots[vars_[n.first_var + var]];
    bool universal = n.kind == NodeKind::Forall;
    for (Element v = 0; v < ctx.n; ++v) {
        slot = v;
        if (eval_quant(n, var + 1, ctx) != universal) return !universal;
    }
    return universal;
}

bool CompiledFormula::eval(std::uint32_t id, Context& ctx) const {
    const CNode& n = nodes_[id];
    switch (n.kind) {
        case NodeKind::True: return true;
        case NodeKind::False: return false;
        case NodeKind::Atom: {
            bool known;
            return atom(n, ctx, known);
        }
        case NodeKind::Not: return !eval(children_[n.first], ctx);
        case NodeKind::And:
            for (std::uint32_t i = 0; i < n.count; ++i)
                if (!eval(children_[n.first + i], ctx)) return false;
            return true;
        case NodeKind::Or:
            for (std::uint32_t i = 0; i < n.count; ++i)
                if (eval(children_[n.first + i], ctx)) return true;
            return false;
        case NodeKind::Implies:
            return !eval(children_[n.first], ctx) || eval(children_[n.first + 1], ctx);
        case NodeKind::Iff:
            return eval(children_[n.first], ctx) == eval(children_[n.first + 1], ctx);
        case NodeKind::Forall:
        case NodeKind::Exists: return eval_quant(n, 0, ctx);
        default: break;
    }
    throw Error(ErrorKind::UnsupportedFormula, "unexpected node");
}

namespace {

Truth t_not(Truth a) {
    if (a == Truth::Unknown) return a;
    return a == Truth::True ? Truth::False : Truth::True;
}

}  // namespace

Truth CompiledFormula::eval3_quant(const CNode& n, std::uint32_t var, Context& ctx) const {
    if (var == n.var_count) return eval3(children_[n.first], ctx);
    Element& slot = ctx.slots[vars_[n.first_var + var]];
    Truth decisive = n.kind == NodeKind::Forall ? Truth::False : Truth::True;
    bool unknown = false;
    for (Element v = 0; v < ctx.n; ++v) {
        slot = v;
        Truth r = eval3_quant(n, var + 1, ctx);
        if (r == decisive) return decisive;
        if (r == Truth::Unknown) unknown = true;
    }
    return unknown ? Truth::Unknown : t_not(decisive);
}

Truth CompiledFormula::eval3(std::uint32_t id, Context& ctx) const {
    const CNode& n = nodes_[id];
    switch (n.kind) {
        case NodeKind::True: return Truth::True;
        case NodeKind::False: return Truth::False;
        case NodeKind::Atom: {
            bool known;
            bool v = atom(n, ctx, known);
            if (!known) return Truth::Unknown;
            return v ? Truth::True : Truth::False;
        }
        case NodeKind::Not: return t_not(eval3(children_[n.first], ctx));
        case NodeKind::And:
        case NodeKind::Or: {
            Truth decisive = n.kind == NodeKind::And ? Truth::False : Truth::True;
            bool unknown = false;
            for (std::uint32_t i = 0; i < n.count; ++i) {
                Truth r = eval3(children_[n.first + i], ctx);
                if (r == decisive) return decisive;
                if (r == Truth::Unknown) unknown = true;
            }
            return unknown ? Truth::Unknown : t_not(decisive);
        }
        case NodeKind::Implies: {
            Truth a = eval3(children_[n.first], ctx);
            if (a == Truth::False) return Truth::True;
            Truth b = eval3(children_[n.first + 1], ctx);
            if (b == Truth::True) return Truth::True;
            if (a == Truth::True && b == Truth::False) return Truth::False;
            return Truth::Unknown;
        }
        case NodeKind::Iff: {
            Truth a = eval3(children_[n.first], ctx);
            if (a == Truth::Unknown) return a;
            Truth b = eval3(children_[n.first + 1], ctx);
            if (b == Truth::Unknown) return b;
            return a == b ? Truth::True : Truth::False;
        }
        case NodeKind::Forall:
        case NodeKind::Exists: return eval3_quant(n, 0, ctx);
        default: break;
    }
    throw Error(ErrorKind::UnsupportedFormula, "unexpected node");
}

bool CompiledFormula::evaluate(const Structure& a, std::span<const Element> parameters) const {
    if (!relations_.empty())
        throw Error(ErrorKind::UnsupportedFormula, "relation parameters need tables");
    if (!(a.vocabulary() == vocabulary_))
        throw Error(ErrorKind::VocabularyMismatch, "structure vocabulary differs from the formula's");
    Context ctx{&a, a.size(), std::vector<Element>(slot_count_, 0), {}};
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        if (i >= parameters.size())
            throw Error(ErrorKind::UnboundVariable, "variable " + parameters_[i] + " is unbound");
        if (parameters[i] >= a.size())
            throw Error(ErrorKind::OutOfUniverse, "value of " + parameters_[i] + " outside the universe");
        ctx.slots[i] = parameters[i];
    }
    return eval(root_, ctx);
}

Truth CompiledFormula::evaluate3(const Structure& a, std::span<const Element> parameters,
                                 std::span<const RelationTable> tables) const {
    if (!(a.vocabulary() == vocabulary_))
        throw Error(ErrorKind::VocabularyMismatch, "structure vocabulary differs from the formula's");
    Context ctx{&a, a.size(), std::vector<Element>(slot_count_, 0), tables};
    for (std::size_t i = 0; i < parameters_.size() && i < parameters.size(); ++i) ctx.slots[i] = parameters[i];
    return eval3(root_, ctx);
}

namespace {

std::pair<std::vector<std::string>, std::vector<Element>> split(const Formula& f, const Assignment& asg) {
    std::vector<std::string> names;
    std::vector<Element> values;
    for (const auto& v : free_variables(f)) {
        auto it = asg.find(v);
        if (it == asg.end()) throw Error(ErrorKind::UnboundVariable, "variable " + v + " is unbound");
        names.push_back(v);
        values.push_back(it->second);
    }
    return {names, values};
}

struct SoBlock {
    bool existential;
    RelationParameter relation;
};

struct SoSearch {
    const CompiledFormula& matrix;
    const Structure& a;
    const std::vector<Element>& params;
    const std::vector<SoBlock>& prefix;
    std::vector<RelationTable>& tables;

    bool run(std::size_t q, std::uint64_t cell) {
        Truth t = matrix.evaluate3(a, params, tables);
        if (t != Truth::Unknown) return t == Truth::True;
        while (q < prefix.size() && cell == power(a.size(), prefix[q].relation.arity)) {
            ++q;
            cell = 0;
        }
        // Every cell assigned yet still unknown cannot happen; guard anyway.
        if (q == prefix.size()) return false;
        bool existential = prefix[q].existential;
        for (bool value : {false, true}) {
            tables[q].assign(cell, value);
            bool r = run(q, cell + 1);
            if (r == existential) {
                tables[q].forget(cell);
                for (std::size_t later = q + 1; later < tables.size(); ++later) tables[later].forget_all();
                return existential;
            }
        }
        tables[q].forget(cell);
        for (std::size_t later = q + 1; later < tables.size(); ++later) tables[later].forget_all();
        return !existential;
    }
};

}  // namespace

bool eval_fo(const Structure& a, const Formula& f, const Assignment& asg) {
    auto [names, values] = split(f, asg);
    CompiledFormula c(f, a.vocabulary(), names);
    return c.evaluate(a, values);
}

BigCount so_enumeration_count(const Formula& f, std::size_t n) {
    BigCount cells = 0;
    const Formula* cur = &f;
    while (cur->is_so_quantifier()) {
        cells += BigCount(power(n, cur->so_arity()));
        cur = &cur->body();
    }
    BigCount total = 1;
    total <<= static_cast<unsigned>(cells);
    return total;
}

bool eval_so(const Structure& a, const Formula& f, std::uint64_t budget, const Assignment& asg) {
    std::vector<SoBlock> prefix;
    const Formula* cur = &f;
    while (cur->is_so_quantifier()) {
        prefix.push_back({cur->kind() == NodeKind::ExistsSO, {cur->symbol(), cur->so_arity()}});
        cur = &cur->body();
    }
    BigCount needed = so_enumeration_count(f, a.size());
    if (needed > budget)
        throw BudgetExceeded("second-order evaluation", needed.str(), std::to_string(budget));
    auto [names, values] = split(f, asg);
    std::vector<RelationParameter> relations;
    std::vector<RelationTable> tables;
    for (const auto& b : prefix) {
        relations.push_back(b.relation);
        tables.emplace_back(b.relation.arity, power(a.size(), b.relation.arity));
    }
    CompiledFormula matrix(*cur, a.vocabulary(), names, relations);
    if (!(a.vocabulary() == matrix.vocabulary()))
        throw Error(ErrorKind::VocabularyMismatch, "structure vocabulary differs from the formula's");
    for (std::size_t i = 0; i < names.size(); ++i)
        if (values[i] >= a.size())
            throw Error(ErrorKind::OutOfUniverse, "value of " + names[i] + " outside the universe");
    SoSearch search{matrix, a, values, prefix, tables};
    return search.run(0, 0);
}

ExtractedPins extract_pins(const Vocabulary& vocabulary, const Formula& sentence, std::size_t m) {
    ExtractedPins pins;
    std::vector<Formula> stack{sentence};
    auto ground = [&](const Term& t, Element& v) {
        if (t.kind == Term::Kind::Number && t.value < m) {
            v = t.value;
            return true;
        }
        if (t.kind == Term::Kind::Max) {
            v = static_cast<Element>(m - 1);
            return true;
        }
        return false;
    };
    while (!stack.empty()) {
        Formula f = stack.back();
        stack.pop_back();
        if (f.kind() == NodeKind::And) {
            for (const auto& c : f.children()) stack.push_back(c);
            continue;
        }
        bool positive = true;
        if (f.kind() == NodeKind::Not) {
            positive = false;
            f = f.body();
        }
        if (!f.is_atom()) continue;
        if (f.predicate() == Predicate::Relation) {
            auto r = vocabulary.relation_index(f.symbol());
            if (!r || vocabulary.relations()[*r].arity != f.args().size()) continue;
            Tuple tuple;
            Element v;
            for (const auto& t : f.args()) {
                if (!ground(t, v)) break;
                tuple.push_back(v);
            }
            if (tuple.size() != f.args().size()) continue;
            pins.cells.push_back({*r, tuple_index(tuple, m), positive});
        } else if (f.predicate() == Predicate::Equal && positive) {
            const Term* c = nullptr;
            const Term* other = nullptr;
            if (f.args()[0].kind == Term::Kind::Constant) c = &f.args()[0], other = &f.args()[1];
            else if (f.args()[1].kind == Term::Kind::Constant) c = &f.args()[1], other = &f.args()[0];
            Element v;
            if (!c || !ground(*other, v)) continue;
            auto slot = vocabulary.constant_index(c->name);
            if (slot) pins.constants.push_back({*slot, v});
        }
    }
    return pins;
}

ConsistencySearch search_consistent(const Vocabulary& vocabulary, const Formula& f, const Assignment& asg,
                                    std::size_t m, const StructurePredicate& within,
                                    const ConsistencyOptions& options) {
    if (m < 2) throw Error(ErrorKind::OutOfUniverse, "universe size must exceed 1");
    std::map<std::string, Term> repl;
    for (const auto& [name, value] : asg) {
        if (value >= m) throw Error(ErrorKind::OutOfUniverse, "value of " + name + " outside the universe");
        repl.emplace(name, Term::number(value));
    }
    Formula sentence = substitute(f, repl);
    CompiledFormula compiled(sentence, vocabulary);
    ExtractedPins pins = extract_pins(vocabulary, sentence, m);
    StructureSpace space(vocabulary, m, pins.cells, pins.constants);
    ConsistencySearch result;
    BigCount count = space.count();
    std::uint64_t limit = count > options.budget ? options.budget : static_cast<std::uint64_t>(count);
    auto hit = first_index(limit, options.workers, [&](std::uint64_t i) {
        Structure s = space.at(i);
        return compiled.evaluate(s) && (!within || within(s));
    });
    if (hit) {
        result.candidates = limit;
        result.witness_index = *hit;
        result.witness = space.at(*hit);
        return result;
    }
    if (count > options.budget)
        throw BudgetExceeded("consistency search", count.str(), std::to_string(options.budget));
    result.candidates = limit;
    return result;
}

std::optional<Structure> is_consistent(const Vocabulary& vocabulary, const Formula& f, const Assignment& asg,
                                       std::size_t m, const StructurePredicate& within,
                                       const ConsistencyOptions& options) {
    return search_consistent(vocabulary, f, asg, m, within, options).witness;
}

}  // namespace fopkit
