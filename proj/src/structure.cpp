#include "fopkit/structure.hpp"

#include <functional>

#include "fopkit/error.hpp"

namespace fopkit {

std::uint64_t power(std::size_t base, std::size_t exponent) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            throw Error(ErrorKind::BudgetExceeded, "integer overflow computing n^k");
        r *= base;
    }
    return r;
}

std::uint64_t tuple_index(std::span<const Element> tuple, std::size_t n) {
    std::uint64_t index = 0;
    for (Element e : tuple) {
        if (e >= n)
            throw Error(ErrorKind::OutOfUniverse,
                        "element " + std::to_string(e) + " outside universe of size " + std::to_string(n));
        index = index * n + e;
    }
    return index;
}

Tuple tuple_at(std::uint64_t index, std::size_t arity, std::size_t n) {
    Tuple t(arity);
    for (std::size_t i = arity; i-- > 0;) {
        t[i] = static_cast<Element>(index % n);
        index /= n;
    }
    return t;
}

namespace {

void check_pair(Element i, Element j, std::size_t n) {
    if (i >= n || j >= n)
        throw Error(ErrorKind::OutOfUniverse, "argument outside universe of size " + std::to_string(n));
}

}  // namespace

bool bit(Element i, Element j, std::size_t n) {
    check_pair(i, j, n);
    return j < 32 && ((i >> j) & 1u);
}

bool suc(Element i, Element j, std::size_t n) {
    check_pair(i, j, n);
    return j == i + 1;
}

Structure::Structure(Vocabulary vocabulary, std::size_t size)
    : vocabulary_(std::make_shared<const Vocabulary>(std::move(vocabulary))), size_(size) {
    if (size_ < 2)
        throw Error(ErrorKind::OutOfUniverse, "universe size must be greater than 1, got " +
                                                  std::to_string(size_));
    for (const auto& r : vocabulary_->relations()) {
        std::uint64_t cells = power(size_, r.arity);
        tables_.emplace_back((cells + 63) / 64, 0);
    }
    constants_.assign(vocabulary_->constants().size(), 0);
}

std::uint64_t Structure::cells(std::size_t rel) const {
    return power(size_, vocabulary_->relations().at(rel).arity);
}

void Structure::check_element(Element e) const {
    if (e >= size_)
        throw Error(ErrorKind::OutOfUniverse, "element " + std::to_string(e) +
                                                  " outside universe of size " + std::to_string(size_));
}

bool Structure::holds(std::size_t rel, std::span<const Element> tuple) const {
    if (tuple.size() != vocabulary_->relations().at(rel).arity)
        throw Error(ErrorKind::ArityMismatch, "tuple length differs from arity of " +
                                                  vocabulary_->relations()[rel].name);
    return holds_at(rel, tuple_index(tuple, size_));
}

void Structure::set(std::size_t rel, std::span<const Element> tuple, bool value) {
    if (tuple.size() != vocabulary_->relations().at(rel).arity)
        throw Error(ErrorKind::ArityMismatch, "tuple length differs from arity of " +
                                                  vocabulary_->relations()[rel].name);
    set_at(rel, tuple_index(tuple, size_), value);
}

void Structure::set_at(std::size_t rel, std::uint64_t index, bool value) {
    auto& word = tables_.at(rel).at(index >> 6);
    std::uint64_t mask = std::uint64_t{1} << (index & 63);
    word = value ? (word | mask) : (word & ~mask);
}

void Structure::clear(std::size_t rel) {
    for (auto& w : tables_.at(rel)) w = 0;
}

std::size_t Structure::relation(const std::string& name) const {
    if (auto i = vocabulary_->relation_index(name)) return *i;
    throw Error(ErrorKind::UnknownSymbol, "no relation '" + name + "' in vocabulary");
}

std::size_t Structure::constant_slot(const std::string& name) const {
    if (auto i = vocabulary_->constant_index(name)) return *i;
    throw Error(ErrorKind::UnknownSymbol, "no constant '" + name + "' in vocabulary");
}

void Structure::set_constant(std::size_t i, Element value) {
    check_element(value);
    constants_.at(i) = value;
}

std::vector<Tuple> Structure::tuples(std::size_t rel) const {
    std::vector<Tuple> out;
    std::size_t arity = vocabulary_->relations().at(rel).arity;
    std::uint64_t total = cells(rel);
    for (std::uint64_t i = 0; i < total; ++i)
        if (holds_at(rel, i)) out.push_back(tuple_at(i, arity, size_));
    return out;
}

std::size_t Structure::tuple_count(std::size_t rel) const {
    std::size_t c = 0;
    for (auto w : tables_.at(rel)) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
}

bool Structure::operator==(const Structure& other) const {
    return size_ == other.size_ && *vocabulary_ == *other.vocabulary_ && tables_ == other.tables_ &&
           constants_ == other.constants_;
}

std::size_t Structure::hash() const {
    std::size_t seed = size_;
    auto mix = [&seed](std::uint64_t v) { seed ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b9 + (seed << 6) + (seed >> 2); };
    for (const auto& t : tables_)
        for (auto w : t) mix(w);
    for (auto c : constants_) mix(c);
    return seed;
}

Structure reduct(const Structure& a, const Vocabulary& target) {
    Structure out(target, a.size());
    for (std::size_t r = 0; r < target.relations().size(); ++r) {
        std::size_t src = a.relation(target.relations()[r].name);
        if (a.vocabulary().relations()[src].arity != target.relations()[r].arity)
            throw Error(ErrorKind::VocabularyMismatch, "arity differs for " + target.relations()[r].name);
        for (std::uint64_t i = 0; i < a.cells(src); ++i)
            if (a.holds_at(src, i)) out.set_at(r, i);
    }
    for (std::size_t c = 0; c < target.constants().size(); ++c)
        out.set_constant(c, a.constant(target.constants()[c]));
    return out;
}

std::vector<std::vector<bool>> adjacency(const Structure& a, const std::string& relation) {
    std::size_t rel = a.relation(relation);
    std::size_t n = a.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (Element u = 0; u < n; ++u)
        for (Element v = 0; v < n; ++v) adj[u][v] = a.holds_at(rel, std::uint64_t{u} * n + v);
    return adj;
}

}  // namespace fopkit
