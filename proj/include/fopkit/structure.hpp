#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fopkit/formula.hpp"
#include "fopkit/vocabulary.hpp"

namespace fopkit {

using Tuple = std::vector<Element>;

/// Lexicographic rank of a tuple over [n], leftmost coordinate most significant.
std::uint64_t tuple_index(std::span<const Element> tuple, std::size_t n);
Tuple tuple_at(std::uint64_t index, std::size_t arity, std::size_t n);
std::uint64_t power(std::size_t base, std::size_t exponent);

/// Standard interpretations of the numeric predicates on [n].
bool bit(Element i, Element j, std::size_t n);
bool suc(Element i, Element j, std::size_t n);

/// Finite structure over the universe [n] = {0..n-1}, n >= 2.
///
/// Each relation table is a bitset indexed by tuple_index, which makes the
/// representation canonical: equality and hashing are extensional.
/// Numeric relations are never stored.
class Structure {
public:
    Structure(Vocabulary vocabulary, std::size_t size);

    const Vocabulary& vocabulary() const noexcept { return *vocabulary_; }
    std::size_t size() const noexcept { return size_; }

    /// Number of cells n^arity of relation `rel`.
    std::uint64_t cells(std::size_t rel) const;

    bool holds(std::size_t rel, std::span<const Element> tuple) const;
    bool holds_at(std::size_t rel, std::uint64_t index) const {
        return (tables_[rel][index >> 6] >> (index & 63)) & 1u;
    }
    void set(std::size_t rel, std::span<const Element> tuple, bool value = true);
    void set_at(std::size_t rel, std::uint64_t index, bool value = true);
    void set(std::size_t rel, std::initializer_list<Element> tuple, bool value = true) {
        set(rel, std::span<const Element>(tuple.begin(), tuple.size()), value);
    }
    bool holds(std::size_t rel, std::initializer_list<Element> tuple) const {
        return holds(rel, std::span<const Element>(tuple.begin(), tuple.size()));
    }
    void clear(std::size_t rel);

    /// By symbol name; throws UnknownSymbol.
    std::size_t relation(const std::string& name) const;
    std::size_t constant_slot(const std::string& name) const;

    Element constant(std::size_t i) const { return constants_.at(i); }
    Element constant(const std::string& name) const { return constants_.at(constant_slot(name)); }
    void set_constant(std::size_t i, Element value);
    void set_constant(const std::string& name, Element value) { set_constant(constant_slot(name), value); }
    const std::vector<Element>& constants() const noexcept { return constants_; }

    /// Tuples of a relation in lexicographic order.
    std::vector<Tuple> tuples(std::size_t rel) const;
    std::size_t tuple_count(std::size_t rel) const;

    bool operator==(const Structure& other) const;
    bool operator!=(const Structure& other) const { return !(*this == other); }
    std::size_t hash() const;

private:
    void check_element(Element e) const;

    std::shared_ptr<const Vocabulary> vocabulary_;
    std::size_t size_;
    std::vector<std::vector<std::uint64_t>> tables_;
    std::vector<Element> constants_;
};

/// Keeps the symbols of `target` (looked up by name in `a`).
Structure reduct(const Structure& a, const Vocabulary& target);

/// Graph helpers over a binary relation `E`.
std::vector<std::vector<bool>> adjacency(const Structure& a, const std::string& relation = "E");

}  // namespace fopkit
