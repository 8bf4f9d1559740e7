#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fopkit/structure.hpp"

namespace fopkit {

using BigCount = boost::multiprecision::cpp_int;

/// 2^(sum_j n^a_j) * n^(#constants).
BigCount count_structures(const Vocabulary& vocabulary, std::size_t n);

/// Default universe-size cap for exhaustive entry points.
inline constexpr std::size_t kDefaultEnumerationSizeCap = 8;

struct CellPin {
    std::size_t relation = 0;
    std::uint64_t cell = 0;  ///< tuple_index of the pinned tuple
    bool value = true;
};

struct ConstantPin {
    std::size_t slot = 0;
    Element value = 0;
};

/// All structures of one size over a vocabulary, optionally with some
/// relation cells and constants fixed, in a deterministic order.
///
/// Global order: a structure's index is relbits * n^c + constant_index, where
/// relbits concatenates the relation tables (first relation most significant,
/// cell j of a table at bit j of its chunk) and constant_index ranks the
/// constant values lexicographically (first constant most significant).
/// A pinned space enumerates exactly the structures consistent with the pins,
/// in increasing global index.
class StructureSpace {
public:
    StructureSpace(Vocabulary vocabulary, std::size_t n, std::vector<CellPin> cell_pins = {},
                   std::vector<ConstantPin> constant_pins = {});

    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    std::size_t universe_size() const noexcept { return n_; }

    /// True when the pins contradict each other.
    bool contradictory() const noexcept { return contradictory_; }
    BigCount count() const;

    /// Throws BudgetExceeded (with the exact count) when count() > budget.
    std::uint64_t checked_count(std::uint64_t budget, const std::string& what) const;

    Structure at(std::uint64_t i) const;

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Structure;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = Structure;

        iterator() = default;
        iterator(const StructureSpace* space, std::uint64_t i) : space_(space), i_(i) {}
        Structure operator*() const { return space_->at(i_); }
        iterator& operator++() {
            ++i_;
            return *this;
        }
        iterator operator++(int) {
            auto copy = *this;
            ++i_;
            return copy;
        }
        bool operator==(const iterator& o) const { return i_ == o.i_; }

    private:
        const StructureSpace* space_ = nullptr;
        std::uint64_t i_ = 0;
    };

    /// Iteration requires count() to fit in 64 bits.
    iterator begin() const { return iterator(this, 0); }
    iterator end() const;

private:
    struct FreeCell {
        std::size_t relation;
        std::uint64_t cell;
    };

    Vocabulary vocabulary_;
    std::size_t n_;
    bool contradictory_ = false;
    Structure base_;
    std::vector<FreeCell> free_cells_;         // least significant first
    std::vector<std::size_t> free_constants_;  // most significant first
};

/// Every structure of size n, checked against a count cap and the size cap.
StructureSpace enumerate_structures(const Vocabulary& vocabulary, std::size_t n, std::uint64_t cap,
                                    std::size_t size_cap = kDefaultEnumerationSizeCap);

}  // namespace fopkit
