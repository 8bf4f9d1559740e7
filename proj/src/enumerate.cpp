#include "fopkit/enumerate.hpp"

#include <algorithm>
#include <optional>

#include "fopkit/error.hpp"

namespace fopkit {

BigCount count_structures(const Vocabulary& vocabulary, std::size_t n) {
    BigCount cells = 0;
    for (const auto& r : vocabulary.relations()) cells += BigCount(power(n, r.arity));
    BigCount total = 1;
    total <<= static_cast<unsigned>(cells);
    for (std::size_t i = 0; i < vocabulary.constants().size(); ++i) total *= n;
    return total;
}

StructureSpace::StructureSpace(Vocabulary vocabulary, std::size_t n, std::vector<CellPin> cell_pins,
                               std::vector<ConstantPin> constant_pins)
    : vocabulary_(std::move(vocabulary)), n_(n), base_(vocabulary_, n) {
    const auto& rels = vocabulary_.relations();
    std::vector<std::vector<std::optional<bool>>> pinned(rels.size());
    for (std::size_t r = 0; r < rels.size(); ++r) pinned[r].assign(base_.cells(r), std::nullopt);
    for (const auto& p : cell_pins) {
        auto& slot = pinned.at(p.relation).at(p.cell);
        if (slot && *slot != p.value) contradictory_ = true;
        slot = p.value;
        base_.set_at(p.relation, p.cell, p.value);
    }
    std::vector<std::optional<Element>> constants(vocabulary_.constants().size());
    for (const auto& p : constant_pins) {
        if (p.value >= n_) throw Error(ErrorKind::OutOfUniverse, "pinned constant outside universe");
        auto& slot = constants.at(p.slot);
        if (slot && *slot != p.value) contradictory_ = true;
        slot = p.value;
        base_.set_constant(p.slot, p.value);
    }
    // Last relation occupies the least significant chunk.
    for (std::size_t r = rels.size(); r-- > 0;)
        for (std::uint64_t j = 0; j < pinned[r].size(); ++j)
            if (!pinned[r][j]) free_cells_.push_back({r, j});
    for (std::size_t c = 0; c < constants.size(); ++c)
        if (!constants[c]) free_constants_.push_back(c);
}

BigCount StructureSpace::count() const {
    if (contradictory_) return 0;
    BigCount total = 1;
    total <<= static_cast<unsigned>(free_cells_.size());
    for (std::size_t i = 0; i < free_constants_.size(); ++i) total *= n_;
    return total;
}

std::uint64_t StructureSpace::checked_count(std::uint64_t budget, const std::string& what) const {
    BigCount c = count();
    if (c > budget) throw BudgetExceeded(what, c.str(), std::to_string(budget));
    return static_cast<std::uint64_t>(c);
}

StructureSpace::iterator StructureSpace::end() const {
    BigCount c = count();
    if (c > BigCount(UINT64_MAX)) throw BudgetExceeded("iteration", c.str(), std::to_string(UINT64_MAX));
    return iterator(this, static_cast<std::uint64_t>(c));
}

Structure StructureSpace::at(std::uint64_t i) const {
    Structure s = base_;
    for (std::size_t k = free_constants_.size(); k-- > 0;) {
        s.set_constant(free_constants_[k], static_cast<Element>(i % n_));
        i /= n_;
    }
    for (const auto& cell : free_cells_) {
        if (i & 1u) s.set_at(cell.relation, cell.cell, true);
        i >>= 1;
    }
    return s;
}

StructureSpace enumerate_structures(const Vocabulary& vocabulary, std::size_t n, std::uint64_t cap,
                                    std::size_t size_cap) {
    if (n > size_cap)
        throw BudgetExceeded("enumeration of size " + std::to_string(n) + " structures",
                             "universe size " + std::to_string(n),
                             "size cap " + std::to_string(size_cap));
    StructureSpace space(vocabulary, n);
    space.checked_count(cap, "structure enumeration");
    return space;
}

}  // namespace fopkit
