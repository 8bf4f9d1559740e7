#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fopkit/enumerate.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"

namespace fopkit {

/// Free-variable interpretation for model checking.
using Assignment = std::map<std::string, Element>;

/// Default number of relation-table enumerations eval_so and the
/// consistency search may perform.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 26;

/// Table for a relation variable bound by a second-order quantifier. Cells
/// whose `known` bit is clear are unknown to three-valued evaluation.
struct RelationTable {
    std::size_t arity = 1;
    std::vector<std::uint64_t> bits;
    std::vector<std::uint64_t> known;

    RelationTable() = default;
    RelationTable(std::size_t arity, std::uint64_t cells);
    void assign(std::uint64_t cell, bool value);
    void forget(std::uint64_t cell);
    void forget_all();
};

enum class Truth : std::uint8_t { False = 0, True = 1, Unknown = 2 };

/// Relation variable visible to a compiled formula without being bound
/// inside it (the quantified relations of a second-order prefix).
struct RelationParameter {
    std::string name;
    std::size_t arity = 1;
};

/// A formula resolved against a vocabulary: variables become slots,
/// symbols become table indices. Reusable across structures of any size.
class CompiledFormula {
public:
    /// `parameters` name the free variables, in the order values are passed
    /// to evaluate(). Throws VocabularyMismatch for symbols missing from the
    /// vocabulary, ArityMismatch for wrong argument counts, UnboundVariable
    /// for free variables not listed and UnsupportedFormula for second-order
    /// quantifiers (relation variables come in through `relations`).
    CompiledFormula(const Formula& f, const Vocabulary& vocabulary,
                    std::vector<std::string> parameters = {},
                    std::vector<RelationParameter> relations = {});

    bool evaluate(const Structure& a, std::span<const Element> parameters = {}) const;
    bool evaluate(const Structure& a, std::initializer_list<Element> parameters) const {
        return evaluate(a, std::span<const Element>(parameters.begin(), parameters.size()));
    }

    /// Kleene evaluation; `tables` holds one table per relation parameter.
    Truth evaluate3(const Structure& a, std::span<const Element> parameters,
                    std::span<const RelationTable> tables) const;

    const std::vector<std::string>& parameters() const noexcept { return parameters_; }
    const std::vector<RelationParameter>& relations() const noexcept { return relations_; }
    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }

    struct CTerm {
        enum class Kind : std::uint8_t { Slot, Constant, Number, Max } kind;
        std::uint32_t index;
    };
    struct CNode {
        NodeKind kind;
        Predicate predicate;
        bool so_relation;
        std::uint32_t relation;
        std::uint32_t first, count;  // args for atoms, children otherwise
        std::uint32_t first_var, var_count;
    };

private:
    struct Context;
    using Scope = std::vector<std::pair<std::string, std::uint32_t>>;
    std::uint32_t compile(const Formula& f, Scope& scope);
    bool eval(std::uint32_t node, Context& ctx) const;
    bool eval_quant(const CNode& n, std::uint32_t var, Context& ctx) const;
    Truth eval3(std::uint32_t node, Context& ctx) const;
    Truth eval3_quant(const CNode& n, std::uint32_t var, Context& ctx) const;
    bool atom(const CNode& n, Context& ctx, bool& known) const;

    Vocabulary vocabulary_;
    std::vector<std::string> parameters_;
    std::vector<RelationParameter> relations_;
    std::vector<CNode> nodes_;
    std::vector<CTerm> terms_;
    std::vector<std::uint32_t> children_;
    std::vector<std::uint32_t> vars_;
    std::uint32_t slot_count_ = 0;
    std::uint32_t root_ = 0;
};

/// A |= f[asg] for a first-order f. Throws VocabularyMismatch,
/// UnboundVariable, OutOfUniverse.
bool eval_fo(const Structure& a, const Formula& f, const Assignment& asg = {});

/// Evaluates a formula made of second-order quantifier blocks over a
/// first-order matrix by enumerating relation tables (least significant
/// cell first). Branches are cut when three-valued evaluation of the matrix
/// already decides them. Throws BudgetExceeded when the number of table
/// combinations, prod 2^(n^arity), exceeds `budget`.
bool eval_so(const Structure& a, const Formula& f, std::uint64_t budget = kDefaultBudget,
             const Assignment& asg = {});

/// Exact number of table combinations eval_so would enumerate on size n.
BigCount so_enumeration_count(const Formula& f, std::size_t n);

using StructurePredicate = std::function<bool(const Structure&)>;

struct ConsistencyOptions {
    std::uint64_t budget = kDefaultBudget;
    unsigned workers = 1;
};

struct ConsistencySearch {
    std::optional<Structure> witness;
    std::uint64_t candidates = 0;  ///< size of the (pinned) search space
    std::optional<std::uint64_t> witness_index;
};

/// Ground relational literals and constant bindings among the top-level
/// conjuncts of a sentence, as pins of a structure space.
struct ExtractedPins {
    std::vector<CellPin> cells;
    std::vector<ConstantPin> constants;
};
ExtractedPins extract_pins(const Vocabulary& vocabulary, const Formula& sentence, std::size_t m);

/// Exhaustive search for a size-m structure satisfying f[asg] and, when
/// given, the `within` predicate. Ground relational literals and constant
/// bindings in the top-level conjunction of f pin the search space; the
/// witness is the first one in enumeration order, whatever the worker count.
/// At most `budget` candidates are visited; BudgetExceeded is thrown only
/// when none of them is a witness and the space is larger than the budget.
ConsistencySearch search_consistent(const Vocabulary& vocabulary, const Formula& f,
                                    const Assignment& asg, std::size_t m,
                                    const StructurePredicate& within = nullptr,
                                    const ConsistencyOptions& options = {});

std::optional<Structure> is_consistent(const Vocabulary& vocabulary, const Formula& f,
                                       const Assignment& asg, std::size_t m,
                                       const StructurePredicate& within = nullptr,
                                       const ConsistencyOptions& options = {});

}  // namespace fopkit
