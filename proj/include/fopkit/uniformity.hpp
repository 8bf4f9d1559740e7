#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fopkit/problems.hpp"

namespace fopkit {

/// One conjunct of a uniformity conjunction: a ground relational literal
/// L(u) or a constant binding c = b.
struct GroundItem {
    enum class Kind : std::uint8_t { Literal, Binding } kind = Kind::Literal;
    std::size_t symbol = 0;   ///< relation index or constant slot
    Tuple tuple;              ///< Literal: the arguments
    bool positive = true;     ///< Literal only
    Element value = 0;        ///< Binding only

    Formula formula(const Vocabulary& vocabulary) const;
    bool operator==(const GroundItem&) const = default;
};

using GroundConjunction = std::vector<GroundItem>;

Formula conjunction_formula(const Vocabulary& vocabulary, const GroundConjunction& c);

/// Reads a conjunction of ground literals and constant bindings (numerals
/// or max as arguments). Throws NotLiteral for anything else.
GroundConjunction ground_conjunction(const Vocabulary& vocabulary, const Formula& f, std::size_t m);

/// All ground items over [m], in a fixed order: for each relation and each
/// tuple (lexicographic) the positive then the negative literal, then for
/// each constant the bindings to 0..m-1.
std::vector<GroundItem> ground_items(const Vocabulary& vocabulary, std::size_t m);

/// Every conjunction of at most k distinct items that is not trivially
/// contradictory (L together with not L, or c bound twice), by increasing
/// size and then lexicographically over item positions.
std::vector<GroundConjunction> enumerate_conjunctions(const Vocabulary& vocabulary, std::size_t m, std::size_t k);

/// Least model: cells of the positive literals set, every other cell false,
/// bound constants as given, the others 0. Satisfies the conjunction iff it
/// is consistent.
Structure least_model(const Vocabulary& vocabulary, std::size_t m, const GroundConjunction& c);

/// Elements occurring in the literals or bindings, sorted.
std::vector<Element> constrained_elements(const GroundConjunction& c);

struct WitnessInput {
    Structure base;                       ///< least model of the conjunction
    GroundConjunction conjunction;
    std::vector<Element> constrained;
    std::size_t k = 0;                    ///< declared conjunction size bound
};

/// Witness builders: supersets of the base model (edges and constants of
/// unbound symbols may change) lying in the problem. Throw NoFreshVertex
/// when the construction has no room, PreconditionViolation for a base
/// smaller than the builder's size requirement.
Structure witness_reach(const WitnessInput& in);
Structure witness_altreach(const WitnessInput& in);
Structure witness_hp(const WitnessInput& in);
Structure witness_comono(const WitnessInput& in);

/// Same constructions from a structure and the constrained elements alone;
/// absent edges between constrained elements are treated as asserted absent.
Structure witness_reach(const Structure& a, const std::vector<Element>& constrained);
Structure witness_altreach(const Structure& a, const std::vector<Element>& constrained);
Structure witness_hp(const Structure& a, const std::vector<Element>& constrained, std::size_t k = 0);
Structure witness_comono(const Structure& a, const std::vector<Element>& constrained);

/// Problems with a registered builder.
std::vector<std::string> constructive_problems();

enum class UniformityMode { Exhaustive, Constructive };

struct UniformityQuery {
    std::string problem;
    std::size_t n = 2;
    std::size_t k = 1;
    std::vector<std::size_t> m_values;
    UniformityMode mode = UniformityMode::Exhaustive;
    std::uint64_t budget = kDefaultBudget;  ///< per consistency search
    unsigned workers = 1;
    /// When set, only these conjunctions are examined (a probe); k is not
    /// enforced.
    std::optional<std::vector<Formula>> probe;
};

enum class Verdict { Uniform, CounterexampleFound, Inconclusive };
const char* to_string(Verdict v);

struct UniformityCounterexample {
    GroundConjunction conjunction;
    Formula formula;
    Structure consistency_witness;   ///< satisfies the conjunction, size m
    std::uint64_t candidates = 0;    ///< size-m structures satisfying the pins, all outside S
    std::optional<ColoringCensus> coloring;  ///< MonoTriangle: colorings of the asserted graph
};

struct MVerdict {
    std::size_t m = 0;
    Verdict verdict = Verdict::Uniform;
    std::uint64_t conjunctions = 0;   ///< examined
    std::uint64_t consistent = 0;     ///< m-consistent among them
    std::uint64_t witnessed = 0;      ///< shown m-consistent in S
    std::uint64_t builder_fallbacks = 0;  ///< constructive: builder declined, exhaustive search used
    std::uint64_t counterexamples = 0;
    std::optional<UniformityCounterexample> counterexample;  ///< the first one
    std::string note;                 ///< Inconclusive: why
};

struct UniformityReport {
    UniformityQuery query;
    std::vector<MVerdict> verdicts;

    bool uniform() const;
};

/// Throws UnknownProblem, PreconditionViolation (m < n, n < 2, constructive
/// mode without a builder), ContradictoryWitnessBuilder.
UniformityReport check_uniformity(const UniformityQuery& q);

}  // namespace fopkit
