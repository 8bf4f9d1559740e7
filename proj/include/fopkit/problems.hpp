#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fopkit/eval.hpp"
#include "fopkit/fop.hpp"
#include "fopkit/normal_form.hpp"

namespace fopkit {

using Decider = std::function<bool(const Structure&)>;

/// A decision problem S over a vocabulary: an exact decider, and possibly a
/// second-order definition used as a cross-check.
struct Problem {
    std::string name;
    Vocabulary vocabulary;
    Decider decider;
    std::optional<Formula> definition;
    std::string complexity;

    /// Throws VocabularyMismatch on a structure over another vocabulary.
    bool decide(const Structure& a) const;
    bool operator()(const Structure& a) const { return decide(a); }
};

/// S_n = S together with every structure of size < n.
struct PaddedProblem {
    Problem base;
    std::size_t threshold = 2;

    bool decide(const Structure& a) const { return a.size() < threshold || base.decide(a); }
    Problem as_problem() const;
};

PaddedProblem pad(const Problem& p, std::size_t n);

namespace deciders {
bool reach(const Structure& a);
bool altreach(const Structure& a);
/// Directed Hamiltonian path from `from` to `to` over E (loops ignored).
bool hamiltonian_path(const Structure& a, Element from, Element to);
bool hp_0max(const Structure& a);
bool hp_01(const Structure& a);
bool hp_two_points(const Structure& a);
/// E read as an undirected simple graph: loops dropped, pairs symmetrized.
bool mono_triangle(const Structure& a);
bool co_mono_triangle(const Structure& a);
bool three_dm(const Structure& a);
/// Edge lengths and the bound are decoded from the binary expansions L and K.
bool longest_path(const Structure& a);

/// Undirected counterparts written independently of the directed ones.
bool reach_undirected(const Structure& a);
bool hp_0max_undirected(const Structure& a);
bool hp_two_points_undirected(const Structure& a);
}  // namespace deciders

/// Red/blue colorings of the edges of the undirected simple graph behind E.
struct ColoringCensus {
    std::size_t edges = 0;
    std::size_t triangles = 0;
    std::uint64_t colorings = 0;        ///< 2^edges
    std::uint64_t triangle_free = 0;    ///< colorings without a monochromatic triangle
};
/// Enumerates every coloring; edges <= 30.
ColoringCensus coloring_census(const Structure& a);

namespace definitions {
Formula reach();           ///< forall2 (R 1): closure of s under E contains t
Formula altreach();        ///< forall2 (R 1): least accessibility fixpoint
Formula hp_0max();         ///< exists2 (R 2): a strict order listing a path 0..max
Formula hp_01();
Formula hp_two_points();
Formula mono_triangle();   ///< exists2 (C 2): a triangle-safe edge coloring
Formula co_mono_triangle();
Formula three_dm();
}  // namespace definitions

/// Catalog lookup; throws Error(UnknownProblem).
const Problem& problem(const std::string& name);
std::vector<std::string> problem_names();

/// Problems that have padding fops.
std::vector<std::string> autoreducible_problems();

/// Least k with 2^k > n.
std::size_t padding_arity(std::size_t n);

/// Fop reducing p to pad(p, n) whose images all have more than n elements.
/// Throws UnknownProblem for problems without one.
Fop autoreduction(const std::string& p, std::size_t n);

/// A catalog fop together with the problems it maps between.
struct CatalogFop {
    std::string name;
    Fop fop;
    std::string source_problem;
    std::optional<std::size_t> target_threshold;  ///< target is pad(target_problem, n)
    std::string target_problem;
};
/// Identity fops for reach/altreach/hp_0max, the 1<->max swap
/// (hp_01 -> hp_0max) and the four padding fops at threshold n.
std::vector<CatalogFop> catalog_fops(std::size_t n = 3);

std::optional<Structure> is_consistent(const Problem& within, const Formula& f, const Assignment& asg,
                                       std::size_t m, const ConsistencyOptions& options = {});

struct SuperfluityCounterexample {
    Structure source;
    Structure image;
    Assignment assignment;       ///< values of the prenex variables in the image
    Clause clause;               ///< the falsified clause
    Formula instance;            ///< conjunction of the complemented literals, true at `assignment`
};

struct SuperfluityReport {
    PrenexUniversal prenex;
    std::uint64_t checked = 0;
    std::optional<SuperfluityCounterexample> counterexample;

    bool superfluous() const noexcept { return !counterexample; }
};

/// Checks rho(A) |= psi for every source structure A with 2 <= |A| <= size_bound.
/// Throws NotUniversal for psi outside FO-forall, BudgetExceeded when the
/// number of source structures exceeds budget.
SuperfluityReport check_superfluous_wrt_fop(const Formula& psi, const Fop& rho, std::size_t size_bound,
                                            std::uint64_t budget = kDefaultBudget, unsigned workers = 1);

/// psi1 & psi2 restricting LongestPath to unit lengths and bound max.
Formula longest_path_restriction();

struct HarnessMismatch {
    Structure structure;
    bool left = false;
    bool right = false;
};

struct HarnessReport {
    std::uint64_t checked = 0;
    std::uint64_t graphs = 0;          ///< distinct edge relations visited
    std::uint64_t domain_failures = 0; ///< generated structures failing the restriction sentence
    std::vector<HarnessMismatch> mismatches;

    bool passed() const noexcept { return mismatches.empty() && domain_failures == 0; }
};

/// For every unit-length LongestPath structure of size 2..max_size (L exactly
/// {(x,y,0) : E(x,y)}, K the bits of max, every s and t): the restriction
/// sentence holds and longest_path agrees with hp_two_points on the
/// <E, s, t> reduct.
HarnessReport longest_path_harness(std::size_t max_size = 3, unsigned workers = 1);

/// Directed problems with an undirected counterpart.
std::vector<std::string> directed_problems();

/// psi_sym = forall x y (E(x,y) -> E(y,x)).
Formula symmetry_sentence();

/// For every symmetric structure of size 2..max_size: the directed decider
/// agrees with the undirected one.
HarnessReport directed_version_harness(const std::string& directed, std::size_t max_size = 4,
                                       unsigned workers = 1);

/// For every structure A of size 2..size_bound: A in S iff rho(A) in S_n,
/// rho = autoreduction(p, n). Images with at most n elements count as
/// domain failures.
HarnessReport autoreduction_harness(const std::string& p, std::size_t n, std::size_t size_bound = 3,
                                    unsigned workers = 1);

struct SampleOptions {
    std::size_t exhaustive_bound = 2;  ///< every structure of size 2..bound
    std::size_t samples = 0;           ///< plus this many of size sample_size
    std::size_t sample_size = 3;
    std::uint64_t seed = 0;
    std::uint64_t budget = kDefaultBudget;  ///< per eval_so call
    unsigned workers = 1;
};

/// eval_so of the problem's second-order definition against its decider.
/// Samples are drawn uniformly with replacement from one mt19937_64 stream.
/// Throws PreconditionViolation for a problem without a definition.
HarnessReport definition_harness(const std::string& p, const SampleOptions& options);

}  // namespace fopkit
