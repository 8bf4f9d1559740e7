#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fopkit/classify.hpp"
#include "fopkit/eval.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"

namespace fopkit {

/// A k-ary first-order query I = <phi_1..phi_r, psi_1..psi_s> from
/// STRUC(source) to STRUC(target). phi_i speaks about the free variables
/// x1..x{k*a_i}, psi_j about x1..xk; element j of the image universe is the
/// k-tuple with tuple_index j.
struct FoQuery {
    std::string name;
    Vocabulary source;
    Vocabulary target;
    std::size_t arity = 1;
    std::vector<Formula> relation_formulas;  ///< one per target relation
    std::vector<Formula> constant_formulas;  ///< one per target constant
    std::optional<std::size_t> threshold;    ///< padding fops: images exceed this size

    /// Name of the i-th (0-based) free variable: x1, x2, ...
    static std::string variable(std::size_t i);
    std::vector<std::string> relation_variables(std::size_t relation) const;
    std::vector<std::string> constant_variables() const;
};

/// I(A): universe |A|^k. Throws ConstantNotUnique when some psi_j is not
/// satisfied by exactly one k-tuple, VocabularyMismatch on a foreign A.
Structure apply(const FoQuery& q, const Structure& a);

struct FopViolation {
    enum class Kind { NotProjective, FreeVariable, Overlap } kind = Kind::NotProjective;
    std::string symbol;
    std::size_t size = 0;                ///< Overlap: universe size
    std::vector<Element> variables;      ///< Overlap: values of x1, x2, ...
    std::vector<Element> constants;      ///< Overlap: source constants
    std::size_t first = 0, second = 0;  ///< Overlap: guard positions (0 = alpha0 when present)
    std::string message;
};

struct FopValidation {
    std::size_t bound = 0;
    std::vector<FopViolation> violations;

    bool valid() const noexcept { return violations.empty(); }
};

inline constexpr std::size_t kDefaultExclusivityBound = 6;

/// Checks projective shape syntactically and pairwise exclusivity of the
/// guards by evaluation on every universe size 2..bound, every assignment of
/// the free variables and every interpretation of the source constants.
/// Exclusivity above the bound is not certified.
FopValidation validate_fop(const FoQuery& q, std::size_t bound = kDefaultExclusivityBound);

/// A query that passed validate_fop, with its projective decomposition.
class Fop {
public:
    /// Throws NotProjective with the first violation.
    explicit Fop(FoQuery q, std::size_t bound = kDefaultExclusivityBound);

    const FoQuery& query() const noexcept { return query_; }
    const ProjectiveForm& relation_form(std::size_t i) const { return relation_forms_.at(i); }
    const ProjectiveForm& constant_form(std::size_t i) const { return constant_forms_.at(i); }

private:
    FoQuery query_;
    std::vector<ProjectiveForm> relation_forms_;
    std::vector<ProjectiveForm> constant_forms_;
};

/// One mutually exclusive case of a pulled-back literal: a numeric guard,
/// alone or together with a single source literal.
struct PullbackCase {
    Formula guard;
    std::optional<Formula> literal;

    Formula formula() const;
};

struct Pullback {
    Formula mu;
    std::vector<PullbackCase> cases;
    std::vector<std::string> variables;  ///< source variables, in order
};

/// Source variables standing for the target variable u: u itself when
/// k = 1, otherwise u_1..u_k.
std::vector<std::string> expand_variable(const std::string& u, std::size_t k);

/// mu over the source vocabulary with rho(B) |= eta(a) iff B |= mu(a) for
/// every B, where a k-tuple argument a for a target variable u is read as
/// the values of expand_variable(u). eta is R(u..), its negation, c = u,
/// u = c or the negation of one of these, with variable arguments.
/// Throws NotLiteral otherwise.
Pullback pullback(const Fop& rho, const Formula& eta);

/// Every literal shape over a vocabulary: R applied to each pattern of
/// variables u1, u2, ... (repetitions included) and c = u1, each positive
/// and negated.
std::vector<Formula> target_literal_forms(const Vocabulary& vocabulary);

struct PullbackMismatch {
    Formula literal;
    Structure source;
    Assignment assignment;   ///< image elements for the literal's variables
    bool image_value = false;
    bool pulled_value = false;
};

struct PullbackCheck {
    std::vector<Formula> literals;
    std::uint64_t structures = 0;
    std::uint64_t checked = 0;   ///< (structure, literal, assignment) triples
    std::optional<PullbackMismatch> mismatch;  ///< first in enumeration order

    bool sound() const noexcept { return !mismatch; }
};

/// Compares rho(B) |= eta(a) with B |= mu(a) for every literal form, every
/// source B with 2 <= |B| <= size_bound and every assignment. Throws
/// BudgetExceeded when there are more than `budget` source structures.
PullbackCheck check_pullback(const Fop& rho, std::size_t size_bound, std::uint64_t budget = kDefaultBudget,
                             unsigned workers = 1);

namespace fops {
FoQuery identity(const Vocabulary& vocabulary);

/// graph -> graph, k = 1: the automorphism of [n] exchanging 1 and max,
/// applied to E.
FoQuery swap_one_max();
}  // namespace fops

}  // namespace fopkit
