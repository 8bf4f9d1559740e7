#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fopkit/formula.hpp"

namespace fopkit {

enum class ClassKind {
    Literal,
    Clause,
    Implicant,
    CNF,          ///< CNF(k): at most k literals per clause
    cnf,          ///< cnf_k: at most k non-numeric literals per clause
    DNF,
    dnf,
    Numeric,
    Projective,
    UniversalFO,  ///< forall x1..xm theta, theta quantifier-free
    SigmaOneOne,  ///< existential second-order prefix over a first-order matrix
};

struct SyntacticClass {
    ClassKind kind = ClassKind::Literal;
    std::size_t k = 0;
    bool positive = true;  // Literal only
    bool numeric = false;  // Literal only

    static SyntacticClass literal(bool positive, bool numeric) {
        return {ClassKind::Literal, 0, positive, numeric};
    }
    static SyntacticClass of(ClassKind kind, std::size_t k = 0) { return {kind, k, true, false}; }

    bool operator==(const SyntacticClass&) const = default;
};

std::string to_string(const SyntacticClass& c);

/// Every syntactic class a formula belongs to. Width-parameterized classes
/// are reported through their least admissible k; `contains` answers the
/// membership question for any k.
struct Classification {
    struct LiteralInfo {
        bool positive = true;
        bool numeric = false;
    };

    std::optional<LiteralInfo> literal;
    bool clause = false;
    bool implicant = false;
    std::optional<std::size_t> cnf_width;
    std::optional<std::size_t> cnf_relational_width;
    std::optional<std::size_t> dnf_width;
    std::optional<std::size_t> dnf_relational_width;
    bool numeric = false;
    bool projective = false;
    bool universal_fo = false;
    bool sigma_one_one = false;

    bool contains(const SyntacticClass& c) const;

    /// The classes with their least k, in ClassKind order.
    std::vector<SyntacticClass> classes() const;
};

Classification classify(const Formula& f);

/// A literal over a relation symbol (positive atom or its negation).
bool is_relational_literal(const Formula& f);
bool is_literal(const Formula& f);

/// The disjuncts of a projective formula
///   alpha0 | (alpha1 & lambda1) | ... | (alpha_e & lambda_e)
/// with every alpha numeric and every lambda a relational literal.
struct GuardedLiteral {
    Formula guard;
    Formula literal;
};

struct ProjectiveForm {
    std::optional<Formula> numeric_part;
    std::vector<GuardedLiteral> guarded;

    /// alpha0 and the guards in disjunct order.
    std::vector<Formula> guards() const;
};

std::optional<ProjectiveForm> projective_form(const Formula& f);

}  // namespace fopkit
