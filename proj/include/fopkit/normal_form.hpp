#pragma once

#include <string>
#include <vector>

#include "fopkit/formula.hpp"

namespace fopkit {

using Clause = std::vector<Formula>;     ///< disjunction of literals
using Implicant = std::vector<Formula>;  ///< conjunction of literals

/// Negation normal form: no ->/<->, negations only on atoms. Quantifiers
/// (first- and second-order) are dualized when a negation passes them.
Formula to_nnf(const Formula& f);

/// Clausal CNF/DNF of a quantifier-free formula by distribution.
///
/// No auxiliary variables are introduced, so the output can be exponential
/// in the input. Duplicate literals, duplicate clauses and clauses holding a
/// literal together with its complement are removed.
std::vector<Clause> to_cnf(const Formula& quantifier_free);
std::vector<Implicant> to_dnf(const Formula& quantifier_free);

Formula cnf_formula(const std::vector<Clause>& clauses);
Formula dnf_formula(const std::vector<Implicant>& implicants);

/// Negate a literal, removing a double negation.
Formula complement(const Formula& literal);

/// forall x1..xm theta with theta in CNF.
struct PrenexUniversal {
    std::vector<std::string> variables;
    std::vector<Clause> clauses;
    Formula matrix;        ///< cnf_formula(clauses)
    std::size_t r = 0;     ///< least r with matrix in cnf_r

    Formula sentence() const;
};

/// Prenex a universal first-order sentence. Bound variables are renamed
/// apart with the scheme x, x_0, x_1, ...; existential quantifiers whose
/// variables do not occur free in their scope are dropped.
/// Throws Error(NotUniversal) when an essential existential quantifier (or a
/// second-order quantifier) remains after negation normalization.
PrenexUniversal to_prenex_universal(const Formula& f);

}  // namespace fopkit
