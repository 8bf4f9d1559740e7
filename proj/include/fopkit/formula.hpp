#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fopkit {

/// Universe elements; a structure of size n has universe {0, ..., n-1}.
using Element = std::uint32_t;

struct Term {
    enum class Kind : std::uint8_t { Variable, Constant, Number, Max };

    Kind kind = Kind::Variable;
    std::string name;   // Variable and Constant
    Element value = 0;  // Number

    static Term variable(std::string name) { return {Kind::Variable, std::move(name), 0}; }
    static Term constant(std::string name) { return {Kind::Constant, std::move(name), 0}; }
    static Term number(Element value) { return {Kind::Number, {}, value}; }
    static Term zero() { return number(0); }
    static Term max() { return {Kind::Max, {}, 0}; }

    bool is_variable() const noexcept { return kind == Kind::Variable; }
    bool operator==(const Term&) const = default;
};

enum class Predicate : std::uint8_t { Relation, Equal, LessEqual, Bit, Successor };

inline bool is_numeric(Predicate p) noexcept { return p != Predicate::Relation; }
const char* predicate_name(Predicate p);

enum class NodeKind : std::uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
    ForallSO,
    ExistsSO,
};

/// Immutable formula tree with shared subterms. Cheap to copy.
///
/// And/Or are n-ary (zero children allowed: the empty conjunction is true,
/// the empty disjunction false). First-order quantifiers bind a non-empty
/// variable list; second-order quantifiers bind one relation variable of a
/// declared arity. Atoms whose predicate is `Relation` name either a
/// vocabulary relation or a relation variable bound by an enclosing
/// second-order quantifier.
class Formula {
public:
    Formula();  // true

    NodeKind kind() const noexcept;
    Predicate predicate() const noexcept;
    const std::string& symbol() const noexcept;
    const std::vector<Term>& args() const noexcept;
    const std::vector<Formula>& children() const noexcept;
    const Formula& child(std::size_t i) const { return children().at(i); }
    const Formula& body() const { return children().at(0); }
    const std::vector<std::string>& variables() const noexcept;
    std::size_t so_arity() const noexcept;

    bool is_atom() const noexcept { return kind() == NodeKind::Atom; }
    bool is_quantifier() const noexcept;
    bool is_so_quantifier() const noexcept;

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

    struct Node;

private:
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend Formula make_formula(Node node);
};

namespace fo {

Formula top();
Formula bottom();
Formula atom(std::string relation, std::vector<Term> args);
Formula eq(Term a, Term b);
Formula le(Term a, Term b);
Formula bit(Term a, Term b);
Formula suc(Term a, Term b);
Formula numeric_atom(Predicate p, Term a, Term b);
Formula neg(Formula f);
Formula conj(std::vector<Formula> parts);
Formula disj(std::vector<Formula> parts);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula forall(std::vector<std::string> vars, Formula body);
Formula exists(std::vector<std::string> vars, Formula body);
Formula forall_so(std::string relation, std::size_t arity, Formula body);
Formula exists_so(std::string relation, std::size_t arity, Formula body);

/// Conjunction/disjunction that collapses 0 and 1 operands.
Formula conj_flat(std::vector<Formula> parts);
Formula disj_flat(std::vector<Formula> parts);

inline Term var(std::string name) { return Term::variable(std::move(name)); }
inline Term num(Element v) { return Term::number(v); }

}  // namespace fo

/// Free first-order variables in first-use (left-to-right) order.
std::vector<std::string> free_variables(const Formula& f);

/// All variable names occurring anywhere (free or bound).
std::vector<std::string> all_variables(const Formula& f);

bool is_quantifier_free(const Formula& f);
bool is_first_order(const Formula& f);
bool is_sentence(const Formula& f);

/// True iff no atom names a relation (vocabulary or second-order variable).
bool mentions_no_relation(const Formula& f);

/// Capture-avoiding substitution of terms for free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement);

}  // namespace fopkit
