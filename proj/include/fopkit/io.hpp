#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fopkit/fop.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"

namespace fopkit {

/// Vocabularies by name; starts with the builtins.
class VocabularyRegistry {
public:
    VocabularyRegistry();

    /// Adds or replaces.
    void add(const Vocabulary& vocabulary);
    /// Throws Error(UnknownVocabulary).
    const Vocabulary& get(const std::string& name) const;
    bool contains(const std::string& name) const { return table_.count(name) != 0; }
    std::vector<std::string> names() const;

private:
    std::map<std::string, Vocabulary> table_;
};

/// `vocab NAME { R/2; c; ... }` blocks; `#` starts a line comment.
std::vector<Vocabulary> parse_vocabularies(std::string_view text);
std::string print_vocabulary(const Vocabulary& vocabulary);

/// S-expression formula syntax. Identifiers naming a vocabulary constant
/// are constants, other identifiers are variables; numerals and `max` are
/// numeric constants.
Formula parse_formula(std::string_view text, const Vocabulary& vocabulary);
std::string print_formula(const Formula& f);
std::string print_term(const Term& t);

/// `structure size=N vocab=NAME { R = {(..),..}; c = v }`.
Structure parse_structure(std::string_view text,
                          const VocabularyRegistry& registry = VocabularyRegistry());
std::string print_structure(const Structure& a);

/// Header `fop NAME arity=K from=VOC to=VOC [threshold=N]`, then one
/// `SYMBOL = FORMULA` per target symbol in any order.
FoQuery parse_fop(std::string_view text, const VocabularyRegistry& registry = VocabularyRegistry());
std::string print_fop(const FoQuery& q);

/// Reads a whole file; throws Error(Syntax) when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace fopkit
