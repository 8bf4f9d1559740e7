#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fopkit {

struct RelationSymbol {
    std::string name;
    std::size_t arity = 1;

    bool operator==(const RelationSymbol&) const = default;
};

/// A relational vocabulary <R1..Rr, c1..cs>. The numeric symbols
/// (=, <=, bit, suc, 0, max) are implicit and may not be redeclared.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::string name, std::vector<RelationSymbol> relations,
               std::vector<std::string> constants);

    const std::string& name() const noexcept { return name_; }
    const std::vector<RelationSymbol>& relations() const noexcept { return relations_; }
    const std::vector<std::string>& constants() const noexcept { return constants_; }

    std::optional<std::size_t> relation_index(std::string_view name) const;
    std::optional<std::size_t> constant_index(std::string_view name) const;
    bool has_symbol(std::string_view name) const;

    /// Copy under a different registry name; symbols unchanged.
    Vocabulary renamed(std::string name) const;

    /// Signature equality; the registry name is a label and is ignored.
    bool operator==(const Vocabulary& other) const {
        return relations_ == other.relations_ && constants_ == other.constants_;
    }

private:
    std::string name_;
    std::vector<RelationSymbol> relations_;
    std::vector<std::string> constants_;
};

/// True for names the formula language reserves (numeric symbols and keywords).
bool is_reserved_name(std::string_view name);

/// Identifier syntax shared by variables, symbols and constants.
bool is_identifier(std::string_view name);

namespace vocabularies {
Vocabulary graph();         ///< <E/2>
Vocabulary st_graph();      ///< <E/2; s; t>
Vocabulary alt_graph();     ///< <E/2; U/1; s; t>
Vocabulary three_dm();      ///< <M/3>
Vocabulary longest_path();  ///< <L/3; E/2; K/1; s; t>
std::vector<Vocabulary> builtins();
}  // namespace vocabularies

}  // namespace fopkit
