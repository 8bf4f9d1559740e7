#include "fopkit/vocabulary.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "fopkit/error.hpp"

namespace fopkit {

namespace {

constexpr std::array<std::string_view, 17> kReserved = {
    "=",   "<=",    "bit",    "BIT",    "suc",     "0",    "max", "true",  "false",
    "not", "and",   "or",     "forall", "exists",  "forall2", "exists2", "structure"};

}  // namespace

bool is_reserved_name(std::string_view name) {
    return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto first = static_cast<unsigned char>(name.front());
    if (!std::isalpha(first) && first != '_') return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_' || c == '\'';
    });
}

Vocabulary::Vocabulary(std::string name, std::vector<RelationSymbol> relations,
                       std::vector<std::string> constants)
    : name_(std::move(name)), relations_(std::move(relations)), constants_(std::move(constants)) {
    std::set<std::string> seen;
    auto admit = [&](const std::string& symbol) {
        if (!is_identifier(symbol))
            throw Error(ErrorKind::InvalidVocabulary, "'" + symbol + "' is not an identifier");
        if (is_reserved_name(symbol))
            throw Error(ErrorKind::InvalidVocabulary,
                        "'" + symbol + "' collides with a reserved numeric symbol or keyword");
        if (!seen.insert(symbol).second)
            throw Error(ErrorKind::InvalidVocabulary, "duplicate symbol '" + symbol + "'");
    };
    for (const auto& r : relations_) {
        admit(r.name);
        if (r.arity == 0)
            throw Error(ErrorKind::InvalidVocabulary, "relation '" + r.name + "' has arity 0");
    }
    for (const auto& c : constants_) admit(c);
}

std::optional<std::size_t> Vocabulary::relation_index(std::string_view name) const {
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> Vocabulary::constant_index(std::string_view name) const {
    for (std::size_t i = 0; i < constants_.size(); ++i)
        if (constants_[i] == name) return i;
    return std::nullopt;
}

bool Vocabulary::has_symbol(std::string_view name) const {
    return relation_index(name) || constant_index(name);
}

Vocabulary Vocabulary::renamed(std::string name) const {
    Vocabulary copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

namespace vocabularies {

Vocabulary graph() { return Vocabulary("graph", {{"E", 2}}, {}); }
Vocabulary st_graph() { return Vocabulary("st-graph", {{"E", 2}}, {"s", "t"}); }
Vocabulary alt_graph() { return Vocabulary("alt-graph", {{"E", 2}, {"U", 1}}, {"s", "t"}); }
Vocabulary three_dm() { return Vocabulary("3dm", {{"M", 3}}, {}); }
Vocabulary longest_path() {
    return Vocabulary("lp", {{"L", 3}, {"E", 2}, {"K", 1}}, {"s", "t"});
}

std::vector<Vocabulary> builtins() {
    return {graph(), st_graph(), alt_graph(), three_dm(), longest_path()};
}

}  // namespace vocabularies

}  // namespace fopkit
