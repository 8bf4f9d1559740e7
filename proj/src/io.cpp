#include "fopkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fopkit/error.hpp"

namespace fopkit {

namespace {

struct Token {
    enum class Kind { Open, Close, LBrace, RBrace, Semi, Comma, Word, End } kind;
    std::string text;
    SourceSpan span;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](char c) {
        ++i;
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(text[i]);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(c);
            continue;
        }
        SourceSpan span{i, i + 1, line, col};
        Token::Kind kind = Token::Kind::Word;
        switch (c) {
            case '(': kind = Token::Kind::Open; break;
            case ')': kind = Token::Kind::Close; break;
            case '{': kind = Token::Kind::LBrace; break;
            case '}': kind = Token::Kind::RBrace; break;
            case ';': kind = Token::Kind::Semi; break;
            case ',': kind = Token::Kind::Comma; break;
            default: break;
        }
        if (kind != Token::Kind::Word) {
            out.push_back({kind, std::string(1, c), span});
            advance(c);
            continue;
        }
        std::size_t start = i;
        while (i < text.size()) {
            char d = text[i];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '#' ||
                std::string_view("(){};,").find(d) != std::string_view::npos)
                break;
            advance(d);
        }
        span.end = i;
        out.push_back({Token::Kind::Word, std::string(text.substr(start, i - start)), span});
    }
    out.push_back({Token::Kind::End, "", SourceSpan{text.size(), text.size(), line, col}});
    return out;
}

bool is_numeral(std::string_view w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

SourceSpan join(const SourceSpan& a, const SourceSpan& b) { return {a.begin, b.end, a.line, a.column}; }

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != Token::Kind::End) ++pos_;
        return t;
    }
    bool at(Token::Kind k) const { return peek().kind == k; }
    bool at_word(std::string_view w) const { return at(Token::Kind::Word) && peek().text == w; }

    [[noreturn]] void fail(ErrorKind kind, const std::string& msg, const SourceSpan& span) const {
        throw ParseError(kind, msg, span);
    }

    const Token& expect(Token::Kind k, const char* what) {
        if (!at(k)) fail(ErrorKind::Syntax, std::string("expected ") + what, peek().span);
        return next();
    }
    const Token& expect_word(std::string_view w) {
        if (!at_word(w)) fail(ErrorKind::Syntax, "expected '" + std::string(w) + "'", peek().span);
        return next();
    }

    std::size_t numeral(const Token& t) const {
        if (t.kind != Token::Kind::Word || !is_numeral(t.text)) fail(ErrorKind::Syntax, "expected a number", t.span);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || v > 0xffffffffu) fail(ErrorKind::Syntax, "number too large", t.span);
        return static_cast<std::size_t>(v);
    }

    Formula formula(const Vocabulary& voc) {
        std::vector<RelationSymbol> so_scope;
        return expr(voc, so_scope);
    }

    void expect_end() {
        if (!at(Token::Kind::End)) fail(ErrorKind::Syntax, "unexpected trailing input", peek().span);
    }

private:
    Term term(const Vocabulary& voc) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Word) fail(ErrorKind::Syntax, "expected a term", t.span);
        next();
        if (is_numeral(t.text)) return Term::number(static_cast<Element>(numeral(t)));
        if (t.text == "max") return Term::max();
        if (voc.constant_index(t.text)) return Term::constant(t.text);
        if (voc.relation_index(t.text)) fail(ErrorKind::Syntax, "relation " + t.text + " used as a term", t.span);
        if (!is_identifier(t.text) || is_reserved_name(t.text))
            fail(ErrorKind::Syntax, "'" + t.text + "' is not a term", t.span);
        return Term::variable(t.text);
    }

    std::string variable_name(const Vocabulary& voc) {
        const Token& t = expect(Token::Kind::Word, "a variable");
        if (!is_identifier(t.text) || is_reserved_name(t.text))
            fail(ErrorKind::Syntax, "'" + t.text + "' is not a variable name", t.span);
        if (voc.has_symbol(t.text))
            fail(ErrorKind::Syntax, "vocabulary symbol " + t.text + " used as a variable", t.span);
        return t.text;
    }

    Formula expr(const Vocabulary& voc, std::vector<RelationSymbol>& so_scope) {
        const Token& first = peek();
        if (first.kind == Token::Kind::Word) {
            next();
            if (first.text == "true") return fo::top();
            if (first.text == "false") return fo::bottom();
            fail(ErrorKind::Syntax, "expected a formula", first.span);
        }
        if (first.kind != Token::Kind::Open) fail(ErrorKind::Syntax, "expected a formula", first.span);
        next();
        const Token& head = expect(Token::Kind::Word, "an operator or relation symbol");
        const std::string& h = head.text;
        Formula out;
        if (h == "not") {
            out = fo::neg(expr(voc, so_scope));
        } else if (h == "and" || h == "or") {
            std::vector<Formula> parts;
            while (!at(Token::Kind::Close)) {
                if (at(Token::Kind::End)) fail(ErrorKind::Syntax, "unbalanced parenthesis", first.span);
                parts.push_back(expr(voc, so_scope));
            }
            out = h == "and" ? fo::conj(std::move(parts)) : fo::disj(std::move(parts));
        } else if (h == "->" || h == "<->") {
            Formula a = expr(voc, so_scope);
            Formula b = expr(voc, so_scope);
            out = h == "->" ? fo::implies(a, b) : fo::iff(a, b);
        } else if (h == "forall" || h == "exists") {
            std::vector<std::string> vars;
            if (at(Token::Kind::Open)) {
                const Token& open = next();
                while (!at(Token::Kind::Close)) {
                    if (at(Token::Kind::End)) fail(ErrorKind::Syntax, "unbalanced parenthesis", open.span);
                    vars.push_back(variable_name(voc));
                }
                next();
                if (vars.empty()) fail(ErrorKind::Syntax, "empty variable list", open.span);
            } else {
                vars.push_back(variable_name(voc));
            }
            Formula body = expr(voc, so_scope);
            out = h == "forall" ? fo::forall(vars, body) : fo::exists(vars, body);
        } else if (h == "forall2" || h == "exists2") {
            expect(Token::Kind::Open, "'(' before the relation variable");
            const Token& name = expect(Token::Kind::Word, "a relation variable");
            if (!is_identifier(name.text) || is_reserved_name(name.text))
                fail(ErrorKind::Syntax, "'" + name.text + "' is not a relation name", name.span);
            if (voc.has_symbol(name.text))
                fail(ErrorKind::Syntax, "relation variable " + name.text + " shadows a vocabulary symbol",
                     name.span);
            std::size_t arity = numeral(next());
            if (arity == 0) fail(ErrorKind::ArityMismatch, "relation variables need arity >= 1", name.span);
            expect(Token::Kind::Close, "')'");
            so_scope.push_back({name.text, arity});
            Formula body = expr(voc, so_scope);
            so_scope.pop_back();
            out = h == "forall2" ? fo::forall_so(name.text, arity, body) : fo::exists_so(name.text, arity, body);
        } else if (h == "=" || h == "<=" || h == "bit" || h == "BIT" || h == "suc") {
            std::vector<Term> args;
            while (!at(Token::Kind::Close) && !at(Token::Kind::End)) args.push_back(term(voc));
            if (args.size() != 2)
                fail(ErrorKind::ArityMismatch, "'" + h + "' takes 2 arguments", join(first.span, peek().span));
            Predicate p = h == "=" ? Predicate::Equal
                          : h == "<=" ? Predicate::LessEqual
                          : h == "suc" ? Predicate::Successor
                                       : Predicate::Bit;
            out = fo::numeric_atom(p, args[0], args[1]);
        } else {
            std::optional<std::size_t> arity;
            for (auto it = so_scope.rbegin(); it != so_scope.rend() && !arity; ++it)
                if (it->name == h) arity = it->arity;
            if (!arity) {
                if (auto r = voc.relation_index(h)) arity = voc.relations()[*r].arity;
            }
            if (!arity) {
                if (is_identifier(h) && !is_reserved_name(h))
                    fail(ErrorKind::UnknownSymbol, "unknown relation symbol " + h, head.span);
                fail(ErrorKind::Syntax, "unexpected '" + h + "'", head.span);
            }
            std::vector<Term> args;
            while (!at(Token::Kind::Close) && !at(Token::Kind::End)) args.push_back(term(voc));
            if (args.size() != *arity)
                fail(ErrorKind::ArityMismatch,
                     "relation " + h + " has arity " + std::to_string(*arity) + ", got " +
                         std::to_string(args.size()) + " arguments",
                     join(first.span, peek().span));
            out = fo::atom(h, std::move(args));
        }
        if (!at(Token::Kind::Close)) fail(ErrorKind::Syntax, "expected ')'", peek().span);
        next();
        return out;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::pair<std::string, std::string> key_value(const Parser& p, const Token& t) {
    auto eq = t.text.find('=');
    if (t.kind != Token::Kind::Word || eq == std::string::npos || eq == 0 || eq + 1 == t.text.size())
        p.fail(ErrorKind::Syntax, "expected key=value", t.span);
    return {t.text.substr(0, eq), t.text.substr(eq + 1)};
}

std::size_t number_value(const Parser& p, const Token& t, const std::string& v) {
    Token tmp = t;
    tmp.text = v;
    return p.numeral(tmp);
}

}  // namespace

VocabularyRegistry::VocabularyRegistry() {
    for (const auto& v : vocabularies::builtins()) add(v);
}

void VocabularyRegistry::add(const Vocabulary& vocabulary) { table_[vocabulary.name()] = vocabulary; }

const Vocabulary& VocabularyRegistry::get(const std::string& name) const {
    auto it = table_.find(name);
    if (it == table_.end()) throw Error(ErrorKind::UnknownVocabulary, "unknown vocabulary " + name);
    return it->second;
}

std::vector<std::string> VocabularyRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, v] : table_) out.push_back(name);
    return out;
}

std::vector<Vocabulary> parse_vocabularies(std::string_view text) {
    Parser p(text);
    std::vector<Vocabulary> out;
    while (!p.at(Token::Kind::End)) {
        const Token& kw = p.expect_word("vocab");
        const Token& name = p.expect(Token::Kind::Word, "a vocabulary name");
        p.expect(Token::Kind::LBrace, "'{'");
        std::vector<RelationSymbol> rels;
        std::vector<std::string> consts;
        while (!p.at(Token::Kind::RBrace)) {
            const Token& sym = p.expect(Token::Kind::Word, "a symbol declaration");
            auto slash = sym.text.find('/');
            if (slash == std::string::npos) {
                consts.push_back(sym.text);
            } else {
                Token arity = sym;
                arity.text = sym.text.substr(slash + 1);
                rels.push_back({sym.text.substr(0, slash), p.numeral(arity)});
            }
            if (p.at(Token::Kind::Semi))
                p.next();
            else if (!p.at(Token::Kind::RBrace))
                p.fail(ErrorKind::Syntax, "expected ';' or '}'", p.peek().span);
        }
        const Token& close = p.next();
        try {
            out.emplace_back(name.text, rels, consts);
        } catch (const Error& e) {
            throw ParseError(e.kind(), e.what(), join(kw.span, close.span));
        }
    }
    return out;
}

std::string print_vocabulary(const Vocabulary& vocabulary) {
    std::string out = "vocab " + vocabulary.name() + " {";
    std::vector<std::string> parts;
    for (const auto& r : vocabulary.relations()) parts.push_back(r.name + "/" + std::to_string(r.arity));
    for (const auto& c : vocabulary.constants()) parts.push_back(c);
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : " ") + parts[i];
    return out + " }";
}

Formula parse_formula(std::string_view text, const Vocabulary& vocabulary) {
    Parser p(text);
    Formula f = p.formula(vocabulary);
    p.expect_end();
    return f;
}

std::string print_term(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Number: return std::to_string(t.value);
        case Term::Kind::Max: return "max";
        default: return t.name;
    }
}

namespace {

void print_into(const Formula& f, std::string& out) {
    auto list = [&](const char* head) {
        out += '(';
        out += head;
        for (const auto& c : f.children()) {
            out += ' ';
            print_into(c, out);
        }
        out += ')';
    };
    switch (f.kind()) {
        case NodeKind::True: out += "true"; return;
        case NodeKind::False: out += "false"; return;
        case NodeKind::Atom:
            out += '(';
            out += f.predicate() == Predicate::Relation ? f.symbol() : predicate_name(f.predicate());
            for (const auto& t : f.args()) out += ' ' + print_term(t);
            out += ')';
            return;
        case NodeKind::Not: list("not"); return;
        case NodeKind::And: list("and"); return;
        case NodeKind::Or: list("or"); return;
        case NodeKind::Implies: list("->"); return;
        case NodeKind::Iff: list("<->"); return;
        case NodeKind::Forall:
        case NodeKind::Exists: {
            out += f.kind() == NodeKind::Forall ? "(forall (" : "(exists (";
            for (std::size_t i = 0; i < f.variables().size(); ++i) out += (i ? " " : "") + f.variables()[i];
            out += ") ";
            print_into(f.body(), out);
            out += ')';
            return;
        }
        case NodeKind::ForallSO:
        case NodeKind::ExistsSO:
            out += f.kind() == NodeKind::ForallSO ? "(forall2 (" : "(exists2 (";
            out += f.symbol() + " " + std::to_string(f.so_arity()) + ") ";
            print_into(f.body(), out);
            out += ')';
            return;
    }
}

}  // namespace

std::string print_formula(const Formula& f) {
    std::string out;
    print_into(f, out);
    return out;
}

Structure parse_structure(std::string_view text, const VocabularyRegistry& registry) {
    Parser p(text);
    const Token& kw = p.expect_word("structure");
    std::optional<std::size_t> size;
    const Vocabulary* voc = nullptr;
    SourceSpan size_span = kw.span;
    while (p.at(Token::Kind::Word)) {
        const Token& t = p.next();
        auto [key, value] = key_value(p, t);
        if (key == "size") {
            size = number_value(p, t, value);
            size_span = t.span;
        } else if (key == "vocab") {
            if (!registry.contains(value)) p.fail(ErrorKind::UnknownVocabulary, "unknown vocabulary " + value, t.span);
            voc = &registry.get(value);
        } else {
            p.fail(ErrorKind::Syntax, "unknown attribute " + key, t.span);
        }
    }
    if (!size) p.fail(ErrorKind::Syntax, "missing size=", p.peek().span);
    if (!voc) p.fail(ErrorKind::Syntax, "missing vocab=", p.peek().span);
    if (*size < 2) p.fail(ErrorKind::OutOfUniverse, "universe size must exceed 1", size_span);
    std::size_t n = *size;
    Structure a(*voc, n);
    p.expect(Token::Kind::LBrace, "'{'");
    std::set<std::string> seen;
    auto element = [&](const Token& t) {
        std::size_t v = p.numeral(t);
        if (v >= n) p.fail(ErrorKind::OutOfUniverse, "element " + t.text + " outside the universe", t.span);
        return static_cast<Element>(v);
    };
    while (!p.at(Token::Kind::RBrace)) {
        const Token& sym = p.expect(Token::Kind::Word, "a symbol");
        if (!seen.insert(sym.text).second) p.fail(ErrorKind::Syntax, "symbol " + sym.text + " given twice", sym.span);
        p.expect_word("=");
        if (auto r = voc->relation_index(sym.text)) {
            std::size_t arity = voc->relations()[*r].arity;
            p.expect(Token::Kind::LBrace, "'{'");
            while (!p.at(Token::Kind::RBrace)) {
                const Token& open = p.expect(Token::Kind::Open, "'('");
                Tuple tuple;
                while (true) {
                    tuple.push_back(element(p.next()));
                    if (p.at(Token::Kind::Comma)) {
                        p.next();
                        continue;
                    }
                    break;
                }
                const Token& close = p.expect(Token::Kind::Close, "')'");
                if (tuple.size() != arity)
                    p.fail(ErrorKind::ArityMismatch,
                           "relation " + sym.text + " has arity " + std::to_string(arity), join(open.span, close.span));
                a.set(*r, tuple);
                if (p.at(Token::Kind::Comma))
                    p.next();
                else if (!p.at(Token::Kind::RBrace))
                    p.fail(ErrorKind::Syntax, "expected ',' or '}'", p.peek().span);
            }
            p.next();
        } else if (auto c = voc->constant_index(sym.text)) {
            a.set_constant(*c, element(p.next()));
        } else {
            p.fail(ErrorKind::UnknownSymbol, "symbol " + sym.text + " is not in vocabulary " + voc->name(), sym.span);
        }
        if (p.at(Token::Kind::Semi))
            p.next();
        else if (!p.at(Token::Kind::RBrace))
            p.fail(ErrorKind::Syntax, "expected ';' or '}'", p.peek().span);
    }
    const Token& close = p.next();
    for (const auto& c : voc->constants())
        if (!seen.count(c)) p.fail(ErrorKind::MissingConstant, "constant " + c + " has no value", close.span);
    p.expect_end();
    return a;
}

std::string print_structure(const Structure& a) {
    const Vocabulary& voc = a.vocabulary();
    std::string out = "structure size=" + std::to_string(a.size()) + " vocab=" + voc.name() + " {";
    std::vector<std::string> parts;
    for (std::size_t r = 0; r < voc.relations().size(); ++r) {
        std::string s = voc.relations()[r].name + " = {";
        bool first = true;
        for (const auto& t : a.tuples(r)) {
            s += first ? "(" : ",(";
            first = false;
            for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
            s += ')';
        }
        parts.push_back(s + "}");
    }
    for (std::size_t c = 0; c < voc.constants().size(); ++c)
        parts.push_back(voc.constants()[c] + " = " + std::to_string(a.constant(c)));
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : " ") + parts[i];
    return out + " }";
}

FoQuery parse_fop(std::string_view text, const VocabularyRegistry& registry) {
    Parser p(text);
    p.expect_word("fop");
    const Token& name = p.expect(Token::Kind::Word, "a fop name");
    FoQuery q;
    q.name = name.text;
    bool have_from = false, have_to = false, have_arity = false;
    while (p.at(Token::Kind::Word) && p.peek().text.find('=') != std::string::npos && p.peek().text != "=") {
        const Token& t = p.next();
        auto [key, value] = key_value(p, t);
        if (key == "arity") {
            q.arity = number_value(p, t, value);
            if (q.arity == 0) p.fail(ErrorKind::Syntax, "arity must be positive", t.span);
            have_arity = true;
        } else if (key == "from" || key == "to") {
            if (!registry.contains(value)) p.fail(ErrorKind::UnknownVocabulary, "unknown vocabulary " + value, t.span);
            (key == "from" ? q.source : q.target) = registry.get(value);
            (key == "from" ? have_from : have_to) = true;
        } else if (key == "threshold") {
            q.threshold = number_value(p, t, value);
        } else {
            p.fail(ErrorKind::Syntax, "unknown attribute " + key, t.span);
        }
    }
    if (!have_arity || !have_from || !have_to)
        p.fail(ErrorKind::Syntax, "fop header needs arity=, from= and to=", p.peek().span);
    std::vector<std::optional<Formula>> rels(q.target.relations().size());
    std::vector<std::optional<Formula>> consts(q.target.constants().size());
    while (!p.at(Token::Kind::End)) {
        const Token& sym = p.expect(Token::Kind::Word, "a target symbol");
        p.expect_word("=");
        const Token& start = p.peek();
        Formula f = p.formula(q.source);
        std::vector<std::string> allowed;
        std::optional<Formula>* slot = nullptr;
        if (auto r = q.target.relation_index(sym.text)) {
            slot = &rels[*r];
            allowed = q.relation_variables(*r);
        } else if (auto c = q.target.constant_index(sym.text)) {
            slot = &consts[*c];
            allowed = q.constant_variables();
        } else {
            p.fail(ErrorKind::UnknownSymbol, "symbol " + sym.text + " is not in vocabulary " + q.target.name(),
                   sym.span);
        }
        if (*slot) p.fail(ErrorKind::Syntax, "symbol " + sym.text + " defined twice", sym.span);
        for (const auto& v : free_variables(f))
            if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
                p.fail(ErrorKind::UnboundVariable, "variable " + v + " is not among x1..x" + std::to_string(allowed.size()),
                       start.span);
        *slot = f;
    }
    for (std::size_t r = 0; r < rels.size(); ++r) {
        if (!rels[r]) p.fail(ErrorKind::Syntax, "no formula for " + q.target.relations()[r].name, p.peek().span);
        q.relation_formulas.push_back(*rels[r]);
    }
    for (std::size_t c = 0; c < consts.size(); ++c) {
        if (!consts[c]) p.fail(ErrorKind::Syntax, "no formula for " + q.target.constants()[c], p.peek().span);
        q.constant_formulas.push_back(*consts[c]);
    }
    return q;
}

std::string print_fop(const FoQuery& q) {
    std::string out = "fop " + q.name + " arity=" + std::to_string(q.arity) + " from=" + q.source.name() +
                      " to=" + q.target.name();
    if (q.threshold) out += " threshold=" + std::to_string(*q.threshold);
    out += '\n';
    for (std::size_t r = 0; r < q.relation_formulas.size(); ++r)
        out += q.target.relations()[r].name + " = " + print_formula(q.relation_formulas[r]) + '\n';
    for (std::size_t c = 0; c < q.constant_formulas.size(); ++c)
        out += q.target.constants()[c] + " = " + print_formula(q.constant_formulas[c]) + '\n';
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Syntax, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fopkit
