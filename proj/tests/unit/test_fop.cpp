#include <doctest.h>

#include "fopkit/error.hpp"
#include "fopkit/fop.hpp"
#include "fopkit/io.hpp"
#include "fopkit/problems.hpp"
#include "support.hpp"

using namespace fopkit;
using testing::reference_eval;

namespace {

const Vocabulary kGraph = vocabularies::graph();
const Vocabulary kSt = vocabularies::st_graph();

FoQuery graph_query(const std::string& e_formula, std::size_t arity = 1) {
    return parse_fop("fop q arity=" + std::to_string(arity) + " from=graph to=graph\nE = " + e_formula + "\n");
}

}  // namespace

TEST_SUITE("fop") {

TEST_CASE("the identity fop maps every structure to itself") {
    std::mt19937_64 rng(4);
    for (const auto& voc : {kSt, vocabularies::alt_graph(), vocabularies::three_dm()}) {
        FoQuery id = fops::identity(voc);
        for (int i = 0; i < 30; ++i) {
            Structure a = testing::random_structure(rng, voc, 2 + i % 3);
            CHECK(apply(id, a) == a);
        }
    }
}

TEST_CASE("the swap fop exchanges 1 and max") {
    Structure a = parse_structure("structure size=3 vocab=graph { E = {(0,1)} }");
    Structure b = apply(fops::swap_one_max(), a);
    CHECK(b == parse_structure("structure size=3 vocab=graph { E = {(0,2)} }"));
    std::mt19937_64 rng(6);
    for (std::size_t n = 2; n <= 5; ++n)
        for (int i = 0; i < 10; ++i) {
            Structure g = testing::random_structure(rng, kGraph, n);
            auto pi = [n](Element v) -> Element { return v == 1 ? static_cast<Element>(n - 1) : v == n - 1 ? 1 : v; };
            Structure expected(kGraph, n);
            for (const auto& t : g.tuples(0)) expected.set(0, {pi(t[0]), pi(t[1])});
            CHECK(apply(fops::swap_one_max(), g) == expected);
        }
}

TEST_CASE("images flatten k-tuples in base n") {
    FoQuery q = graph_query("(or (and (= x1 x4) (E x2 x3)) (and (not (= x1 x4)) (<= x2 x3) (not (E x1 x3))))", 2);
    std::mt19937_64 rng(12);
    for (std::size_t n = 2; n <= 3; ++n)
        for (int i = 0; i < 5; ++i) {
            Structure a = testing::random_structure(rng, kGraph, n);
            Structure b = apply(q, a);
            REQUIRE(b.size() == n * n);
            for (Element u = 0; u < b.size(); ++u)
                for (Element v = 0; v < b.size(); ++v) {
                    Assignment asg{{"x1", u / n}, {"x2", u % n}, {"x3", v / n}, {"x4", v % n}};
                    CHECK(b.holds(0, {u, v}) == reference_eval(a, q.relation_formulas[0], asg));
                }
        }
}

TEST_CASE("the AltReach padding fop puts the input in block 0") {
    Fop rho = autoreduction("altreach", 3);
    CHECK(rho.query().arity == 2);
    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i) {
        Structure a = testing::random_structure(rng, vocabularies::alt_graph(), 2);
        Structure b = apply(rho.query(), a);
        REQUIRE(b.size() == 4);
        // element (p, v) is p*2 + v; the padded copy of v is (0, v) = v
        Structure expected(vocabularies::alt_graph(), 4);
        for (const auto& t : a.tuples(a.relation("E"))) expected.set(expected.relation("E"), {t[0], t[1]});
        for (const auto& t : a.tuples(a.relation("U"))) expected.set(expected.relation("U"), {t[0]});
        expected.set_constant("s", a.constant("s"));
        expected.set_constant("t", a.constant("t"));
        CHECK(b == expected);
    }
}

TEST_CASE("constants must be defined by exactly one tuple") {
    FoQuery q = parse_fop("fop c arity=1 from=st-graph to=st-graph\nE = (E x1 x2)\ns = (= x1 x1)\nt = (= x1 t)\n");
    try {
        apply(q, Structure(kSt, 3));
        FAIL("expected ConstantNotUnique");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConstantNotUnique);
    }
    FoQuery none = parse_fop("fop c arity=1 from=st-graph to=st-graph\nE = (E x1 x2)\ns = false\nt = (= x1 t)\n");
    CHECK_THROWS_AS(apply(none, Structure(kSt, 2)), Error);
}

TEST_CASE("validation examples") {
    FopValidation ok = validate_fop(graph_query("(or (and (= x1 0) (E x1 x2)) (and (not (= x1 0)) (= x1 max) (E x2 x1)))"));
    CHECK(ok.valid());

    FopValidation overlap = validate_fop(graph_query("(or (and (<= x1 x2) (E x1 x2)) (and (<= x2 x1) (E x2 x1)))"));
    REQUIRE_FALSE(overlap.valid());
    const FopViolation& v = overlap.violations.front();
    CHECK(v.kind == FopViolation::Kind::Overlap);
    CHECK(v.size == 2);
    CHECK(v.variables[0] == v.variables[1]);

    FopValidation conj = validate_fop(graph_query("(and (E x1 x2) (E x2 x1))"));
    REQUIRE_FALSE(conj.valid());
    CHECK(conj.violations.front().kind == FopViolation::Kind::NotProjective);
    CHECK_THROWS_AS(Fop(graph_query("(and (E x1 x2) (E x2 x1))")), Error);

    CHECK(validate_fop(fops::swap_one_max(), 6).valid());
    for (const auto& c : catalog_fops(3)) CHECK(validate_fop(c.fop.query()).valid());
}

TEST_CASE("overlaps beyond the exclusivity bound are not seen") {
    // bit 1 of max is first set at n = 3
    FoQuery q = graph_query("(or (and (bit max 1) (E x1 x2)) (and (= x1 0) (E x2 x1)))");
    CHECK(validate_fop(q, 2).valid());
    CHECK_FALSE(validate_fop(q, 3).valid());
}

TEST_CASE("pullback examples") {
    Fop id(fops::identity(kGraph));
    Pullback p = pullback(id, parse_formula("(E u v)", kGraph));
    CHECK(p.mu == parse_formula("(E u v)", kGraph));
    CHECK(p.variables == std::vector<std::string>{"u", "v"});

    Fop never(graph_query("false"));
    Pullback neg = pullback(never, parse_formula("(not (E u v))", kGraph));
    Structure any(kGraph, 3);
    for (Element u = 0; u < 3; ++u)
        for (Element v = 0; v < 3; ++v) CHECK(eval_fo(any, neg.mu, {{"u", u}, {"v", v}}));
    Formula pos = pullback(never, parse_formula("(E u v)", kGraph)).mu;
    for (Element u = 0; u < 3; ++u)
        for (Element v = 0; v < 3; ++v) CHECK_FALSE(eval_fo(any, pos, {{"u", u}, {"v", v}}));

    CHECK(expand_variable("u", 1) == std::vector<std::string>{"u"});
    CHECK(expand_variable("u", 3) == std::vector<std::string>{"u_1", "u_2", "u_3"});
    CHECK_THROWS_AS(pullback(id, parse_formula("(and (E u v) (E v u))", kGraph)), Error);
    CHECK_THROWS_AS(pullback(id, parse_formula("(= u v)", kGraph)), Error);
}

TEST_CASE("pullback cases are a guard with at most one source literal") {
    Fop swap(fops::swap_one_max());
    Pullback p = pullback(swap, parse_formula("(E u v)", kGraph));
    CHECK(p.cases.size() == 9);
    for (const auto& c : p.cases) {
        CHECK(classify(c.guard).numeric);
        if (c.literal) CHECK(is_relational_literal(*c.literal));
    }
}

TEST_CASE("swap pullbacks agree with images on every graph of size at most 4") {
    Fop swap(fops::swap_one_max());
    for (const char* text : {"(E u v)", "(not (E u v))", "(E u u)", "(not (E u u))"}) {
        Formula eta = parse_formula(text, kGraph);
        Formula mu = pullback(swap, eta).mu;
        for (std::size_t n = 2; n <= 4; ++n)
            for (const Structure& b : StructureSpace(kGraph, n)) {
                Structure image = apply(swap.query(), b);
                for (const auto& asg : testing::all_assignments({"u", "v"}, n)) {
                    Assignment used = asg;
                    if (std::string(text).find('v') == std::string::npos) used.erase("v");
                    CHECK(reference_eval(image, eta, used) == reference_eval(b, mu, used));
                }
            }
    }
}

TEST_CASE("padding pullbacks read image elements as digit tuples") {
    Fop rho = autoreduction("reach", 3);
    Formula eta = parse_formula("(= s u)", kSt);
    Pullback p = pullback(rho, eta);
    CHECK(p.variables == std::vector<std::string>{"u_1", "u_2"});
    std::mt19937_64 rng(30);
    for (int i = 0; i < 30; ++i) {
        Structure b = testing::random_structure(rng, kSt, 3);
        Structure image = apply(rho.query(), b);
        for (Element u = 0; u < 9; ++u)
            CHECK(reference_eval(image, eta, {{"u", u}}) ==
                  reference_eval(b, p.mu, {{"u_1", u / 3}, {"u_2", u % 3}}));
    }
}

TEST_CASE("literal forms include repeated variables and constant equations") {
    auto forms = target_literal_forms(kSt);
    // E(u1,u1), E(u1,u2), s = u1, t = u1, each with its negation
    CHECK(forms.size() == 8);
    CHECK(target_literal_forms(vocabularies::three_dm()).size() == 10);
}

TEST_CASE("pullback check over the identity and swap fops") {
    PullbackCheck id = check_pullback(Fop(fops::identity(kSt)), 3);
    CHECK(id.sound());
    CHECK(id.structures == 64 + 4608);
    PullbackCheck swap = check_pullback(Fop(fops::swap_one_max()), 4, kDefaultBudget, 3);
    CHECK(swap.sound());
    CHECK(swap.structures == 16 + 512 + 65536);
    CHECK_THROWS_AS(check_pullback(Fop(fops::identity(kSt)), 3, 1000), BudgetExceeded);
}

}  // TEST_SUITE
