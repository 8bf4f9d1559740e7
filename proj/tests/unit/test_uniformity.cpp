#include <doctest.h>

#include "fopkit/enumerate.hpp"
#include "fopkit/error.hpp"
#include "fopkit/io.hpp"
#include "fopkit/uniformity.hpp"
#include "support.hpp"

using namespace fopkit;

namespace {

const Vocabulary kGraph = vocabularies::graph();
const Vocabulary kSt = vocabularies::st_graph();

std::uint64_t choose(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
    return out;
}

// Conjunctions of at most two items: all subsets minus L & not L and c bound twice.
std::uint64_t conjunction_count_upto2(const Vocabulary& voc, std::size_t m, std::size_t k) {
    std::uint64_t tuples = 0;
    for (const auto& r : voc.relations()) tuples += power(m, r.arity);
    std::uint64_t items = 2 * tuples + voc.constants().size() * m;
    std::uint64_t out = 1;
    if (k >= 1) out += items;
    if (k >= 2) out += choose(items, 2) - tuples - voc.constants().size() * choose(m, 2);
    return out;
}

// Independent reading of uniformity at one m: every conjunction satisfiable
// by some size-m structure is satisfiable inside the problem.
struct BruteForce {
    std::uint64_t consistent = 0;
    std::uint64_t witnessed = 0;
};

BruteForce brute_force(const Problem& p, std::size_t m, const std::vector<GroundConjunction>& conjunctions) {
    std::vector<Structure> all, inside;
    for (const Structure& a : StructureSpace(p.vocabulary, m)) {
        all.push_back(a);
        if (p.decide(a)) inside.push_back(a);
    }
    BruteForce out;
    for (const auto& c : conjunctions) {
        Formula f = conjunction_formula(p.vocabulary, c);
        bool sat = std::any_of(all.begin(), all.end(), [&](const Structure& a) { return testing::reference_eval(a, f); });
        bool in = std::any_of(inside.begin(), inside.end(), [&](const Structure& a) { return testing::reference_eval(a, f); });
        out.consistent += sat;
        out.witnessed += in;
    }
    return out;
}

Formula k6_conjunction() {
    std::string text = "(and";
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) text += " (E " + std::to_string(i) + " " + std::to_string(j) + ")";
    return parse_formula(text + ")", kGraph);
}

bool same(const MVerdict& a, const MVerdict& b) {
    return a.m == b.m && a.verdict == b.verdict && a.conjunctions == b.conjunctions && a.consistent == b.consistent &&
           a.witnessed == b.witnessed && a.counterexamples == b.counterexamples &&
           a.builder_fallbacks == b.builder_fallbacks && a.note == b.note &&
           (a.counterexample.has_value() == b.counterexample.has_value()) &&
           (!a.counterexample || (a.counterexample->conjunction == b.counterexample->conjunction &&
                                  a.counterexample->consistency_witness == b.counterexample->consistency_witness));
}

}  // namespace

TEST_SUITE("uniformity") {

TEST_CASE("ground items and conjunction counts") {
    CHECK(ground_items(kSt, 3).size() == 2 * 9 + 2 * 3);
    CHECK(ground_items(vocabularies::alt_graph(), 4).size() == 2 * 16 + 2 * 4 + 2 * 4);
    for (const auto& voc : {kGraph, kSt, vocabularies::alt_graph()})
        for (std::size_t m : {2, 3, 4})
            for (std::size_t k : {0, 1, 2}) {
                CAPTURE(voc.name());
                CAPTURE(m);
                CAPTURE(k);
                CHECK(enumerate_conjunctions(voc, m, k).size() == conjunction_count_upto2(voc, m, k));
            }
    auto c = enumerate_conjunctions(kSt, 3, 1);
    CHECK(c.size() == 25);
    CHECK(c.front().empty());
    CHECK(enumerate_conjunctions(kSt, 4, 1).size() == 41);
}

TEST_CASE("every enumerated conjunction is satisfied by its least model") {
    for (const auto& voc : {kSt, vocabularies::alt_graph()})
        for (const auto& c : enumerate_conjunctions(voc, 3, 3)) {
            Structure l = least_model(voc, 3, c);
            CHECK(eval_fo(l, conjunction_formula(voc, c)));
            CHECK(ground_conjunction(voc, conjunction_formula(voc, c), 3) == c);
        }
}

TEST_CASE("ground conjunction parsing") {
    Formula f = parse_formula("(and (E 0 max) (not (E 1 1)) (= s 2) true)", kSt);
    GroundConjunction c = ground_conjunction(kSt, f, 3);
    REQUIRE(c.size() == 3);
    CHECK(c[0].tuple == Tuple{0, 2});
    CHECK_FALSE(c[1].positive);
    CHECK(c[2].kind == GroundItem::Kind::Binding);
    CHECK(c[2].value == 2);
    CHECK(constrained_elements(c) == std::vector<Element>{0, 1, 2});
    try {
        ground_conjunction(kSt, parse_formula("(exists x (E x x))", kSt), 3);
        FAIL("expected NotLiteral");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotLiteral);
    }
    CHECK_THROWS_AS(ground_conjunction(kSt, parse_formula("(E 0 3)", kSt), 3), Error);
}

TEST_CASE("builder examples") {
    Structure hp = witness_hp(Structure(kGraph, 4), {});
    CHECK(hp == parse_structure("structure size=4 vocab=graph { E = {(0,1),(1,2),(2,3)} }"));

    // 0 and 1 mentioned with no edge between them
    Structure avoid = witness_hp(Structure(kGraph, 5), {0, 1});
    CHECK_FALSE(avoid.holds(0, {0, 1}));
    CHECK(deciders::hp_0max(avoid));

    CHECK_THROWS_AS(witness_hp(Structure(kGraph, 7), {}, 2), Error);
    try {
        witness_hp(Structure(kGraph, 7), {}, 2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionViolation);
    }

    Structure r = witness_reach(parse_structure("structure size=3 vocab=st-graph { E = {}; s = 0; t = 1 }"), {0, 1});
    CHECK(r.holds(0, {0, 2}));
    CHECK(r.holds(0, {2, 1}));
    CHECK(deciders::reach(r));
    try {
        witness_reach(Structure(kSt, 3), {0, 1, 2});
        FAIL("expected NoFreshVertex");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoFreshVertex);
    }

    Structure mono = witness_comono(Structure(kGraph, 8), {0, 1});
    for (Element i = 2; i < 8; ++i)
        for (Element j = 2; j < 8; ++j) CHECK(mono.holds(0, {i, j}));
    CHECK(mono.tuple_count(0) == 36);
    CHECK(deciders::co_mono_triangle(mono));
    CHECK_THROWS_AS(witness_comono(Structure(kGraph, 7), {0, 1}), Error);

    Structure alt = witness_altreach(
        parse_structure("structure size=3 vocab=alt-graph { E = {}; U = {(0)}; s = 0; t = 1 }"), {0, 1});
    CHECK(deciders::altreach(alt));
}

TEST_CASE("builders return members of the problem that keep the conjunction") {
    std::mt19937_64 rng(3);
    struct Case {
        std::string problem;
        std::size_t m, k;
        Structure (*build)(const WitnessInput&);
    };
    std::vector<Case> cases = {{"reach", 7, 3, witness_reach},
                               {"hp_0max", 8, 2, witness_hp},
                               {"co_mono_triangle", 8, 1, witness_comono}};
    for (const auto& cs : cases) {
        const Problem& p = problem(cs.problem);
        auto all = enumerate_conjunctions(p.vocabulary, cs.m, cs.k);
        for (int i = 0; i < 300; ++i) {
            const GroundConjunction& c = all[rng() % all.size()];
            WitnessInput in{least_model(p.vocabulary, cs.m, c), c, constrained_elements(c), cs.k};
            Structure w = cs.build(in);
            CAPTURE(print_formula(conjunction_formula(p.vocabulary, c)));
            CHECK(p.decide(w));
            CHECK(testing::reference_eval(w, conjunction_formula(p.vocabulary, c)));
        }
    }
}

TEST_CASE("exhaustive verdicts match brute force over every structure") {
    for (const std::string name : {"reach", "altreach", "hp_0max"}) {
        CAPTURE(name);
        const Problem& p = problem(name);
        UniformityQuery q;
        q.problem = name;
        q.n = 3;
        q.k = 1;
        q.m_values = {3};
        UniformityReport r = check_uniformity(q);
        REQUIRE(r.verdicts.size() == 1);
        BruteForce b = brute_force(p, 3, enumerate_conjunctions(p.vocabulary, 3, 1));
        CHECK(r.verdicts[0].consistent == b.consistent);
        CHECK(r.verdicts[0].witnessed == b.witnessed);
        CHECK(r.uniform() == (b.consistent == b.witnessed));
    }
}

TEST_CASE("Reach is uniform at n=3, k=1 for m in {3,4}") {
    UniformityQuery q;
    q.problem = "reach";
    q.n = 3;
    q.k = 1;
    q.m_values = {3, 4};
    UniformityReport r = check_uniformity(q);
    CHECK(r.uniform());
    CHECK(r.verdicts[0].conjunctions == 25);
    CHECK(r.verdicts[1].conjunctions == 41);
    CHECK(std::string(to_string(Verdict::Uniform)) == "uniform");
}

TEST_CASE("0m-HP at m=3 is refuted by a single missing edge") {
    // every Hamiltonian 0..2 path on three vertices is 0 1 2
    UniformityQuery q;
    q.problem = "hp_0max";
    q.n = 3;
    q.k = 1;
    q.m_values = {3};
    UniformityReport r = check_uniformity(q);
    CHECK(r.verdicts[0].verdict == Verdict::CounterexampleFound);
    CHECK(r.verdicts[0].counterexamples == 2);
    CHECK(r.verdicts[0].counterexample->formula == parse_formula("(not (E 0 1))", kGraph));
    q.n = 4;
    q.m_values = {4, 5};
    CHECK(check_uniformity(q).uniform());
}

TEST_CASE("constructive and exhaustive modes agree where both run") {
    for (const std::string name : {"reach", "altreach"}) {
        UniformityQuery q;
        q.problem = name;
        q.n = 3;
        q.k = 2;
        q.m_values = {4};
        UniformityReport ex = check_uniformity(q);
        q.mode = UniformityMode::Constructive;
        UniformityReport co = check_uniformity(q);
        CAPTURE(name);
        CHECK(ex.verdicts[0].verdict == co.verdicts[0].verdict);
        CHECK(ex.verdicts[0].consistent == co.verdicts[0].consistent);
        CHECK(ex.verdicts[0].witnessed == co.verdicts[0].witnessed);
    }
}

TEST_CASE("the K6 probe refutes MonoTriangle at m=6") {
    UniformityQuery q;
    q.problem = "mono_triangle";
    q.n = 6;
    q.k = 15;
    q.m_values = {6};
    q.probe = std::vector<Formula>{k6_conjunction()};
    UniformityReport r = check_uniformity(q);
    REQUIRE(r.verdicts[0].verdict == Verdict::CounterexampleFound);
    const auto& cex = *r.verdicts[0].counterexample;
    CHECK(cex.candidates == std::uint64_t{1} << 21);
    REQUIRE(cex.coloring);
    CHECK(cex.coloring->edges == 15);
    CHECK(cex.coloring->triangles == 20);
    CHECK(cex.coloring->colorings == 32768);
    CHECK(cex.coloring->triangle_free == 0);
    CHECK(eval_fo(cex.consistency_witness, k6_conjunction()));
}

TEST_CASE("a universal source with a self-loop refutes AltReach at k=4") {
    Formula probe = parse_formula("(and (U 0) (E 0 0) (= s 0) (= t 1))", vocabularies::alt_graph());
    UniformityQuery q;
    q.problem = "altreach";
    q.n = 3;
    q.k = 4;
    q.m_values = {3};
    q.probe = std::vector<Formula>{probe};
    UniformityReport r = check_uniformity(q);
    CHECK(r.verdicts[0].verdict == Verdict::CounterexampleFound);
    CHECK(r.verdicts[0].counterexample->candidates == 1024);
    // oracle: no size-3 structure satisfying the conjunction is accepted
    std::uint64_t satisfying = 0, accepted = 0;
    for (const Structure& a : StructureSpace(vocabularies::alt_graph(), 3))
        if (testing::reference_eval(a, probe)) {
            ++satisfying;
            accepted += deciders::altreach(a);
        }
    CHECK(satisfying == 1024);
    CHECK(accepted == 0);
}

TEST_CASE("monotone re-runs keep a uniform verdict") {
    UniformityQuery base;
    base.problem = "reach";
    base.n = 3;
    base.k = 2;
    base.m_values = {3, 4};
    REQUIRE(check_uniformity(base).uniform());
    UniformityQuery fewer = base;
    fewer.k = 1;
    CHECK(check_uniformity(fewer).uniform());
    UniformityQuery larger_n = base;
    larger_n.n = 4;
    larger_n.m_values = {4};
    CHECK(check_uniformity(larger_n).uniform());
    UniformityQuery more_m = base;
    more_m.m_values = {3, 4, 5};
    CHECK(check_uniformity(more_m).uniform());
}

TEST_CASE("reports do not depend on the worker count") {
    UniformityQuery q;
    q.problem = "altreach";
    q.n = 3;
    q.k = 4;
    q.m_values = {3};
    q.probe = std::vector<Formula>{
        parse_formula("(and (U 0) (E 0 0) (= s 0) (= t 1))", vocabularies::alt_graph()),
        parse_formula("(and (E 0 1) (= s 0))", vocabularies::alt_graph()),
    };
    UniformityReport one = check_uniformity(q);
    q.workers = 4;
    UniformityReport four = check_uniformity(q);
    CHECK(same(one.verdicts[0], four.verdicts[0]));

    UniformityQuery c;
    c.problem = "reach";
    c.n = 5;
    c.k = 2;
    c.m_values = {5};
    c.mode = UniformityMode::Constructive;
    UniformityReport c1 = check_uniformity(c);
    c.workers = 3;
    CHECK(same(c1.verdicts[0], check_uniformity(c).verdicts[0]));
}

TEST_CASE("uniformity preconditions") {
    UniformityQuery q;
    q.problem = "reach";
    q.n = 4;
    q.k = 1;
    q.m_values = {3};
    CHECK_THROWS_AS(check_uniformity(q), Error);
    q.m_values = {4};
    q.problem = "three_dm";
    q.mode = UniformityMode::Constructive;
    try {
        check_uniformity(q);
        FAIL("expected PreconditionViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionViolation);
    }
    q.problem = "nope";
    CHECK_THROWS_AS(check_uniformity(q), Error);
    auto names = constructive_problems();
    CHECK(std::find(names.begin(), names.end(), "hp_0max") != names.end());
}

}  // TEST_SUITE
