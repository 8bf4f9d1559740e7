#include <doctest.h>

#include <set>

#include "fopkit/enumerate.hpp"
#include "fopkit/error.hpp"
#include "fopkit/parallel.hpp"
#include "fopkit/structure.hpp"
#include "support.hpp"

using namespace fopkit;

TEST_SUITE("structures") {

TEST_CASE("tuple_index is the base-n reading of the tuple") {
    CHECK(tuple_index(std::vector<Element>{1, 2}, 3) == 5);
    for (std::size_t n : {2, 3, 7}) {
        CHECK(tuple_index(std::vector<Element>{0, 0, 0}, n) == 0);
        Tuple top(3, static_cast<Element>(n - 1));
        CHECK(tuple_index(top, n) == n * n * n - 1);
        for (std::uint64_t i = 0; i < n * n * n; ++i) CHECK(tuple_index(tuple_at(i, 3, n), n) == i);
    }
}

TEST_CASE("bit, suc and <= agree with arithmetic for i, j < 16") {
    CHECK(bit(5, 0, 16));
    CHECK_FALSE(bit(5, 1, 16));
    for (Element j = 0; j < 16; ++j) CHECK_FALSE(bit(0, j, 16));
    for (Element i = 0; i < 16; ++i)
        for (Element j = 0; j < 16; ++j) {
            Element q = i;
            for (Element s = 0; s < j; ++s) q /= 2;
            CHECK(bit(i, j, 16) == (q % 2 == 1));
            CHECK(suc(i, j, 16) == (j == i + 1));
        }
}

TEST_CASE("structure counts") {
    CHECK(count_structures(vocabularies::graph(), 2) == 16);
    CHECK(count_structures(vocabularies::st_graph(), 2) == 64);
    CHECK(count_structures(vocabularies::three_dm(), 2) == 256);
    CHECK(count_structures(vocabularies::st_graph(), 3) == 4608);
}

TEST_CASE("enumeration yields every structure exactly once") {
    std::vector<Vocabulary> vocs = {
        vocabularies::graph(),
        Vocabulary("unary", {{"P", 1}}, {}),
        Vocabulary("unary-c", {{"P", 1}}, {"c"}),
        Vocabulary("ternary", {{"M", 3}}, {}),
    };
    for (const auto& voc : vocs)
        for (std::size_t n = 2; n <= 3; ++n) {
            if (voc.name() == "ternary" && n == 3) continue;  // 2^27
            StructureSpace space(voc, n);
            std::uint64_t count = static_cast<std::uint64_t>(space.count());
            CHECK(space.count() == count_structures(voc, n));
            std::uint64_t distinct = 0;
            std::vector<Structure> all;
            for (const Structure& a : space) all.push_back(a);
            CHECK(all.size() == count);
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = i + 1; j < all.size() && j < i + 40; ++j) CHECK(all[i] != all[j]);
            std::set<std::string> keys;
            for (const auto& a : all) {
                std::string key;
                for (std::size_t r = 0; r < voc.relations().size(); ++r)
                    for (const auto& t : a.tuples(r)) {
                        key += std::to_string(r) + ":";
                        for (Element e : t) key += std::to_string(e) + ",";
                        key += ";";
                    }
                for (Element c : a.constants()) key += "c" + std::to_string(c);
                keys.insert(key);
            }
            distinct = keys.size();
            CHECK(distinct == count);
        }
}

TEST_CASE("enumeration order: last relation least significant, constants last") {
    StructureSpace space(vocabularies::st_graph(), 2);
    Structure first = space.at(0);
    CHECK(first.tuple_count(0) == 0);
    CHECK(first.constant("s") == 0);
    CHECK(first.constant("t") == 0);
    Structure second = space.at(1);
    CHECK(second.constant("t") == 1);
    Structure fifth = space.at(4);
    CHECK(fifth.holds(0, {0, 0}));
    CHECK(fifth.tuple_count(0) == 1);
}

TEST_CASE("pinned spaces contain exactly the structures meeting the pins") {
    const Vocabulary voc = vocabularies::st_graph();
    std::vector<CellPin> cells = {{0, tuple_index(std::vector<Element>{0, 1}, 3), true},
                                  {0, tuple_index(std::vector<Element>{1, 0}, 3), false}};
    std::vector<ConstantPin> consts = {{0, 2}};
    StructureSpace pinned(voc, 3, cells, consts);
    CHECK(pinned.count() == 4608 / 4 / 3);
    StructureSpace full(voc, 3);
    std::vector<Structure> expected;
    for (const Structure& a : full)
        if (a.holds(0, {0, 1}) && !a.holds(0, {1, 0}) && a.constant("s") == 2) expected.push_back(a);
    std::vector<Structure> got(pinned.begin(), pinned.end());
    CHECK(got == expected);
    StructureSpace contradictory(voc, 3, {{0, 1, true}, {0, 1, false}});
    CHECK(contradictory.contradictory());
    CHECK(contradictory.count() == 0);
}

TEST_CASE("checked_count enforces the cap") {
    StructureSpace space(vocabularies::three_dm(), 3);
    CHECK_THROWS_AS(space.checked_count(1u << 20, "test"), BudgetExceeded);
    try {
        space.checked_count(1u << 20, "test");
    } catch (const BudgetExceeded& e) {
        CHECK(e.needed() == "134217728");
    }
}

TEST_CASE("equality is extensional") {
    const Vocabulary voc = vocabularies::st_graph();
    Structure a(voc, 3), b(voc, 3);
    CHECK(a == b);
    a.set(0, {0, 1});
    CHECK(a != b);
    b.set(0, {0, 1});
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    b.set_constant("t", 2);
    CHECK(a != b);
    CHECK(Structure(voc, 3) != Structure(voc, 4));
    CHECK(Structure(voc, 2) != Structure(vocabularies::graph(), 2));
}

TEST_CASE("structures reject bad sizes and elements") {
    CHECK_THROWS_AS(Structure(vocabularies::graph(), 1), Error);
    Structure a(vocabularies::graph(), 2);
    CHECK_THROWS_AS(a.set(0, {0, 2}), Error);
    CHECK_THROWS_AS(a.set(0, {0}), Error);
}

TEST_CASE("reduct keeps the shared symbols") {
    Structure a(vocabularies::longest_path(), 3);
    a.set(a.relation("E"), {0, 1});
    a.set(a.relation("L"), {0, 1, 0});
    a.set_constant("t", 2);
    Structure r = reduct(a, vocabularies::st_graph());
    CHECK(r.holds(r.relation("E"), {0, 1}));
    CHECK(r.tuple_count(r.relation("E")) == 1);
    CHECK(r.constant("t") == 2);
}

TEST_CASE("first_index and for_each_index do not depend on the worker count") {
    auto pred = [](std::uint64_t i) { return i % 997 == 996 || i == 5000; };
    for (unsigned w : {1u, 2u, 4u, 7u}) {
        CHECK(first_index(10000, w, pred, 64) == std::optional<std::uint64_t>(996));
        CHECK_FALSE(first_index(500, w, pred, 16).has_value());
        std::vector<std::uint64_t> out(1000);
        for_each_index(1000, w, [&](std::uint64_t i) { out[i] = i * i; }, 13);
        for (std::uint64_t i = 0; i < 1000; ++i) CHECK(out[i] == i * i);
    }
    auto throwing = [](std::uint64_t i) -> bool {
        if (i == 300) throw Error(ErrorKind::Syntax, "boom");
        return i == 700;
    };
    for (unsigned w : {1u, 3u}) CHECK_THROWS_AS(first_index(1000, w, throwing, 8), Error);
    auto early = [](std::uint64_t i) -> bool {
        if (i == 300) throw Error(ErrorKind::Syntax, "boom");
        return i == 100;
    };
    for (unsigned w : {1u, 3u}) CHECK(first_index(1000, w, early, 8) == std::optional<std::uint64_t>(100));
}

}  // TEST_SUITE
