#include "fopkit/problems.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <bit>
#include <limits>
#include <random>
#include <numeric>
#include <unordered_map>

#include "fopkit/error.hpp"
#include "fopkit/io.hpp"
#include "fopkit/parallel.hpp"

namespace fopkit {

bool Problem::decide(const Structure& a) const {
    if (!(a.vocabulary() == vocabulary))
        throw Error(ErrorKind::VocabularyMismatch, "problem " + name + " expects vocabulary " + vocabulary.name());
    return decider(a);
}

Problem PaddedProblem::as_problem() const {
    Problem p = base;
    p.name = base.name + "_" + std::to_string(threshold);
    std::size_t n = threshold;
    Decider inner = base.decider;
    p.decider = [n, inner](const Structure& a) { return a.size() < n || inner(a); };
    p.definition.reset();
    return p;
}

PaddedProblem pad(const Problem& p, std::size_t n) {
    if (n < 2) throw Error(ErrorKind::PreconditionViolation, "padding threshold must be at least 2");
    return {p, n};
}

namespace {

using Mask = std::uint64_t;

void require_small(const Structure& a, std::size_t limit, const char* what) {
    if (a.size() > limit)
        throw Error(ErrorKind::PreconditionViolation,
                    std::string(what) + " supports at most " + std::to_string(limit) + " vertices");
}

// Successor masks of E, loops dropped.
std::vector<Mask> out_masks(const Structure& a) {
    require_small(a, 64, "graph decider");
    std::size_t n = a.size();
    std::size_t e = a.relation("E");
    std::vector<Mask> out(n, 0);
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            if (x != y && a.holds(e, {x, y})) out[x] |= Mask{1} << y;
    return out;
}

std::vector<Mask> undirected_masks(const Structure& a) {
    auto out = out_masks(a);
    for (std::size_t x = 0; x < out.size(); ++x)
        for (std::size_t y = 0; y < out.size(); ++y)
            if ((out[x] >> y) & 1u) out[y] |= Mask{1} << x;
    return out;
}

bool hp_backtrack(const std::vector<Mask>& out, Element v, Element to, Mask visited, std::size_t n) {
    if (std::popcount(visited) == static_cast<int>(n)) return v == to;
    if (v == to) return false;
    Mask cand = out[v] & ~visited;
    while (cand) {
        Element w = static_cast<Element>(std::countr_zero(cand));
        cand &= cand - 1;
        if (hp_backtrack(out, w, to, visited | (Mask{1} << w), n)) return true;
    }
    return false;
}

}  // namespace

namespace deciders {

bool reach(const Structure& a) {
    std::size_t n = a.size();
    std::size_t e = a.relation("E");
    Element s = a.constant("s"), t = a.constant("t");
    std::vector<bool> seen(n, false);
    std::vector<Element> queue{s};
    seen[s] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        Element x = queue[i];
        if (x == t) return true;
        for (Element y = 0; y < n; ++y)
            if (!seen[y] && a.holds(e, {x, y})) {
                seen[y] = true;
                queue.push_back(y);
            }
    }
    return false;
}

bool altreach(const Structure& a) {
    std::size_t n = a.size();
    std::size_t e = a.relation("E"), u = a.relation("U");
    Element s = a.constant("s"), t = a.constant("t");
    std::vector<bool> acc(n, false);
    acc[t] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Element x = 0; x < n; ++x) {
            if (acc[x]) continue;
            bool any = false, all = true, some_edge = false;
            for (Element y = 0; y < n; ++y) {
                if (!a.holds(e, {x, y})) continue;
                some_edge = true;
                if (acc[y])
                    any = true;
                else
                    all = false;
            }
            bool ok = a.holds(u, {x}) ? (some_edge && all) : any;
            if (ok) {
                acc[x] = true;
                changed = true;
            }
        }
    }
    return acc[s];
}

bool hamiltonian_path(const Structure& a, Element from, Element to) {
    std::size_t n = a.size();
    if (from == to) return false;
    auto out = out_masks(a);
    if (n > 20) return hp_backtrack(out, from, to, Mask{1} << from, n);
    // ends[mask]: vertices where a path from `from` covering exactly mask can end.
    std::vector<std::uint32_t> ends(std::size_t{1} << n, 0);
    ends[std::size_t{1} << from] = 1u << from;
    for (std::size_t mask = 0; mask < ends.size(); ++mask) {
        std::uint32_t cur = ends[mask];
        while (cur) {
            Element v = static_cast<Element>(std::countr_zero(cur));
            cur &= cur - 1;
            Mask next = out[v] & ~static_cast<Mask>(mask);
            while (next) {
                Element w = static_cast<Element>(std::countr_zero(next));
                next &= next - 1;
                ends[mask | (std::size_t{1} << w)] |= 1u << w;
            }
        }
    }
    return (ends.back() >> to) & 1u;
}

bool hp_0max(const Structure& a) { return hamiltonian_path(a, 0, static_cast<Element>(a.size() - 1)); }
bool hp_01(const Structure& a) { return hamiltonian_path(a, 0, 1); }
bool hp_two_points(const Structure& a) { return hamiltonian_path(a, a.constant("s"), a.constant("t")); }

}  // namespace deciders

namespace {

struct TriangleGraph {
    std::vector<std::pair<Element, Element>> edges;
    std::vector<std::array<std::size_t, 3>> triangles;  // edge ids
};

TriangleGraph triangle_graph(const std::vector<Mask>& adj, bool only_triangle_edges) {
    std::size_t n = adj.size();
    TriangleGraph g;
    std::vector<std::vector<std::size_t>> id(n, std::vector<std::size_t>(n, SIZE_MAX));
    auto edge = [&](Element x, Element y) {
        if (id[x][y] == SIZE_MAX) {
            id[x][y] = g.edges.size();
            g.edges.push_back({x, y});
        }
        return id[x][y];
    };
    if (!only_triangle_edges)
        for (Element x = 0; x < n; ++x)
            for (Element y = x + 1; y < n; ++y)
                if ((adj[x] >> y) & 1u) edge(x, y);
    for (Element x = 0; x < n; ++x)
        for (Element y = x + 1; y < n; ++y) {
            if (!((adj[x] >> y) & 1u)) continue;
            for (Element z = y + 1; z < n; ++z)
                if (((adj[x] >> z) & 1u) && ((adj[y] >> z) & 1u))
                    g.triangles.push_back({edge(x, y), edge(y, z), edge(x, z)});
        }
    return g;
}

bool colorable(const TriangleGraph& g) {
    if (g.triangles.empty()) return true;
    std::size_t m = g.edges.size();
    // Triangles become checkable once their highest edge id is colored.
    std::vector<std::vector<std::size_t>> closing(m);
    for (std::size_t i = 0; i < g.triangles.size(); ++i) {
        const auto& t = g.triangles[i];
        closing[std::max({t[0], t[1], t[2]})].push_back(i);
    }
    std::vector<int> color(m, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t e) {
        if (e == m) return true;
        for (int c = 0; c < (e == 0 ? 1 : 2); ++c) {
            color[e] = c;
            bool ok = true;
            for (std::size_t t : closing[e]) {
                const auto& tr = g.triangles[t];
                if (color[tr[0]] == color[tr[1]] && color[tr[1]] == color[tr[2]]) {
                    ok = false;
                    break;
                }
            }
            if (ok && go(e + 1)) return true;
        }
        return false;
    };
    return go(0);
}

}  // namespace

namespace deciders {

bool mono_triangle(const Structure& a) {
    auto adj = undirected_masks(a);
    std::size_t n = a.size();
    std::optional<std::uint64_t> key;
    if (n <= 11) {
        std::uint64_t k = static_cast<std::uint64_t>(n) << 56;
        std::size_t bit = 0;
        for (Element x = 0; x < n; ++x)
            for (Element y = x + 1; y < n; ++y, ++bit)
                if ((adj[x] >> y) & 1u) k |= std::uint64_t{1} << bit;
        key = k;
        thread_local std::unordered_map<std::uint64_t, bool> memo;
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        bool r = colorable(triangle_graph(adj, true));
        if (memo.size() > (1u << 20)) memo.clear();
        memo.emplace(k, r);
        return r;
    }
    return colorable(triangle_graph(adj, true));
}

bool co_mono_triangle(const Structure& a) { return !mono_triangle(a); }

bool three_dm(const Structure& a) {
    std::size_t n = a.size();
    require_small(a, 64, "3DM decider");
    std::size_t m = a.relation("M");
    std::vector<std::vector<std::pair<Element, Element>>> by_x(n);
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            for (Element z = 0; z < n; ++z)
                if (a.holds(m, {x, y, z})) by_x[x].push_back({y, z});
    std::function<bool(Element, Mask, Mask)> go = [&](Element x, Mask ys, Mask zs) {
        if (x == n) return true;
        for (auto [y, z] : by_x[x]) {
            if (((ys >> y) & 1u) || ((zs >> z) & 1u)) continue;
            if (go(x + 1, ys | (Mask{1} << y), zs | (Mask{1} << z))) return true;
        }
        return false;
    };
    return go(0, 0, 0);
}

bool longest_path(const Structure& a) {
    std::size_t n = a.size();
    require_small(a, 60, "LongestPath decider");
    std::size_t l = a.relation("L"), e = a.relation("E"), kr = a.relation("K");
    Element s = a.constant("s"), t = a.constant("t");
    std::uint64_t bound = 0;
    for (Element i = 0; i < n; ++i)
        if (a.holds(kr, {i})) bound |= std::uint64_t{1} << i;
    std::vector<std::vector<std::uint64_t>> len(n, std::vector<std::uint64_t>(n, 0));
    std::vector<Mask> out(n, 0);
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) {
            if (x == y || !a.holds(e, {x, y})) continue;
            out[x] |= Mask{1} << y;
            for (Element i = 0; i < n; ++i)
                if (a.holds(l, {x, y, i})) len[x][y] |= std::uint64_t{1} << i;
        }
    if (s == t) return bound == 0;
    std::function<bool(Element, Mask, std::uint64_t)> go = [&](Element v, Mask visited, std::uint64_t total) {
        if (v == t) return total >= bound;
        Mask cand = out[v] & ~visited;
        while (cand) {
            Element w = static_cast<Element>(std::countr_zero(cand));
            cand &= cand - 1;
            if (go(w, visited | (Mask{1} << w), total + len[v][w])) return true;
        }
        return false;
    };
    return go(s, Mask{1} << s, 0);
}

bool reach_undirected(const Structure& a) {
    std::size_t n = a.size();
    std::size_t e = a.relation("E");
    std::vector<Element> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<Element(Element)> find = [&](Element x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            if (a.holds(e, {x, y})) parent[find(x)] = find(y);
    return find(a.constant("s")) == find(a.constant("t"));
}

namespace {

bool undirected_hp(const Structure& a, Element from, Element to) {
    if (from == to) return false;
    auto adj = undirected_masks(a);
    std::vector<Element> middle;
    for (Element v = 0; v < a.size(); ++v)
        if (v != from && v != to) middle.push_back(v);
    do {
        Element prev = from;
        bool ok = true;
        for (Element v : middle) {
            if (!((adj[prev] >> v) & 1u)) {
                ok = false;
                break;
            }
            prev = v;
        }
        if (ok && ((adj[prev] >> to) & 1u)) return true;
    } while (std::next_permutation(middle.begin(), middle.end()));
    return false;
}

}  // namespace

bool hp_0max_undirected(const Structure& a) { return undirected_hp(a, 0, static_cast<Element>(a.size() - 1)); }
bool hp_two_points_undirected(const Structure& a) { return undirected_hp(a, a.constant("s"), a.constant("t")); }

}  // namespace deciders

ColoringCensus coloring_census(const Structure& a) {
    auto adj = undirected_masks(a);
    TriangleGraph g = triangle_graph(adj, false);
    if (g.edges.size() > 30) throw Error(ErrorKind::PreconditionViolation, "coloring census supports 30 edges");
    ColoringCensus c;
    c.edges = g.edges.size();
    c.triangles = g.triangles.size();
    c.colorings = std::uint64_t{1} << c.edges;
    for (std::uint64_t coloring = 0; coloring < c.colorings; ++coloring) {
        bool mono = false;
        for (const auto& t : g.triangles) {
            unsigned bits = ((coloring >> t[0]) & 1u) + ((coloring >> t[1]) & 1u) + ((coloring >> t[2]) & 1u);
            if (bits == 0 || bits == 3) {
                mono = true;
                break;
            }
        }
        if (!mono) ++c.triangle_free;
    }
    return c;
}

namespace definitions {

namespace {

Formula hp(const std::string& first, const std::string& last, const Vocabulary& voc) {
    return parse_formula(
        "(exists2 (R 2) (and"
        " (forall (x) (not (R x x)))"
        " (forall (x y) (-> (not (= x y)) (or (R x y) (R y x))))"
        " (forall (x y z) (-> (and (R x y) (R y z)) (R x z)))"
        " (forall (x) (-> (not (= x " + first + ")) (R " + first + " x)))"
        " (forall (x) (-> (not (= x " + last + ")) (R x " + last + ")))"
        " (forall (x y) (-> (and (R x y) (not (exists (z) (and (R x z) (R z y))))) (E x y)))))",
        voc);
}

const char* kTriangle =
    "(and (<= x y) (not (= x y)) (<= y z) (not (= y z))"
    " (or (E x y) (E y x)) (or (E y z) (E z y)) (or (E x z) (E z x)))";
const char* kMono =
    "(or (and (C x y) (C y z) (C x z)) (and (not (C x y)) (not (C y z)) (not (C x z))))";

}  // namespace

Formula reach() {
    return parse_formula("(forall2 (R 1) (-> (and (R s) (forall (x y) (-> (and (R x) (E x y)) (R y)))) (R t)))",
                         vocabularies::st_graph());
}

Formula altreach() {
    return parse_formula(
        "(forall2 (R 1) (-> (forall (u) (-> (or (= u t)"
        " (and (not (U u)) (exists (v) (and (E u v) (R v))))"
        " (and (U u) (exists (v) (E u v)) (forall (v) (-> (E u v) (R v)))))"
        " (R u))) (R s)))",
        vocabularies::alt_graph());
}

Formula hp_0max() { return hp("0", "max", vocabularies::graph()); }
Formula hp_01() { return hp("0", "1", vocabularies::graph()); }
Formula hp_two_points() { return hp("s", "t", vocabularies::st_graph()); }

Formula mono_triangle() {
    return parse_formula(std::string("(exists2 (C 2) (forall (x y z) (-> ") + kTriangle + " (not " + kMono + "))))",
                         vocabularies::graph());
}

Formula co_mono_triangle() {
    return parse_formula(std::string("(forall2 (C 2) (exists (x y z) (and ") + kTriangle + " " + kMono + ")))",
                         vocabularies::graph());
}

Formula three_dm() {
    return parse_formula(
        "(exists2 (R 3) (and"
        " (forall (x1 x2 x3) (-> (R x1 x2 x3) (M x1 x2 x3)))"
        " (forall (x) (and (exists (x2 x3) (R x x2 x3)) (exists (x1 x3) (R x1 x x3)) (exists (x1 x2) (R x1 x2 x))))"
        " (forall (x1 x2 x3 y1 y2 y3) (-> (and (R x1 x2 x3) (R y1 y2 y3) (not (and (= x1 y1) (= x2 y2) (= x3 y3))))"
        " (and (not (= x1 y1)) (not (= x2 y2)) (not (= x3 y3)))))))",
        vocabularies::three_dm());
}

}  // namespace definitions

namespace {

std::map<std::string, Problem> build_catalog() {
    using namespace vocabularies;
    std::map<std::string, Problem> c;
    auto add = [&](std::string name, Vocabulary v, Decider d, std::optional<Formula> def, std::string cls) {
        c.emplace(name, Problem{name, std::move(v), std::move(d), std::move(def), std::move(cls)});
    };
    add("reach", st_graph(), deciders::reach, definitions::reach(), "NL");
    add("altreach", alt_graph(), deciders::altreach, definitions::altreach(), "P");
    add("hp_0max", graph(), deciders::hp_0max, definitions::hp_0max(), "NP");
    add("hp_01", graph(), deciders::hp_01, definitions::hp_01(), "NP");
    add("hp_two_points", st_graph(), deciders::hp_two_points, definitions::hp_two_points(), "NP");
    add("mono_triangle", graph(), deciders::mono_triangle, definitions::mono_triangle(), "NP");
    add("co_mono_triangle", graph(), deciders::co_mono_triangle, definitions::co_mono_triangle(), "coNP");
    add("three_dm", three_dm(), deciders::three_dm, definitions::three_dm(), "NP");
    add("longest_path", longest_path(), deciders::longest_path, std::nullopt, "NP");
    add("reach_undirected", st_graph(), deciders::reach_undirected, std::nullopt, "NL");
    add("hp_0max_undirected", graph(), deciders::hp_0max_undirected, std::nullopt, "NP");
    add("hp_two_points_undirected", st_graph(), deciders::hp_two_points_undirected, std::nullopt, "NP");
    return c;
}

const std::map<std::string, Problem>& catalog() {
    static const std::map<std::string, Problem> c = build_catalog();
    return c;
}

}  // namespace

const Problem& problem(const std::string& name) {
    const auto& c = catalog();
    auto it = c.find(name == "co_mono" ? "co_mono_triangle" : name == "3dm" ? "three_dm" : name);
    if (it == c.end()) throw Error(ErrorKind::UnknownProblem, "unknown problem " + name);
    return it->second;
}

std::vector<std::string> problem_names() {
    std::vector<std::string> out;
    for (const auto& [name, p] : catalog()) out.push_back(name);
    return out;
}

std::vector<std::string> autoreducible_problems() { return {"reach", "altreach", "hp_0max", "co_mono_triangle"}; }

std::size_t padding_arity(std::size_t n) {
    std::size_t k = 0;
    while (k < 63 && (std::uint64_t{1} << k) <= n) ++k;
    return std::max<std::size_t>(k, 1);
}

namespace {

Term xv(std::size_t i) { return fo::var(FoQuery::variable(i)); }

// x_{offset}..x_{offset+count-1} all zero.
std::vector<Formula> zeros(std::size_t offset, std::size_t count) {
    std::vector<Formula> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(fo::eq(xv(offset + j), Term::zero()));
    return out;
}

std::vector<Formula> pairwise_equal(std::size_t a, std::size_t b, std::size_t count) {
    std::vector<Formula> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(fo::eq(xv(a + j), xv(b + j)));
    return out;
}

// The p-digit number at b is the successor of the one at a (most significant first).
Formula lex_successor(std::size_t a, std::size_t b, std::size_t p) {
    std::vector<Formula> cases;
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<Formula> parts = pairwise_equal(a, b, j);
        parts.push_back(fo::suc(xv(a + j), xv(b + j)));
        for (std::size_t i = j + 1; i < p; ++i) {
            parts.push_back(fo::eq(xv(a + i), Term::max()));
            parts.push_back(fo::eq(xv(b + i), Term::zero()));
        }
        cases.push_back(fo::conj_flat(std::move(parts)));
    }
    return fo::disj_flat(std::move(cases));
}

Formula with(std::vector<Formula> guard, Formula last) {
    guard.push_back(std::move(last));
    return fo::conj_flat(std::move(guard));
}

}  // namespace

Fop autoreduction(const std::string& name, std::size_t n) {
    const Problem& p = problem(name);
    std::size_t k = padding_arity(n);
    std::size_t pre = k - 1;
    FoQuery q;
    q.name = "pad-" + p.name;
    q.source = q.target = p.vocabulary;
    q.arity = k;
    q.threshold = n;
    Formula edge = fo::atom("E", {xv(pre), xv(k + pre)});
    if (p.name == "reach" || p.name == "altreach") {
        // The input sits in block 0; every other element is isolated.
        std::vector<Formula> guard = zeros(0, pre);
        auto tail = zeros(k, pre);
        guard.insert(guard.end(), tail.begin(), tail.end());
        q.relation_formulas.push_back(with(guard, edge));
        if (p.name == "altreach") q.relation_formulas.push_back(with(zeros(0, pre), fo::atom("U", {xv(pre)})));
        for (const char* c : {"s", "t"})
            q.constant_formulas.push_back(with(zeros(0, pre), fo::eq(xv(pre), Term::constant(c))));
    } else if (p.name == "hp_0max") {
        // Copies indexed by the prefix, max of each copy joined to 0 of the next.
        Formula same = with(pairwise_equal(0, k, pre), edge);
        if (pre == 0) {
            q.relation_formulas.push_back(same);
        } else {
            Formula chain = fo::conj({lex_successor(0, k, pre), fo::eq(xv(pre), Term::max()),
                                      fo::eq(xv(k + pre), Term::zero())});
            q.relation_formulas.push_back(fo::disj({chain, same}));
        }
    } else if (p.name == "co_mono_triangle") {
        q.relation_formulas.push_back(with(pairwise_equal(0, k, pre), edge));
    } else {
        throw Error(ErrorKind::UnknownProblem, "problem " + name + " has no padding fop");
    }
    return Fop(std::move(q));
}

std::vector<CatalogFop> catalog_fops(std::size_t n) {
    std::vector<CatalogFop> out;
    for (const char* name : {"reach", "altreach", "hp_0max"}) {
        const Problem& p = problem(name);
        out.push_back({"identity-" + p.name, Fop(fops::identity(p.vocabulary)), p.name, std::nullopt, p.name});
    }
    out.push_back({"swap", Fop(fops::swap_one_max()), "hp_01", std::nullopt, "hp_0max"});
    for (const auto& name : autoreducible_problems())
        out.push_back({"pad-" + name, autoreduction(name, n), name, n, name});
    return out;
}

std::optional<Structure> is_consistent(const Problem& within, const Formula& f, const Assignment& asg,
                                       std::size_t m, const ConsistencyOptions& options) {
    return is_consistent(within.vocabulary, f, asg, m, [&](const Structure& a) { return within.decide(a); },
                         options);
}

SuperfluityReport check_superfluous_wrt_fop(const Formula& psi, const Fop& rho, std::size_t size_bound,
                                            std::uint64_t budget, unsigned workers) {
    const FoQuery& q = rho.query();
    SuperfluityReport report{to_prenex_universal(psi), 0, std::nullopt};
    BigCount total = 0;
    for (std::size_t n = 2; n <= size_bound; ++n) total += count_structures(q.source, n);
    if (total > budget) throw BudgetExceeded("superfluity check", total.str(), std::to_string(budget));
    CompiledFormula sentence(psi, q.target);
    for (std::size_t n = 2; n <= size_bound; ++n) {
        StructureSpace space(q.source, n);
        std::uint64_t count = static_cast<std::uint64_t>(space.count());
        auto bad = first_index(count, workers, [&](std::uint64_t i) { return !sentence.evaluate(apply(q, space.at(i))); },
                               64);
        if (!bad) {
            report.checked += count;
            continue;
        }
        report.checked += *bad + 1;
        Structure a = space.at(*bad);
        Structure b = apply(q, a);
        const auto& vars = report.prenex.variables;
        std::vector<CompiledFormula> clauses;
        for (const auto& c : report.prenex.clauses) clauses.emplace_back(fo::disj_flat(c), q.target, vars);
        std::uint64_t assignments = power(b.size(), vars.size());
        for (std::uint64_t i = 0; i < assignments; ++i) {
            Tuple values = tuple_at(i, vars.size(), b.size());
            for (std::size_t c = 0; c < clauses.size(); ++c) {
                if (clauses[c].evaluate(b, values)) continue;
                Assignment asg;
                for (std::size_t v = 0; v < vars.size(); ++v) asg[vars[v]] = values[v];
                std::vector<Formula> negated;
                for (const auto& lit : report.prenex.clauses[c]) negated.push_back(complement(lit));
                report.counterexample =
                    SuperfluityCounterexample{a, b, asg, report.prenex.clauses[c], fo::conj_flat(negated)};
                return report;
            }
        }
        throw Error(ErrorKind::NotUniversal, "prenex form disagrees with the sentence");
    }
    return report;
}

Formula longest_path_restriction() {
    return parse_formula(
        "(and (forall (x y z) (-> (L x y z) (= z 0))) (forall (x) (<-> (K x) (bit max x))))",
        vocabularies::longest_path());
}

HarnessReport longest_path_harness(std::size_t max_size, unsigned workers) {
    HarnessReport report;
    const Vocabulary lp = vocabularies::longest_path();
    const Vocabulary st = vocabularies::st_graph();
    CompiledFormula psi(longest_path_restriction(), lp);
    for (std::size_t n = 2; n <= max_size; ++n) {
        std::size_t cells = n * n;
        if (cells > 20) throw BudgetExceeded("longest-path harness", "2^" + std::to_string(cells), "2^20");
        std::uint64_t graphs = std::uint64_t{1} << cells;
        std::uint64_t count = graphs * n * n;
        // 0 agree, 1 mismatch, 2 outside the restriction
        std::vector<std::uint8_t> status(count, 0);
        auto build = [&](std::uint64_t i) {
            Structure a(lp, n);
            std::uint64_t edges = i / (n * n);
            std::size_t e = a.relation("E"), l = a.relation("L"), k = a.relation("K");
            for (std::uint64_t c = 0; c < cells; ++c) {
                if (!((edges >> c) & 1u)) continue;
                a.set_at(e, c);
                Tuple xy = tuple_at(c, 2, n);
                a.set(l, {xy[0], xy[1], 0});
            }
            for (Element b = 0; b < n; ++b)
                if (bit(static_cast<Element>(n - 1), b, n)) a.set(k, {b});
            a.set_constant("s", static_cast<Element>((i % (n * n)) / n));
            a.set_constant("t", static_cast<Element>(i % n));
            return a;
        };
        for_each_index(count, workers, [&](std::uint64_t i) {
            Structure a = build(i);
            if (!psi.evaluate(a)) {
                status[i] = 2;
                return;
            }
            bool left = deciders::longest_path(a);
            bool right = deciders::hp_two_points(reduct(a, st));
            status[i] = left == right ? 0 : 1;
        });
        report.graphs += graphs;
        report.checked += count;
        for (std::uint64_t i = 0; i < count; ++i) {
            if (status[i] == 2) ++report.domain_failures;
            if (status[i] == 1) {
                Structure a = build(i);
                report.mismatches.push_back({a, deciders::longest_path(a), deciders::hp_two_points(reduct(a, st))});
            }
        }
    }
    return report;
}

std::vector<std::string> directed_problems() { return {"reach", "hp_0max", "hp_two_points"}; }

Formula symmetry_sentence() {
    return parse_formula("(forall (x y) (-> (E x y) (E y x)))", vocabularies::graph());
}

HarnessReport directed_version_harness(const std::string& directed, std::size_t max_size, unsigned workers) {
    const Problem& d = problem(directed);
    auto names = directed_problems();
    if (std::find(names.begin(), names.end(), d.name) == names.end())
        throw Error(ErrorKind::UnknownProblem, "problem " + directed + " has no undirected counterpart");
    const Problem& u = problem(d.name + "_undirected");
    const Vocabulary& voc = d.vocabulary;
    Formula sym = parse_formula("(forall (x y) (-> (E x y) (E y x)))", voc);
    CompiledFormula psi(sym, voc);
    HarnessReport report;
    const std::size_t consts = voc.constants().size();
    for (std::size_t n = 2; n <= max_size; ++n) {
        std::vector<std::pair<Element, Element>> slots;
        for (Element x = 0; x < n; ++x)
            for (Element y = x; y < n; ++y) slots.push_back({x, y});
        if (slots.size() > 24) throw BudgetExceeded("directed harness", "2^" + std::to_string(slots.size()), "2^24");
        std::uint64_t graphs = std::uint64_t{1} << slots.size();
        std::uint64_t per = power(n, consts);
        std::uint64_t count = graphs * per;
        auto build = [&](std::uint64_t i) {
            Structure a(voc, n);
            std::size_t e = a.relation("E");
            std::uint64_t g = i / per;
            for (std::size_t b = 0; b < slots.size(); ++b) {
                if (!((g >> b) & 1u)) continue;
                a.set(e, {slots[b].first, slots[b].second});
                a.set(e, {slots[b].second, slots[b].first});
            }
            Tuple cv = tuple_at(i % per, consts, n);
            for (std::size_t c = 0; c < consts; ++c) a.set_constant(c, cv[c]);
            return a;
        };
        std::vector<std::uint8_t> status(count, 0);
        for_each_index(count, workers, [&](std::uint64_t i) {
            Structure a = build(i);
            if (!psi.evaluate(a)) {
                status[i] = 2;
                return;
            }
            status[i] = d.decide(a) == u.decide(a) ? 0 : 1;
        });
        report.graphs += graphs;
        report.checked += count;
        for (std::uint64_t i = 0; i < count; ++i) {
            if (status[i] == 2) ++report.domain_failures;
            if (status[i] == 1) {
                Structure a = build(i);
                report.mismatches.push_back({a, d.decide(a), u.decide(a)});
            }
        }
    }
    return report;
}

HarnessReport autoreduction_harness(const std::string& name, std::size_t n, std::size_t size_bound,
                                    unsigned workers) {
    const Problem& p = problem(name);
    Fop rho = autoreduction(name, n);
    PaddedProblem target = pad(p, n);
    HarnessReport report;
    // 0 agree, 1 mismatch, 2 image too small
    for (std::size_t size = 2; size <= size_bound; ++size) {
        StructureSpace space(p.vocabulary, size);
        std::uint64_t count = space.checked_count(kDefaultBudget, "autoreduction harness");
        std::vector<std::uint8_t> status(count, 0);
        for_each_index(count, workers, [&](std::uint64_t i) {
            Structure a = space.at(i);
            Structure b = apply(rho.query(), a);
            if (b.size() <= n) status[i] = 2;
            else status[i] = p.decide(a) == target.decide(b) ? 0 : 1;
        }, 16);
        report.checked += count;
        report.graphs += count;
        for (std::uint64_t i = 0; i < count; ++i) {
            if (status[i] == 2) ++report.domain_failures;
            if (status[i] == 1) {
                Structure a = space.at(i);
                report.mismatches.push_back({a, p.decide(a), target.decide(apply(rho.query(), a))});
            }
        }
    }
    return report;
}

HarnessReport definition_harness(const std::string& name, const SampleOptions& options) {
    const Problem& p = problem(name);
    if (!p.definition) throw Error(ErrorKind::PreconditionViolation, "problem " + p.name + " has no definition");
    HarnessReport report;
    auto run = [&](const std::vector<Structure>& list) {
        std::vector<std::uint8_t> status(list.size(), 0);
        for_each_index(list.size(), options.workers, [&](std::uint64_t i) {
            status[i] = eval_so(list[i], *p.definition, options.budget) == p.decide(list[i]) ? 0 : 1;
        }, 1);
        report.checked += list.size();
        for (std::size_t i = 0; i < list.size(); ++i)
            if (status[i]) report.mismatches.push_back({list[i], !p.decide(list[i]), p.decide(list[i])});
    };
    for (std::size_t size = 2; size <= options.exhaustive_bound; ++size) {
        StructureSpace space(p.vocabulary, size);
        std::uint64_t count = space.checked_count(options.budget, "definition harness");
        std::vector<Structure> list;
        for (std::uint64_t i = 0; i < count; ++i) list.push_back(space.at(i));
        report.graphs += count;
        run(list);
    }
    if (options.samples > 0) {
        StructureSpace space(p.vocabulary, options.sample_size);
        BigCount total = space.count();
        if (total > std::numeric_limits<std::uint64_t>::max())
            throw BudgetExceeded("definition sampling", total.str(), "2^64");
        std::mt19937_64 rng(options.seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, static_cast<std::uint64_t>(total) - 1);
        std::vector<Structure> list;
        for (std::size_t i = 0; i < options.samples; ++i) list.push_back(space.at(pick(rng)));
        run(list);
    }
    return report;
}

}  // namespace fopkit
