// Acceptance run: one PASS/FAIL line per criterion, with wall time and limit.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "fopkit/cli.hpp"
#include "fopkit/error.hpp"
#include "fopkit/io.hpp"
#include "fopkit/uniformity.hpp"
#include "support.hpp"

using namespace fopkit;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str() + err.str()};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

int failures = 0;

// Runs one criterion; detail is filled by the body and printed after the verdict.
void criterion(int id, const std::string& title, double limit_seconds, const std::function<bool(std::string&)>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(" exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = seconds < limit_seconds;
    if (!in_time) detail += " over time limit";
    bool pass = ok && in_time;
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << title << " time=" << std::fixed;
    std::cout.precision(2);
    std::cout << seconds << "s limit=" << limit_seconds << "s" << detail << std::endl;
}

std::string verdict_summary(const UniformityReport& r) {
    std::string out;
    for (const auto& v : r.verdicts)
        out += " m=" + std::to_string(v.m) + ":" + to_string(v.verdict) + "/" + std::to_string(v.conjunctions) +
               "/fallbacks=" + std::to_string(v.builder_fallbacks);
    return out;
}

UniformityQuery query(const std::string& p, std::size_t n, std::size_t k, std::vector<std::size_t> m,
                      UniformityMode mode) {
    UniformityQuery q;
    q.problem = p;
    q.n = n;
    q.k = k;
    q.m_values = std::move(m);
    q.mode = mode;
    return q;
}

}  // namespace

int main() {
    criterion(1, "exhaustive uniformity of reach n=3 k=1 m=3,4", 60, [](std::string& d) {
        Run r = cli({"uniformity", "--problem", "reach", "--n", "3", "--k", "1", "--m", "3,4", "--mode", "exhaustive"});
        d = " exit=" + std::to_string(r.code);
        return r.code == 0 && contains(r.out, "VERDICT m=3 uniform") && contains(r.out, "VERDICT m=4 uniform");
    });

    criterion(2, "constructive uniformity with rechecked builders", 600, [](std::string& d) {
        const auto c = UniformityMode::Constructive;
        std::vector<UniformityQuery> qs = {query("reach", 7, 3, {7, 8}, c), query("altreach", 7, 3, {7, 8}, c),
                                           query("hp_0max", 8, 2, {8}, c), query("co_mono_triangle", 8, 1, {8}, c)};
        bool ok = true;
        for (const auto& q : qs) {
            // a builder output failing the decider or formula gate throws
            UniformityReport r = check_uniformity(q);
            d += " " + q.problem + verdict_summary(r);
            for (const auto& v : r.verdicts) ok = ok && v.witnessed == v.consistent;
            ok = ok && r.uniform();
        }
        return ok;
    });

    criterion(3, "K6 probe refutes MonoTriangle at m=6", 10, [](std::string& d) {
        Run r = cli({"uniformity", "--problem", "mono_triangle", "--n", "6", "--k", "15", "--m", "6", "--probe",
                     testing::source_path("data/k6.probe")});
        d = " exit=" + std::to_string(r.code);
        return r.code == kExitCounterexample && contains(r.out, "VERDICT m=6 counterexample") &&
               contains(r.out, "COLORINGS edges=15 triangles=20 colorings=32768 triangle_free=0");
    });

    criterion(4, "pullback soundness for every catalog fop", 300, [](std::string& d) {
        bool ok = true;
        for (const auto& c : catalog_fops(3)) {
            PullbackCheck p = check_pullback(c.fop, 3);
            d += " " + c.name + ":" + std::to_string(p.checked) + (p.sound() ? "" : ":MISMATCH");
            ok = ok && p.sound() && p.checked > 0;
        }
        return ok;
    });

    criterion(5, "autoreductions at n=3 are correct and enlarge", 300, [](std::string& d) {
        bool ok = true;
        for (const auto& name : autoreducible_problems()) {
            HarnessReport r = autoreduction_harness(name, 3, 3);
            d += " " + name + ":" + std::to_string(r.checked) + "/" + std::to_string(r.mismatches.size()) + "/" +
                 std::to_string(r.domain_failures);
            ok = ok && r.passed() && r.checked > 0;
        }
        return ok;
    });

    criterion(6, "second-order definitions agree with deciders", 300, [](std::string& d) {
        SampleOptions three;
        three.exhaustive_bound = 2;
        three.samples = 200;
        three.sample_size = 3;
        three.budget = std::uint64_t{1} << 27;
        HarnessReport a = definition_harness("three_dm", three);
        SampleOptions hp = three;
        hp.exhaustive_bound = 3;
        HarnessReport b = definition_harness("hp_0max", hp);
        d = " three_dm:" + std::to_string(a.checked) + "/" + std::to_string(a.mismatches.size()) +
            " hp_0max:" + std::to_string(b.checked) + "/" + std::to_string(b.mismatches.size());
        return a.passed() && b.passed() && a.checked == 256 + 200 && b.checked == 16 + 512 + 200;
    });

    criterion(7, "superfluity accepts the block-0 guard and rejects no-edges", 120, [](std::string& d) {
        Run yes = cli({"superfluous", "--psi", testing::source_path("data/block0-guard.fof"), "--problem", "reach",
                       "--n", "3", "--size-bound", "3"});
        Run no = cli({"superfluous", "--psi", testing::source_path("data/no-edges.fof"), "--fop",
                      testing::source_path("data/identity.fop"), "--size-bound", "3"});
        d = " guard_exit=" + std::to_string(yes.code) + " no_edges_exit=" + std::to_string(no.code);
        return yes.code == 0 && contains(yes.out, "SUPERFLUOUS") && no.code == kExitCounterexample &&
               contains(no.out, "NOT-SUPERFLUOUS") && contains(no.out, "SOURCE structure");
    });

    criterion(8, "longest-path and directed-version harnesses", 120, [](std::string& d) {
        HarnessReport lp = longest_path_harness(3);
        d = " longest_path graphs=" + std::to_string(lp.graphs) + " mismatches=" + std::to_string(lp.mismatches.size());
        bool ok = lp.passed() && lp.graphs == 16 + 512;
        for (const auto& name : directed_problems()) {
            HarnessReport r = directed_version_harness(name, 4);
            d += " " + name + ":" + std::to_string(r.graphs) + "/" + std::to_string(r.mismatches.size());
            ok = ok && r.passed() && r.graphs == 8 + 64 + 1024;
        }
        return ok;
    });

    criterion(9, "monotone re-runs never downgrade Uniform", 600, [](std::string& d) {
        const auto ex = UniformityMode::Exhaustive, co = UniformityMode::Constructive;
        std::vector<UniformityQuery> bases = {query("reach", 3, 1, {3, 4}, ex),   query("reach", 3, 2, {3, 4}, ex),
                                              query("altreach", 3, 2, {3, 4}, ex), query("hp_0max", 4, 1, {4}, ex),
                                              query("reach", 7, 3, {7, 8}, co),   query("hp_0max", 8, 2, {8}, co)};
        bool ok = true;
        std::size_t reruns = 0;
        for (const auto& base : bases) {
            if (!check_uniformity(base).uniform()) {
                d += " base " + base.problem + " not uniform";
                ok = false;
                continue;
            }
            std::vector<UniformityQuery> implied;
            if (base.k > 1) {
                UniformityQuery q = base;
                --q.k;
                implied.push_back(q);
            }
            UniformityQuery bigger_n = base;
            ++bigger_n.n;
            bigger_n.m_values.clear();
            for (std::size_t m : base.m_values)
                if (m >= bigger_n.n) bigger_n.m_values.push_back(m);
            if (bigger_n.m_values.empty()) bigger_n.m_values.push_back(bigger_n.n);
            implied.push_back(bigger_n);
            UniformityQuery more_m = base;
            more_m.m_values.push_back(base.m_values.back() + 1);
            implied.push_back(more_m);
            for (const auto& q : implied) {
                ++reruns;
                UniformityReport r = check_uniformity(q);
                if (!r.uniform()) {
                    d += " downgrade " + q.problem + " n=" + std::to_string(q.n) + " k=" + std::to_string(q.k);
                    ok = false;
                }
            }
        }
        d += " reruns=" + std::to_string(reruns);
        return ok;
    });

    criterion(10, "round trip on 1000 values and worker-count determinism", 600, [](std::string& d) {
        std::mt19937_64 rng(10);
        const auto vocs = vocabularies::builtins();
        std::size_t agreed = 0;
        for (std::size_t i = 0; i < 1000; ++i) {
            const Vocabulary& voc = vocs[i % vocs.size()];
            if (i % 2 == 0) {
                testing::FormulaGenerator gen{rng, voc, {}, true, true};
                Formula f = gen.formula(4);
                agreed += parse_formula(print_formula(f), voc) == f;
            } else {
                std::size_t n = (voc.name() == "3dm" || voc.name() == "lp") ? 2 : 2 + i % 3;
                Structure a = testing::random_structure(rng, voc, n, 0.3);
                agreed += parse_structure(print_structure(a)) == a;
            }
        }
        std::vector<std::vector<std::string>> commands = {
            {"uniformity", "--problem", "reach", "--n", "3", "--k", "2", "--m", "3,4"},
            {"uniformity", "--problem", "altreach", "--n", "3", "--k", "4", "--m", "3,4", "--probe",
             testing::source_path("data/altreach-k4.probe")},
            {"uniformity", "--problem", "hp_0max", "--n", "8", "--k", "2", "--m", "8", "--mode", "constructive"},
            {"pullback-check", "--catalog", "--n", "3"},
            {"eval-so", "--problem", "hp_0max", "--samples", "100", "--seed", "3"},
            {"harness", "longest-path"},
        };
        std::size_t identical = 0;
        for (auto cmd : commands) {
            auto one = cmd, four = cmd;
            one.insert(one.end(), {"--workers", "1"});
            four.insert(four.end(), {"--workers", "4"});
            Run a = cli(one), b = cli(four);
            identical += a.code == b.code && a.out == b.out && !a.out.empty();
        }
        d = " round_trip=" + std::to_string(agreed) + "/1000 identical_reports=" + std::to_string(identical) + "/" +
            std::to_string(commands.size());
        return agreed == 1000 && identical == commands.size();
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
