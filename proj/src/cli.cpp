#include "fopkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fopkit/error.hpp"
#include "fopkit/io.hpp"
#include "fopkit/problems.hpp"
#include "fopkit/uniformity.hpp"

namespace fopkit {

namespace {

struct Options {
    std::size_t size_bound = 3;
    bool size_bound_set = false;
    std::string budget;
    std::string mode = "exhaustive";
    unsigned workers = 1;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::vector<std::string> vocab_files;

    std::string structure, formula, fop, psi, probe, voc, problem, m, assign, harness;
    std::size_t n = 3, k = 1, samples = 0, sample_size = 3, bound = kDefaultExclusivityBound;
    bool catalog = false, show = false, emit = false;
};

std::uint64_t parse_count(const std::string& text) {
    std::size_t caret = text.find('^');
    try {
        if (caret == std::string::npos) return std::stoull(text);
        std::uint64_t base = std::stoull(text.substr(0, caret));
        std::uint64_t exp = std::stoull(text.substr(caret + 1));
        std::uint64_t v = 1;
        for (std::uint64_t i = 0; i < exp; ++i) {
            if (v > std::numeric_limits<std::uint64_t>::max() / base)
                return std::numeric_limits<std::uint64_t>::max();
            v *= base;
        }
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::Syntax, "not a count: " + text);
    }
}

std::uint64_t budget_of(const Options& o) {
    if (!o.budget.empty()) return parse_count(o.budget);
    if (const char* env = std::getenv("FOPKIT_BUDGET")) return parse_count(env);
    return kDefaultBudget;
}

/// "3,4", "7..8" or a mix: "3,5..7".
std::vector<std::size_t> parse_m_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string part;
    try {
        while (std::getline(ss, part, ',')) {
            auto dots = part.find("..");
            if (dots == std::string::npos) {
                out.push_back(std::stoul(part));
            } else {
                std::size_t lo = std::stoul(part.substr(0, dots)), hi = std::stoul(part.substr(dots + 2));
                for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
            }
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::Syntax, "not a list of sizes: " + text);
    }
    if (out.empty()) throw Error(ErrorKind::Syntax, "no sizes given");
    return out;
}

/// "x=1,y=0".
Assignment parse_assignment(const std::string& text) {
    Assignment out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Syntax, "expected var=value in " + part);
        try {
            out[part.substr(0, eq)] = static_cast<Element>(std::stoul(part.substr(eq + 1)));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Syntax, "not a value: " + part);
        }
    }
    return out;
}

std::string print_assignment(const Assignment& asg) {
    std::string out;
    for (const auto& [v, e] : asg) out += (out.empty() ? "" : ",") + v + "=" + std::to_string(e);
    return out.empty() ? "-" : out;
}

void require(const std::string& value, const std::string& flag) {
    if (value.empty()) throw Error(ErrorKind::Syntax, "missing " + flag);
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {
        for (const auto& file : o.vocab_files)
            for (const auto& v : parse_vocabularies(read_file(file))) registry_.add(v);
    }

    int eval() {
        require(o_.structure, "--structure");
        require(o_.formula, "--formula");
        Structure a = parse_structure(read_file(o_.structure), registry_);
        Formula f = parse_formula(read_file(o_.formula), a.vocabulary());
        bool v = eval_so(a, f, budget_of(o_), parse_assignment(o_.assign));
        out_ << (v ? "TRUE" : "FALSE") << '\n';
        return v ? kExitVerified : kExitCounterexample;
    }

    int eval_so_command() {
        if (o_.problem.empty()) {
            require(o_.structure, "--structure or --problem");
            Structure a = parse_structure(read_file(o_.structure), registry_);
            Formula f = parse_formula(read_file(o_.formula), a.vocabulary());
            bool v = eval_so(a, f, budget_of(o_), parse_assignment(o_.assign));
            out_ << (v ? "TRUE" : "FALSE") << " tables=" << so_enumeration_count(f, a.size()).str() << '\n';
            return v ? kExitVerified : kExitCounterexample;
        }
        SampleOptions so;
        so.exhaustive_bound = o_.size_bound_set ? o_.size_bound : 2;
        so.samples = o_.samples;
        so.sample_size = o_.sample_size;
        so.seed = o_.seed;
        so.budget = budget_of(o_);
        so.workers = o_.workers;
        const std::string& name = problem(o_.problem).name;
        HarnessReport r = definition_harness(name, so);
        out_ << "DEFINITION problem=" << name << " exhaustive=2.." << so.exhaustive_bound << " samples=" << so.samples
             << " sample_size=" << so.sample_size << " seed=" << so.seed << " checked=" << r.checked
             << " mismatches=" << r.mismatches.size() << '\n';
        for (const auto& mm : r.mismatches)
            out_ << "MISMATCH eval_so=" << mm.left << " decider=" << mm.right << ' ' << print_structure(mm.structure)
                 << '\n';
        return r.passed() ? kExitVerified : kExitCounterexample;
    }

    int apply_fop() {
        require(o_.fop, "--fop");
        require(o_.structure, "--structure");
        FoQuery q = parse_fop(read_file(o_.fop), registry_);
        Structure a = parse_structure(read_file(o_.structure), registry_);
        out_ << print_structure(apply(q, a)) << '\n';
        return kExitVerified;
    }

    int validate() {
        require(o_.fop, "--fop");
        FoQuery q = parse_fop(read_file(o_.fop), registry_);
        FopValidation r = validate_fop(q, o_.bound);
        if (r.valid()) {
            out_ << "VALID fop=" << q.name << " bound=" << r.bound << '\n';
            return kExitVerified;
        }
        for (const auto& v : r.violations) {
            out_ << "VIOLATION symbol=" << v.symbol << ' ' << v.message;
            if (v.kind == FopViolation::Kind::Overlap) {
                out_ << " size=" << v.size << " variables=(";
                for (std::size_t i = 0; i < v.variables.size(); ++i) out_ << (i ? "," : "") << v.variables[i];
                out_ << ") constants=(";
                for (std::size_t i = 0; i < v.constants.size(); ++i) out_ << (i ? "," : "") << v.constants[i];
                out_ << ')';
            }
            out_ << '\n';
        }
        return kExitCounterexample;
    }

    int pullback_check() {
        std::vector<std::pair<std::string, Fop>> fops;
        if (o_.catalog) {
            for (auto& c : catalog_fops(o_.n)) fops.push_back({c.name, c.fop});
        } else {
            require(o_.fop, "--fop or --catalog");
            FoQuery q = parse_fop(read_file(o_.fop), registry_);
            fops.push_back({q.name, Fop(q)});
        }
        bool sound = true;
        for (const auto& [name, rho] : fops) {
            if (o_.show)
                for (const auto& lit : target_literal_forms(rho.query().target))
                    out_ << "MU " << print_formula(lit) << " := " << print_formula(pullback(rho, lit).mu) << '\n';
            PullbackCheck r = check_pullback(rho, o_.size_bound, budget_of(o_), o_.workers);
            out_ << "PULLBACK fop=" << name << " literals=" << r.literals.size() << " structures=" << r.structures
                 << " checked=" << r.checked << " mismatches=" << (r.sound() ? 0 : 1) << '\n';
            if (r.mismatch) {
                sound = false;
                out_ << "MISMATCH literal=" << print_formula(r.mismatch->literal)
                     << " assignment=" << print_assignment(r.mismatch->assignment)
                     << " image=" << r.mismatch->image_value << " pulled=" << r.mismatch->pulled_value << '\n'
                     << "SOURCE " << print_structure(r.mismatch->source) << '\n';
            }
        }
        return sound ? kExitVerified : kExitCounterexample;
    }

    int consistency() {
        require(o_.formula, "--formula");
        require(o_.m, "--m");
        std::optional<Problem> within;
        Vocabulary voc;
        if (!o_.problem.empty()) {
            within = problem(o_.problem);
            voc = within->vocabulary;
        } else {
            require(o_.voc, "--voc or --problem");
            voc = registry_.get(o_.voc);
        }
        Formula f = parse_formula(read_file(o_.formula), voc);
        Assignment asg = parse_assignment(o_.assign);
        StructurePredicate pred;
        if (within) pred = [&](const Structure& a) { return within->decide(a); };
        bool all = true;
        for (std::size_t m : parse_m_list(o_.m)) {
            ConsistencySearch r = search_consistent(voc, f, asg, m, pred, {budget_of(o_), o_.workers});
            if (r.witness) {
                out_ << "CONSISTENT m=" << m << ' ' << print_structure(*r.witness) << '\n';
            } else {
                all = false;
                out_ << "INCONSISTENT m=" << m << " candidates=" << r.candidates << '\n';
            }
        }
        return all ? kExitVerified : kExitCounterexample;
    }

    int uniformity() {
        require(o_.problem, "--problem");
        require(o_.m, "--m");
        UniformityQuery q;
        q.problem = problem(o_.problem).name;
        q.n = o_.n;
        q.k = o_.k;
        q.m_values = parse_m_list(o_.m);
        q.mode = o_.mode == "constructive" ? UniformityMode::Constructive : UniformityMode::Exhaustive;
        q.budget = budget_of(o_);
        q.workers = o_.workers;
        const Vocabulary& voc = problem(q.problem).vocabulary;
        if (!o_.probe.empty()) {
            std::vector<Formula> probes;
            std::stringstream ss(read_file(o_.probe));
            std::string line;
            while (std::getline(ss, line)) {
                auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                probes.push_back(parse_formula(line, voc));
            }
            q.probe = probes;
        }
        UniformityReport r = check_uniformity(q);
        const bool tsv = o_.format == "tsv";
        if (tsv) {
            out_ << "m\tverdict\tconjunctions\tconsistent\twitnessed\tfallbacks\tcounterexamples\tformula\n";
        } else {
            out_ << "UNIFORMITY problem=" << q.problem << " n=" << q.n << " k=" << q.k << " mode=" << o_.mode
                 << (q.probe ? " probe=" + std::to_string(q.probe->size()) : "") << '\n';
        }
        bool counterexample = false, inconclusive = false;
        for (const auto& v : r.verdicts) {
            counterexample |= v.verdict == Verdict::CounterexampleFound;
            inconclusive |= v.verdict == Verdict::Inconclusive;
            if (tsv) {
                out_ << v.m << '\t' << to_string(v.verdict) << '\t' << v.conjunctions << '\t' << v.consistent << '\t'
                     << v.witnessed << '\t' << v.builder_fallbacks << '\t' << v.counterexamples << '\t'
                     << (v.counterexample ? print_formula(v.counterexample->formula) : "-") << '\n';
                continue;
            }
            out_ << "VERDICT m=" << v.m << ' ' << to_string(v.verdict) << " conjunctions=" << v.conjunctions
                 << " consistent=" << v.consistent << " witnessed=" << v.witnessed
                 << " fallbacks=" << v.builder_fallbacks << " counterexamples=" << v.counterexamples << '\n';
            if (v.counterexample) {
                const auto& ce = *v.counterexample;
                out_ << "COUNTEREXAMPLE m=" << v.m << " conjunction=" << print_formula(ce.formula)
                     << " candidates=" << ce.candidates << '\n'
                     << "CONSISTENT-WITH " << print_structure(ce.consistency_witness) << '\n';
                if (ce.coloring)
                    out_ << "COLORINGS edges=" << ce.coloring->edges << " triangles=" << ce.coloring->triangles
                         << " colorings=" << ce.coloring->colorings
                         << " triangle_free=" << ce.coloring->triangle_free << '\n';
            }
            if (!v.note.empty()) out_ << "NOTE m=" << v.m << ' ' << v.note << '\n';
        }
        if (!tsv) {
            std::size_t top = *std::max_element(q.m_values.begin(), q.m_values.end());
            out_ << "ASSUMPTION m>=" << top + 1 << " untested\n";
        }
        if (counterexample) return kExitCounterexample;
        if (inconclusive) return kExitBudget;
        return kExitVerified;
    }

    int autoreduce() {
        require(o_.problem, "--problem");
        const std::string& name = problem(o_.problem).name;
        Fop rho = autoreduction(name, o_.n);
        if (o_.emit) {
            out_ << print_fop(rho.query());
            return kExitVerified;
        }
        HarnessReport r = autoreduction_harness(name, o_.n, o_.size_bound, o_.workers);
        out_ << "AUTOREDUCTION problem=" << name << " n=" << o_.n << " fop=" << rho.query().name
             << " arity=" << rho.query().arity << " sizes=2.." << o_.size_bound << " checked=" << r.checked
             << " small_images=" << r.domain_failures << " mismatches=" << r.mismatches.size() << '\n';
        for (const auto& mm : r.mismatches)
            out_ << "MISMATCH source=" << mm.left << " image=" << mm.right << ' ' << print_structure(mm.structure)
                 << '\n';
        return r.passed() ? kExitVerified : kExitCounterexample;
    }

    int superfluous() {
        require(o_.psi, "--psi");
        std::optional<Fop> rho;
        if (!o_.fop.empty()) {
            rho.emplace(parse_fop(read_file(o_.fop), registry_));
        } else {
            require(o_.problem, "--fop or --problem");
            rho.emplace(autoreduction(problem(o_.problem).name, o_.n));
        }
        Formula psi = parse_formula(read_file(o_.psi), rho->query().target);
        SuperfluityReport r = check_superfluous_wrt_fop(psi, *rho, o_.size_bound, budget_of(o_), o_.workers);
        if (r.superfluous()) {
            out_ << "SUPERFLUOUS fop=" << rho->query().name << " sizes=2.." << o_.size_bound
                 << " checked=" << r.checked << '\n';
            return kExitVerified;
        }
        const auto& ce = *r.counterexample;
        out_ << "NOT-SUPERFLUOUS fop=" << rho->query().name << " sizes=2.." << o_.size_bound
             << " checked=" << r.checked << '\n'
             << "SOURCE " << print_structure(ce.source) << '\n'
             << "IMAGE " << print_structure(ce.image) << '\n'
             << "ASSIGNMENT " << print_assignment(ce.assignment) << '\n'
             << "CLAUSE " << print_formula(fo::disj_flat(ce.clause)) << '\n'
             << "INSTANCE " << print_formula(ce.instance) << '\n';
        return kExitCounterexample;
    }

    int harness() {
        HarnessReport r;
        std::string label;
        if (o_.harness == "longest-path") {
            std::size_t bound = o_.size_bound_set ? o_.size_bound : 3;
            r = longest_path_harness(bound, o_.workers);
            label = "longest-path sizes=2.." + std::to_string(bound);
        } else if (o_.harness == "directed") {
            require(o_.problem, "--problem");
            std::size_t bound = o_.size_bound_set ? o_.size_bound : 4;
            const std::string& name = problem(o_.problem).name;
            r = directed_version_harness(name, bound, o_.workers);
            label = "directed problem=" + name + " sizes=2.." + std::to_string(bound);
        } else {
            throw Error(ErrorKind::Syntax, "harness must be longest-path or directed");
        }
        out_ << "HARNESS " << label << " checked=" << r.checked << " graphs=" << r.graphs
             << " domain_failures=" << r.domain_failures << " mismatches=" << r.mismatches.size() << '\n';
        for (const auto& mm : r.mismatches)
            out_ << "MISMATCH left=" << mm.left << " right=" << mm.right << ' ' << print_structure(mm.structure)
                 << '\n';
        return r.passed() ? kExitVerified : kExitCounterexample;
    }

    int catalog() {
        const bool tsv = o_.format == "tsv";
        auto has = [](const std::vector<std::string>& names, const std::string& n) {
            return std::find(names.begin(), names.end(), n) != names.end();
        };
        auto autored = autoreducible_problems();
        auto builders = constructive_problems();
        if (tsv) out_ << "problem\tvocabulary\tcomplexity\tdefinition\tautoreduction\tbuilder\n";
        for (const auto& name : problem_names()) {
            const Problem& p = problem(name);
            if (tsv) {
                out_ << p.name << '\t' << p.vocabulary.name() << '\t' << p.complexity << '\t'
                     << (p.definition ? "yes" : "no") << '\t' << (has(autored, name) ? "yes" : "no") << '\t'
                     << (has(builders, name) ? "yes" : "no") << '\n';
                continue;
            }
            out_ << "PROBLEM " << p.name << " vocab=" << p.vocabulary.name() << " complexity=" << p.complexity
                 << " definition=" << (p.definition ? "yes" : "no")
                 << " autoreduction=" << (has(autored, name) ? "yes" : "no")
                 << " builder=" << (has(builders, name) ? "yes" : "no") << '\n';
        }
        if (!tsv)
            for (const auto& c : catalog_fops(o_.n))
                out_ << "FOP " << c.name << ' ' << c.source_problem << " -> "
                     << (c.target_threshold ? c.target_problem + "_" + std::to_string(*c.target_threshold)
                                            : c.target_problem)
                     << " arity=" << c.fop.query().arity << '\n';
        return kExitVerified;
    }

private:
    const Options& o_;
    std::ostream& out_;
    VocabularyRegistry registry_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Finite-model toolkit for first-order projections, uniformity and superfluity", "fopkit"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* c) {
        c->add_option("--size-bound", o.size_bound, "largest source structure size (default 3)")
            ->each([&](const std::string&) { o.size_bound_set = true; });
        c->add_option("--budget", o.budget, "enumeration budget, N or B^E (default 2^26, env FOPKIT_BUDGET)");
        c->add_option("--workers", o.workers, "worker threads; results do not depend on it")
            ->check(CLI::Range(1u, 256u));
        c->add_option("--seed", o.seed, "seed for sampled checks");
        c->add_option("--format", o.format, "report format")->check(CLI::IsMember({"text", "tsv"}));
        c->add_option("--vocab", o.vocab_files, "file with extra vocabulary declarations");
    };

    auto* eval = app.add_subcommand("eval", "evaluate a formula in a structure");
    auto* eval_so = app.add_subcommand("eval-so", "second-order evaluation, or definition vs decider cross-check");
    auto* apply_fop = app.add_subcommand("apply-fop", "apply a fop to a structure");
    auto* validate = app.add_subcommand("validate-fop", "check projectivity and guard exclusivity");
    auto* pullback = app.add_subcommand("pullback-check", "check pulled-back literals against images");
    auto* consistency = app.add_subcommand("consistency", "search for a size-m model of a formula");
    auto* uniformity = app.add_subcommand("uniformity", "(n,k)-uniformity verdicts per m");
    auto* autoreduce = app.add_subcommand("autoreduce", "padding fop of a problem and its equivalence check");
    auto* superfluous = app.add_subcommand("superfluous", "check a universal sentence on every fop image");
    auto* harness = app.add_subcommand("harness", "longest-path or directed-version harness");
    auto* catalog = app.add_subcommand("catalog", "list problems and catalog fops");
    for (auto* c : {eval, eval_so, apply_fop, validate, pullback, consistency, uniformity, autoreduce, superfluous,
                    harness, catalog})
        common(c);

    for (auto* c : {eval, eval_so, apply_fop}) c->add_option("--structure", o.structure, "structure file");
    for (auto* c : {eval, eval_so, consistency}) {
        c->add_option("--formula", o.formula, "formula file");
        c->add_option("--assign", o.assign, "values of free variables, x=1,y=0");
    }
    for (auto* c : {apply_fop, validate, pullback, superfluous}) c->add_option("--fop", o.fop, "fop file");
    for (auto* c : {eval_so, consistency, uniformity, autoreduce, superfluous, harness})
        c->add_option("--problem", o.problem, "catalog problem");
    for (auto* c : {pullback, uniformity, autoreduce, superfluous, catalog})
        c->add_option("--n", o.n, "padding threshold / uniformity n");
    eval_so->add_option("--samples", o.samples, "random structures of --sample-size to add");
    eval_so->add_option("--sample-size", o.sample_size, "size of sampled structures");
    validate->add_option("--bound", o.bound, "largest size for the exclusivity check");
    pullback->add_flag("--catalog", o.catalog, "check every catalog fop");
    pullback->add_flag("--show", o.show, "print the pulled-back formulas");
    consistency->add_option("--voc", o.voc, "vocabulary name");
    for (auto* c : {consistency, uniformity}) c->add_option("--m", o.m, "sizes: 3,4 or 7..8");
    uniformity->add_option("--k", o.k, "largest conjunction size");
    uniformity->add_option("--mode", o.mode, "exhaustive or constructive")
        ->check(CLI::IsMember({"exhaustive", "constructive"}));
    uniformity->add_option("--probe", o.probe, "file of ground conjunctions, one per line");
    autoreduce->add_flag("--emit", o.emit, "print the fop only");
    superfluous->add_option("--psi", o.psi, "universal sentence file");
    harness->add_option("kind", o.harness, "longest-path or directed")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitVerified;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        Runner r(o, out);
        if (*eval) return r.eval();
        if (*eval_so) return r.eval_so_command();
        if (*apply_fop) return r.apply_fop();
        if (*validate) return r.validate();
        if (*pullback) return r.pullback_check();
        if (*consistency) return r.consistency();
        if (*uniformity) return r.uniformity();
        if (*autoreduce) return r.autoreduce();
        if (*superfluous) return r.superfluous();
        if (*harness) return r.harness();
        if (*catalog) return r.catalog();
    } catch (const BudgetExceeded& e) {
        err << "budget: " << e.what() << '\n';
        return kExitBudget;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fopkit
