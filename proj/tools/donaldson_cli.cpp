// donaldson: plumbing graphs, lattice embeddings and sweeps from the shell.
//
// Exit codes: 0 success / embedding found / audit perfect, 1 usage or input
// error (including non-algebraic knots and forms that are not negative
// definite), 2 no negative-definite form (N < 0), 3 no embedding,
// 4 search budget exhausted, 5 audit disagreement.

#include "donaldson/classify.hpp"
#include "donaldson/hjcf.hpp"
#include "donaldson/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace donaldson;

namespace {

enum Exit : int {
    kOk = 0,
    kError = 1,
    kNoNegativeDefinite = 2,
    kNoEmbedding = 3,
    kIndeterminate = 4,
    kDisagreement = 5,
};

/// Thrown for input the user must fix; printed and mapped to exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecArgs {
    std::string pairs;
    std::optional<std::int64_t> n;
    std::string spec_file;

    void attach(CLI::App* app) {
        app->add_option("--pairs", pairs, "cable pairs p1,a1,p2,a2,...");
        app->add_option("--n", n, "surgery coefficient");
        app->add_option("--spec", spec_file, "spec JSON file");
    }
    bool given() const { return !pairs.empty() || !spec_file.empty(); }

    cabling::SurgerySpec get() const {
        if (!spec_file.empty()) return io::spec_from_json(io::read_file(spec_file));
        if (pairs.empty() || !n) throw UsageError("give --pairs and --n, or --spec");
        std::vector<std::int64_t> xs;
        std::stringstream ss(pairs);
        for (std::string item; std::getline(ss, item, ',');) {
            try {
                std::size_t used = 0;
                xs.push_back(std::stoll(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::logic_error&) {
                throw UsageError("bad --pairs entry '" + item + "'");
            }
        }
        if (xs.empty() || xs.size() % 2 != 0) throw UsageError("--pairs needs an even number of integers");
        std::vector<cabling::CablePair> ps;
        for (std::size_t i = 0; i < xs.size(); i += 2) ps.push_back({xs[i], xs[i + 1]});
        return cabling::make_spec(cabling::CableTower(std::move(ps)), *n);
    }
};

std::string out_path(const std::string& dir, const std::string& name) {
    if (!dir.empty()) fs::create_directories(dir);
    return (fs::path(dir.empty() ? "." : dir) / name).string();
}

// ---------------------------------------------------------------- contfrac

struct ContfracArgs {
    std::string fraction;
    std::string eval;
    bool dual = false;
    bool reverse = false;
    bool json = false;
};

int run_contfrac(const ContfracArgs& a) {
    if (a.fraction.empty() == a.eval.empty()) throw UsageError("give either a fraction or --eval");
    hjcf::CoeffSeq s = a.eval.empty() ? hjcf::expand_neg_cf(hjcf::PositiveRational::parse(a.fraction))
                                      : hjcf::parse_coeffs(a.eval);
    if (!hjcf::is_canonical(s)) throw UsageError("coefficients must all be at least 2");
    if (a.dual) s = hjcf::dual_point_rule(s);
    if (a.reverse) std::reverse(s.begin(), s.end());
    const auto value = hjcf::eval_neg_cf(s);
    if (a.json) {
        nlohmann::json j;
        j["input"] = a.eval.empty() ? a.fraction : a.eval;
        j["coefficients"] = nlohmann::json::array();
        for (const auto& c : s) j["coefficients"].push_back(c.fits_slong_p() ? nlohmann::json(c.get_si()) : nlohmann::json(c.get_str()));
        j["value"] = value.to_string();
        std::cout << j.dump() << "\n";
    } else if (a.eval.empty()) {
        std::cout << hjcf::to_string(s) << "\n";
    } else {
        std::cout << value.to_string() << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- graph

struct GraphArgs {
    SpecArgs spec;
    bool raw = false, reduced = false, closed = false;
    bool json = false;
    std::string dot;
    std::string out;
};

int run_graph(const GraphArgs& a) {
    const auto s = a.spec.get();
    if (!a.raw && !a.closed && s.reduced_framing() < 0) {
        std::cerr << "no negative definite form: N = " << s.reduced_framing() << " < 0\n";
        return kNoNegativeDefinite;
    }
    std::string status;
    const auto g = [&] {
        if (a.raw) return cabling::raw_plumbing_annotated(s);
        if (a.closed) return cabling::closed_form_two_iter(s);
        auto r = cabling::reduced_plumbing(s);
        if (r.status == cabling::ReducedStatus::ReducibleBoundary) status = "reducible-boundary";
        if (r.status == cabling::ReducedStatus::OutOfScope) status = "out-of-scope";
        return std::move(r.graph);
    }();
    const auto gram = plumbing::gram_matrix(g.tree);
    const mpz_class det = abs(plumbing::det_exact(gram));
    const bool nd = plumbing::is_negative_definite(gram);

    if (!a.dot.empty()) {
        const auto text = io::to_dot(g.tree, g.roles);
        if (a.dot == "-") std::cout << text;
        else io::write_file(a.dot, text);
    }
    if (!a.out.empty()) io::write_file(a.out, io::tree_to_json(g.tree, 2) + "\n");
    if (a.json) {
        auto j = nlohmann::json::parse(io::tree_to_json(g.tree));
        j["rank"] = g.tree.size();
        j["det"] = det.fits_slong_p() ? nlohmann::json(det.get_si()) : nlohmann::json(det.get_str());
        j["negative_definite"] = nd;
        if (!status.empty()) j["status"] = status;
        std::cout << j.dump() << "\n";
    } else if (a.dot != "-") {
        std::cout << plumbing::describe(g.tree) << "\n";
        std::cout << "rank " << g.tree.size() << "\n";
        std::cout << "det " << det.get_str() << "\n";
        std::cout << "negative-definite " << (nd ? "yes" : "no") << "\n";
        if (!status.empty()) std::cout << "status " << status << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- embed

lattice::VertexOrder parse_order(const std::string& s) {
    if (s == "frontier") return lattice::VertexOrder::Frontier;
    if (s == "heaviest") return lattice::VertexOrder::HeaviestFirst;
    if (s == "given") return lattice::VertexOrder::Given;
    throw UsageError("unknown order '" + s + "'");
}

struct EmbedArgs {
    std::string graph_file;
    SpecArgs spec;
    std::optional<int> rank;
    bool enumerate = false;
    bool all = false;
    std::optional<std::uint64_t> budget;
    std::string order = "frontier";
    std::string witness;
    std::string out_dir;
};

int run_embed(const EmbedArgs& a) {
    if (a.graph_file.empty() == !a.spec.given()) throw UsageError("give a graph file or a spec");
    std::optional<plumbing::WeightedTree> tree;
    if (!a.graph_file.empty()) {
        tree = io::tree_from_json(io::read_file(a.graph_file));
    } else {
        const auto s = a.spec.get();
        if (s.reduced_framing() < 0) {
            std::cerr << "no negative definite form: N = " << s.reduced_framing() << " < 0\n";
            return kNoNegativeDefinite;
        }
        tree = cabling::reduced_plumbing(s).graph.tree;
    }
    const auto gram = plumbing::gram_matrix(*tree);
    if (!plumbing::is_negative_definite(gram)) {
        std::cerr << "the intersection form is not negative definite\n";
        return kError;
    }
    const int rank = a.rank.value_or(static_cast<int>(gram.dimension()));
    lattice::SearchOptions opts{parse_order(a.order)};

    if (a.enumerate) {
        const auto all = lattice::enumerate_embeddings(gram, rank, !a.all, opts);
        std::cout << "classes " << all.size() << "\n";
        std::cout << "classes-up-to-graph-automorphisms " << lattice::count_up_to_automorphisms(gram, all) << "\n";
        for (std::size_t i = 0; i < all.size(); ++i) std::cout << "class " << i + 1 << "\n" << lattice::render(all[i]);
        return all.empty() ? kNoEmbedding : kOk;
    }

    const auto res = lattice::find_embedding(gram, rank, {a.budget}, opts);
    std::cout << "outcome " << lattice::to_string(res.outcome) << "\n";
    std::cout << "nodes " << res.nodes << "\n";
    if (res.outcome == lattice::SearchOutcome::Found) {
        const auto path = a.witness.empty() ? out_path(a.out_dir, "witness.json") : a.witness;
        io::write_file(path, io::witness_to_json(*res.embedding) + "\n");
        std::cout << lattice::render(*res.embedding);
        std::cout << "witness " << path << "\n";
        return kOk;
    }
    return res.outcome == lattice::SearchOutcome::None ? kNoEmbedding : kIndeterminate;
}

// ---------------------------------------------------------------- sweep / audit

classify::IntRange parse_range(const std::string& name, const std::string& text, std::int64_t min) {
    auto num = [&](const std::string& t) {
        try {
            std::size_t used = 0;
            const auto v = std::stoll(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return static_cast<std::int64_t>(v);
        } catch (const std::logic_error&) {
            throw UsageError("--" + name + ": bad number '" + t + "'");
        }
    };
    classify::IntRange r;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const auto lo = num(text.substr(0, colon));
        const auto hi = num(text.substr(colon + 1));
        if (lo > hi) throw UsageError("--" + name + ": empty interval " + text);
        r = classify::IntRange::interval(lo, hi);
    } else {
        std::vector<std::int64_t> xs;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');) xs.push_back(num(item));
        if (xs.empty()) throw UsageError("--" + name + ": empty list");
        r = classify::IntRange::of(std::move(xs));
    }
    for (auto x : r.values)
        if (x < min) throw UsageError("--" + name + ": values must be at least " + std::to_string(min));
    return r;
}

struct SweepArgs {
    std::string p1 = "2,3", k1 = "1:3", p2 = "2,3", k2 = "1:25", N = "2:6";
    std::string congruence = "both";
    std::optional<std::uint64_t> budget = classify::kDefaultNodeBudget;
    unsigned workers = 1;
    std::string route = "calculus";
    std::string csv;
    bool timing = false;
    bool no_witnesses = false;
    std::string out_dir;
    // audit only
    std::string family_form = "derived";
    std::string report;

    void attach(CLI::App* app) {
        app->add_option("--p1", p1, "p1 values: list a,b or interval lo:hi")->capture_default_str();
        app->add_option("--k1", k1, "k1 values (alpha1 = p1 k1 + 1)")->capture_default_str();
        app->add_option("--p2", p2, "p2 values")->capture_default_str();
        app->add_option("--k2", k2, "k2 values (alpha2 = p2 (k2+1) - 1 or p2 k2 + 1)")->capture_default_str();
        app->add_option("--N", N, "reduced framings N = n - p2 alpha2")->capture_default_str();
        app->add_option("--congruence", congruence, "minus, plus or both")->capture_default_str();
        app->add_option("--budget", budget, "search nodes per tuple")->capture_default_str();
        app->add_option("--workers", workers, "worker threads")->capture_default_str();
        app->add_option("--route", route, "graph construction: calculus or closed-form")->capture_default_str();
        app->add_option("--csv", csv, "CSV output path ('-' for stdout)");
        app->add_flag("--timing", timing, "fill the ms column");
        app->add_flag("--no-witnesses", no_witnesses, "do not write witness files");
    }

    classify::SweepRanges ranges() const {
        classify::SweepRanges r{parse_range("p1", p1, 2), parse_range("k1", k1, 1), parse_range("p2", p2, 2),
                                parse_range("k2", k2, 1), parse_range("N", N, std::numeric_limits<std::int64_t>::min()),
                                classify::Congruence::Both};
        if (congruence == "minus") r.congruence = classify::Congruence::Minus;
        else if (congruence == "plus") r.congruence = classify::Congruence::Plus;
        else if (congruence != "both") throw UsageError("--congruence must be minus, plus or both");
        return r;
    }

    classify::SweepOptions options() const {
        classify::SweepOptions o;
        o.workers = std::max(1u, workers);
        o.classify.budget = {budget};
        if (route == "closed-form") o.classify.route = classify::GraphRoute::ClosedForm;
        else if (route != "calculus") throw UsageError("--route must be calculus or closed-form");
        return o;
    }
};

/// Writes witnesses and the CSV; returns true if any row is indeterminate.
bool emit_rows(const SweepArgs& a, const std::vector<classify::SweepRow>& rows, bool csv_default_stdout) {
    std::ostringstream csv;
    csv << io::csv_header() << "\n";
    bool indeterminate = false;
    for (const auto& row : rows) {
        std::string file;
        if (const auto* p = std::get_if<classify::ObstructionPasses>(&row.result.verdict); p && !a.no_witnesses) {
            file = io::witness_stem(row.spec) + ".json";
            io::write_file(out_path(a.out_dir, file), io::witness_to_json(p->witness) + "\n");
        }
        indeterminate = indeterminate || std::holds_alternative<classify::Indeterminate>(row.result.verdict);
        csv << io::csv_row(row, file, a.timing) << "\n";
    }
    const std::string target = a.csv.empty() ? (csv_default_stdout ? "-" : "") : a.csv;
    if (target == "-") std::cout << csv.str();
    else if (!target.empty()) io::write_file(target, csv.str());
    return indeterminate;
}

int run_sweep(const SweepArgs& a) {
    const auto rows = classify::sweep(a.ranges(), a.options());
    const bool indeterminate = emit_rows(a, rows, true);
    return indeterminate ? kIndeterminate : kOk;
}

int run_audit(const SweepArgs& a) {
    classify::FamilyPredicate pred;
    if (a.family_form == "printed") pred.form = classify::FamilyForm::Printed;
    else if (a.family_form != "derived") throw UsageError("--family-form must be derived or printed");
    const auto ranges = a.ranges();
    const auto rows = classify::sweep(ranges, a.options());
    emit_rows(a, rows, false);
    const auto report = classify::theorem_audit(ranges, rows, pred);
    const auto json = io::audit_to_json(report) + "\n";
    if (a.report.empty() || a.report == "-") std::cout << json;
    else io::write_file(a.report, json);
    std::cerr << "audit (" << classify::to_string(pred.form) << "): " << report.rows << " rows, "
              << report.agreements << " agree, " << report.disagreements.size() << " disagree, "
              << report.indeterminate.size() << " indeterminate\n";
    if (!report.disagreements.empty()) return kDisagreement;
    return report.indeterminate.empty() ? kOk : kIndeterminate;
}

// ---------------------------------------------------------------- config file

/// Flat "key = value" lines; each key names a long option of the subcommand.
/// Returns the equivalent arguments, to be placed before the real ones so
/// that flags on the command line win.
std::vector<std::string> config_args(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::vector<std::string> out;
    std::string line;
    for (int no = 1; std::getline(in, line); ++no) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (key == "config" || opt == nullptr || opt->get_lnames().empty()) {
            throw UsageError(path + ":" + std::to_string(no) + ": unknown key '" + key + "'");
        }
        if (opt->get_expected_min() == 0) {
            if (value == "true") out.push_back("--" + key);
            else if (value != "false") throw UsageError(path + ":" + std::to_string(no) + ": '" + key + "' takes true or false");
        } else {
            out.push_back("--" + key);
            out.push_back(value);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plumbing graphs, lattice embeddings and Donaldson obstructions for cable surgeries"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config;
    std::string out_dir;
    const char* env_out = std::getenv("DONALDSON_OUT_DIR");
    if (env_out) out_dir = env_out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "flat key = value file with defaults for this command");
        sub->add_option("--out-dir", out_dir, "output directory (env DONALDSON_OUT_DIR)");
    };

    ContfracArgs cf;
    auto* c_cf = app.add_subcommand("contfrac", "negative continued fractions");
    c_cf->add_option("fraction", cf.fraction, "p/q with p > q > 0");
    c_cf->add_option("--eval", cf.eval, "evaluate coefficients a1,a2,...");
    c_cf->add_flag("--dual", cf.dual, "apply the point-rule dual");
    c_cf->add_flag("--reverse", cf.reverse, "reverse the coefficients");
    c_cf->add_flag("--json", cf.json, "machine-readable output");
    add_common(c_cf);

    GraphArgs gr;
    auto* c_gr = app.add_subcommand("graph", "plumbing tree of a surgery");
    gr.spec.attach(c_gr);
    auto* o_raw = c_gr->add_flag("--raw", gr.raw, "graph before the calculus");
    auto* o_red = c_gr->add_flag("--reduced", gr.reduced, "negative-definite normal form (default)");
    auto* o_cf = c_gr->add_flag("--closed-form", gr.closed, "closed-form two-iteration centipede");
    o_raw->excludes(o_red)->excludes(o_cf);
    o_red->excludes(o_cf);
    c_gr->add_flag("--json", gr.json, "print the tree as JSON");
    c_gr->add_option("--dot", gr.dot, "write Graphviz to a file ('-' for stdout)");
    c_gr->add_option("--out", gr.out, "write the tree JSON to a file");
    add_common(c_gr);

    EmbedArgs em;
    auto* c_em = app.add_subcommand("embed", "search for a lattice embedding into (Z^r, -Id)");
    c_em->add_option("graph", em.graph_file, "tree JSON file");
    em.spec.attach(c_em);
    c_em->add_option("--rank", em.rank, "target rank (default: number of vertices)");
    c_em->add_flag("--enumerate", em.enumerate, "list every embedding class (locally minimal unless --all)");
    c_em->add_flag("--all", em.all, "with --enumerate, include embeddings missing a coordinate");
    c_em->add_option("--budget", em.budget, "search node limit");
    c_em->add_option("--order", em.order, "vertex order: frontier, heaviest or given")->capture_default_str();
    c_em->add_option("--witness", em.witness, "witness output path (default <out-dir>/witness.json)");
    add_common(c_em);

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "classify every tuple of a parameter range");
    sw.attach(c_sw);
    add_common(c_sw);

    SweepArgs au;
    auto* c_au = app.add_subcommand("audit", "compare sweep verdicts with the solution families");
    au.attach(c_au);
    c_au->add_option("--family-form", au.family_form, "family-1 form: derived or printed")->capture_default_str();
    c_au->add_option("--report", au.report, "JSON report path ('-' for stdout, the default)");
    add_common(c_au);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // Splice a config file in front of the command-line flags.
        const auto cfg = std::find(args.begin(), args.end(), "--config");
        if (cfg != args.end() && cfg + 1 != args.end() && !args.empty()) {
            CLI::App* sub = app.get_subcommand_ptr(args.front()).get();
            auto extra = config_args(sub, *(cfg + 1));
            args.insert(args.begin() + 1, extra.begin(), extra.end());
        }
    } catch (const CLI::Error&) {
        std::cerr << "--config must follow a command\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kError;
    }

    try {
        if (*c_cf) return run_contfrac(cf);
        if (*c_gr) return run_graph(gr);
        if (*c_em) {
            em.out_dir = out_dir;
            return run_embed(em);
        }
        if (*c_sw) {
            sw.out_dir = out_dir;
            return run_sweep(sw);
        }
        if (*c_au) {
            au.out_dir = out_dir;
            return run_audit(au);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
