#include "donaldson/classify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace donaldson::classify {

namespace {

template <class... F>
struct Overloaded : F... {
    using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

auto key(const SurgerySpec& s) {
    return std::make_tuple(s.knot[0].p, s.knot[0].alpha, s.knot[1].p, s.knot[1].alpha, s.n);
}

}  // namespace

std::string verdict_name(const Verdict& v) {
    return std::visit(Overloaded{
                          [](const NoNegativeDefiniteForm&) { return "no-negative-definite-form"; },
                          [](const ReducibleBoundary&) { return "reducible-boundary"; },
                          [](const OutOfScope&) { return "out-of-scope"; },
                          [](const ObstructionFails&) { return "obstruction-fails"; },
                          [](const ObstructionPasses&) { return "obstruction-passes"; },
                          [](const Indeterminate&) { return "indeterminate"; },
                      },
                      v);
}

Classification classify_one(const SurgerySpec& s, const ClassifyOptions& options) {
    if (!cabling::in_congruence_family(s.knot)) {
        throw cabling::Unsupported(s.to_string() + " is outside the congruence family");
    }
    const auto N = s.reduced_framing();
    if (N < 0) return {NoNegativeDefiniteForm{}, std::nullopt, 0};

    const auto calculus = cabling::reduced_plumbing(s);
    const auto rank = static_cast<int>(calculus.graph.tree.size());
    if (N == 0) return {ReducibleBoundary{}, rank, 0};
    if (N == 1) return {OutOfScope{}, rank, 0};

    if (options.cross_check) cabling::cross_check(s);
    const auto tree = options.route == GraphRoute::Calculus ? calculus.graph.tree
                                                             : cabling::closed_form_two_iter(s).tree;
    const auto gram = plumbing::gram_matrix(tree);
    const auto found = lattice::find_embedding(gram, rank, options.budget, options.search);
    switch (found.outcome) {
        case lattice::SearchOutcome::Found:
            return {ObstructionPasses{*found.embedding}, rank, found.nodes};
        case lattice::SearchOutcome::None:
            return {ObstructionFails{}, rank, found.nodes};
        case lattice::SearchOutcome::Indeterminate:
            break;
    }
    return {Indeterminate{options.budget.node_limit.value_or(0)}, rank, found.nodes};
}

namespace {

/// Coordinates addressed by symbol; rows are filled in closed-form vertex order.
class WitnessBuilder {
public:
    explicit WitnessBuilder(const cabling::AnnotatedTree& g) : size_(g.tree.size()) {}

    int coord(const std::string& name) {
        const auto it = std::find(labels_.begin(), labels_.end(), name);
        if (it != labels_.end()) return static_cast<int>(it - labels_.begin());
        labels_.push_back(name);
        return static_cast<int>(labels_.size()) - 1;
    }

    using Term = std::pair<int, std::string>;
    void row(const std::vector<Term>& terms) {
        std::vector<std::pair<int, int>> r;
        for (const auto& [c, name] : terms) r.emplace_back(coord(name), c);
        rows_.push_back(std::move(r));
    }

    KnownWitness finish(int family) {
        if (rows_.size() != size_) throw std::logic_error("witness row count differs from the graph");
        KnownWitness w;
        w.family = family;
        w.labels = labels_;
        w.embedding.rank = static_cast<int>(labels_.size());
        for (const auto& r : rows_) {
            std::vector<std::int64_t> v(labels_.size(), 0);
            for (const auto& [c, x] : r) v[c] += x;
            w.embedding.vectors.push_back(std::move(v));
        }
        return w;
    }

private:
    std::size_t size_;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::pair<int, int>>> rows_;
};

std::string sym(char base, std::int64_t i) { return std::string(1, base) + std::to_string(i); }

/// The chain x_i - x_{i+1} for i = first .. last.
void difference_chain(WitnessBuilder& b, char base, std::int64_t first, std::int64_t last) {
    for (auto i = first; i <= last; ++i) b.row({{1, sym(base, i)}, {-1, sym(base, i + 1)}});
}

/// Node 2, leg 2 and tail: g-chain through torso-2 twos, node and tail, with
/// the leg u = g_{p2} + ... + g_{p2+N-1}.
void lower_half(WitnessBuilder& b, std::int64_t p2, std::int64_t N) {
    difference_chain(b, 'g', 1, p2 - 2);  // trailing torso-2 twos
    difference_chain(b, 'g', p2 - 1, p2 - 1);  // node 2
    std::vector<WitnessBuilder::Term> u;
    for (auto i = p2; i <= p2 + N - 1; ++i) u.push_back({1, sym('g', i)});
    b.row(u);
    difference_chain(b, 'g', p2, p2 + N - 2);  // tail
}

}  // namespace

std::optional<KnownWitness> known_witness(const SurgerySpec& s) {
    if (!cabling::in_congruence_family(s.knot)) return std::nullopt;
    const auto f = cabling::family_params(s);
    if (f.congruence != -1 || f.N < 2) return std::nullopt;

    const bool one = f.k1 == 1 && f.l == f.p1 - 1 && f.N == f.p2;
    const bool two = f.p1 == 2 && f.k1 == 3 && f.l == 0 && f.N == f.p2;
    if (!one && !two) return std::nullopt;
    if (s.n != f.N + s.knot[1].p * s.knot[1].alpha) throw std::logic_error("n != N + p2 alpha2");

    const auto graph = cabling::closed_form_two_iter(s);
    WitnessBuilder b(graph);
    // Vertex order of the closed form: torso 1 (far end first), leg 1 (far end
    // first), node 1, torso 2, node 2, leg 2, tail.
    if (one) {
        const auto top = f.p1 + f.l + 1;
        std::vector<WitnessBuilder::Term> v;
        for (auto i = f.p1 + 1; i <= top; ++i) v.push_back({1, sym('f', i)});
        v.push_back({-1, "h"});
        b.row(v);                                 // torso 1
        difference_chain(b, 'f', 1, f.p1 - 1);    // leg 1
        difference_chain(b, 'f', f.p1, f.p1);     // node 1
        difference_chain(b, 'f', f.p1 + 1, top - 1);  // torso-2 twos
        b.row({{1, sym('f', top)}, {1, "h"}, {-1, "g1"}});  // torso-2 (-3)
    } else {
        difference_chain(b, 'e', 1, 2);                         // torso-1 twos
        b.row({{-1, "e1"}, {-1, "e2"}, {1, "f3"}});             // torso-1 end
        difference_chain(b, 'f', 1, 1);                         // leg 1
        difference_chain(b, 'f', 2, 2);                         // node 1
        b.row({{-1, "g1"}, {-1, "f1"}, {-1, "f2"}});            // torso-2 (-3)
    }
    lower_half(b, f.p2, f.N);
    auto w = b.finish(one ? 1 : 2);
    if (!lattice::verify_embedding(plumbing::gram_matrix(graph.tree), w.embedding)) {
        throw std::logic_error("hand-built witness fails to verify for " + s.to_string());
    }
    return w;
}

const char* to_string(FamilyForm f) { return f == FamilyForm::Derived ? "derived" : "printed"; }

std::optional<SurgerySpec> family_one(std::int64_t p1, std::int64_t p2, FamilyForm form) {
    const auto q = p1 + 1;
    const auto a2 = form == FamilyForm::Derived ? p2 * q * q - 1 : p2 * q - 1;
    try {
        return cabling::make_spec(cabling::CableTower({{p1, q}, {p2, a2}}), p2 * p2 * q * q);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

SurgerySpec family_two(std::int64_t p2) {
    return cabling::make_spec(cabling::CableTower({{2, 7}, {p2, 16 * p2 - 1}}), 16 * p2 * p2);
}

bool FamilyPredicate::operator()(const SurgerySpec& s) const {
    if (s.knot.iterations() != 2) return false;
    const auto p1 = s.knot[0].p;
    const auto p2 = s.knot[1].p;
    const auto one = family_one(p1, p2, form);
    if (one && key(*one) == key(s)) return true;
    return key(family_two(p2)) == key(s);
}

IntRange IntRange::interval(std::int64_t lo, std::int64_t hi) {
    IntRange r;
    for (auto x = lo; x <= hi; ++x) r.values.push_back(x);
    return r;
}

IntRange IntRange::of(std::vector<std::int64_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return IntRange{std::move(values)};
}

SweepRanges SweepRanges::desk() {
    return {IntRange::of({2, 3}), IntRange::interval(1, 3), IntRange::of({2, 3}), IntRange::interval(1, 25),
            IntRange::interval(2, 6), Congruence::Both};
}

std::vector<SurgerySpec> sweep_tuples(const SweepRanges& r) {
    std::vector<SurgerySpec> out;
    for (auto p1 : r.p1.values) {
        for (auto k1 : r.k1.values) {
            for (auto p2 : r.p2.values) {
                for (auto k2 : r.k2.values) {
                    if (p1 < 2 || p2 < 2 || k1 < 1 || k2 < 1) continue;
                    const auto a1 = p1 * k1 + 1;
                    std::vector<std::int64_t> a2s;
                    if (r.congruence != Congruence::Plus) a2s.push_back(p2 * (k2 + 1) - 1);
                    if (r.congruence != Congruence::Minus && !(p2 == 2 && r.congruence == Congruence::Both))
                        a2s.push_back(p2 * k2 + 1);
                    for (auto a2 : a2s) {
                        if (a2 <= p1 * p2 * a1) continue;  // not algebraic
                        for (auto N : r.N.values) {
                            const auto n = N + p2 * a2;
                            if (n == 0) continue;
                            out.push_back(cabling::make_spec(cabling::CableTower({{p1, a1}, {p2, a2}}), n));
                        }
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return key(a) < key(b); });
    return out;
}

std::vector<SweepRow> sweep(const SweepRanges& r, const SweepOptions& options) {
    const auto tuples = sweep_tuples(r);
    std::vector<std::optional<SweepRow>> slots(tuples.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tuples.size(); i = next++) {
            const auto t0 = std::chrono::steady_clock::now();
            auto result = classify_one(tuples[i], options.classify);
            const auto t1 = std::chrono::steady_clock::now();
            slots[i] = SweepRow{tuples[i], tuples[i].reduced_framing(), std::move(result),
                                std::chrono::duration<double, std::milli>(t1 - t0).count()};
        }
    };
    const auto workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(tuples.size())));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    std::vector<SweepRow> rows;
    rows.reserve(slots.size());
    for (auto& s : slots) rows.push_back(std::move(*s));
    return rows;
}

AuditReport theorem_audit(const SweepRanges& r, const std::vector<SweepRow>& rows, FamilyPredicate predicate) {
    AuditReport rep;
    rep.form = predicate.form;
    rep.rows = rows.size();
    for (const auto& row : rows) {
        const bool expected = predicate(row.spec);
        AuditEntry e{row.spec, verdict_name(row.result.verdict), expected};
        if (std::holds_alternative<Indeterminate>(row.result.verdict)) {
            rep.indeterminate.push_back(std::move(e));
            continue;
        }
        const bool passes = std::holds_alternative<ObstructionPasses>(row.result.verdict);
        const bool fails = std::holds_alternative<ObstructionFails>(row.result.verdict);
        if (!passes && !fails) {
            ++rep.skipped;
            continue;
        }
        if (passes == expected) ++rep.agreements;
        else rep.disagreements.push_back(std::move(e));
    }

    std::vector<SurgerySpec> members;
    for (auto p1 : r.p1.values)
        for (auto p2 : r.p2.values)
            if (auto m = family_one(p1, p2, predicate.form)) members.push_back(*m);
    if (std::find(r.p1.values.begin(), r.p1.values.end(), 2) != r.p1.values.end())
        for (auto p2 : r.p2.values) members.push_back(family_two(p2));
    const auto covered = sweep_tuples(r);
    for (const auto& m : members) {
        if (std::any_of(covered.begin(), covered.end(), [&](const auto& c) { return key(c) == key(m); })) continue;
        std::string why;
        if (!m.knot.algebraic()) why = "not algebraic";
        else if (!cabling::in_congruence_family(m.knot)) why = "outside the congruence family";
        else {
            const auto f = cabling::family_params(m);
            if (std::find(r.k1.values.begin(), r.k1.values.end(), f.k1) == r.k1.values.end()) why = "k1 outside the range";
            else if (std::find(r.k2.values.begin(), r.k2.values.end(), f.k2) == r.k2.values.end()) why = "k2 outside the range";
            else if (std::find(r.N.values.begin(), r.N.values.end(), f.N) == r.N.values.end()) why = "N outside the range";
            else why = "congruence not selected";
        }
        rep.uncovered_family_members.emplace_back(m.to_string(), why);
    }
    return rep;
}

}  // namespace donaldson::classify
