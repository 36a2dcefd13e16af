#include "donaldson/cabling.hpp"

#include "donaldson/hjcf.hpp"

#include <numeric>
#include <sstream>

namespace donaldson::cabling {

using plumbing::Weight;

CableTower::CableTower(std::vector<CablePair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw std::invalid_argument("a cable tower needs at least one pair");
    for (const auto& [p, a] : pairs_) {
        if (p < 2) throw std::invalid_argument("cabling parameter p must be >= 2");
        if (a < 1) throw std::invalid_argument("cabling parameter alpha must be >= 1");
        if (std::gcd(p, a) != 1) {
            throw std::invalid_argument("cabling pair (" + std::to_string(p) + "," +
                                        std::to_string(a) + ") is not coprime");
        }
    }
}

bool CableTower::algebraic() const {
    for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
        const auto& cur = pairs_[i];
        const auto& nxt = pairs_[i + 1];
        if (!(nxt.alpha > cur.p * nxt.p * cur.alpha)) return false;
    }
    return true;
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

bool CableTower::super_algebraic() const {
    // Every contraction leaves a (-2) to merge into the node: ceil(a'/p') >= p a + 2.
    if (!algebraic()) return false;
    for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
        const auto& cur = pairs_[i];
        const auto& nxt = pairs_[i + 1];
        if (ceil_div(nxt.alpha, nxt.p) < cur.p * cur.alpha + 2) return false;
    }
    return true;
}

std::string CableTower::to_string() const {
    std::string s = "T(";
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        if (i) s += ";";
        s += std::to_string(pairs_[i].p) + "," + std::to_string(pairs_[i].alpha);
    }
    return s + ")";
}

CableTower from_newton_pairs(const std::vector<CablePair>& newton) {
    std::vector<CablePair> out;
    for (std::size_t i = 0; i < newton.size(); ++i) {
        const auto [p, q] = newton[i];
        if (p <= 0 || q <= 0) throw std::invalid_argument("Newton pairs must be positive");
        if (std::gcd(p, q) != 1) throw std::invalid_argument("Newton pair is not coprime");
        const std::int64_t alpha = i == 0 ? q : q + p * out.back().p * out.back().alpha;
        out.push_back({p, alpha});
    }
    return CableTower(std::move(out));
}

TowerClass classify_tower(const CableTower& t) {
    if (!t.algebraic()) return TowerClass::NotAlgebraic;
    return t.super_algebraic() ? TowerClass::SuperAlgebraic : TowerClass::AlgebraicOnly;
}

const char* to_string(TowerClass c) {
    switch (c) {
        case TowerClass::NotAlgebraic: return "not-algebraic";
        case TowerClass::AlgebraicOnly: return "algebraic-only";
        case TowerClass::SuperAlgebraic: return "super-algebraic";
    }
    return "?";
}

std::int64_t SurgerySpec::reduced_framing() const {
    const auto& last = knot.pairs().back();
    return n - last.p * last.alpha;
}

std::string SurgerySpec::to_string() const {
    std::string s = "(";
    for (const auto& [p, a] : knot.pairs()) s += std::to_string(p) + "," + std::to_string(a) + ";";
    return s + std::to_string(n) + ")";
}

SurgerySpec make_spec(CableTower knot, std::int64_t n) {
    if (n == 0) throw std::invalid_argument("surgery coefficient must be non-zero");
    return SurgerySpec{std::move(knot), n};
}

int corner_weight(std::int64_t p, std::int64_t alpha) {
    if (p < 2 || alpha <= p || std::gcd(p, alpha) != 1) {
        throw std::invalid_argument("corner_weight needs coprime 2 <= p < alpha");
    }
    using hjcf::Integer;
    const Integer P = p, A = alpha;
    const Integer d1 = ceil_div(alpha, p);
    mpq_class sum = mpq_class(1, 1) / mpq_class(P * A);
    sum += mpq_class(hjcf::star_inverse(A - P, A), A);
    sum += mpq_class(hjcf::star_inverse(P * d1 - A, P), P);
    sum.canonicalize();
    if (sum.get_den() != 1 || sum < 1 || sum >= 2) {
        throw std::logic_error("corner sum for (" + std::to_string(p) + "," + std::to_string(alpha) +
                               ") is " + sum.get_str() + ", not an integer in [1,2)");
    }
    return static_cast<int>(sum.get_num().get_si());
}

std::string to_string(const Role& r) {
    const char* name = "?";
    switch (r.part) {
        case Part::Torso: name = "torso"; break;
        case Part::Leg: name = "leg"; break;
        case Part::Node: name = "node"; break;
        case Part::Tail: name = "tail"; break;
        case Part::Junction: name = "junction"; break;
        case Part::Surgery: name = "surgery"; break;
    }
    if (r.part == Part::Tail || r.part == Part::Surgery) return name;
    return std::string(name) + std::to_string(r.body);
}

namespace {

std::vector<Weight> to_weights(const hjcf::CoeffSeq& s) {
    std::vector<Weight> out;
    for (const auto& a : s) {
        if (!a.fits_slong_p()) throw Unsupported("continued fraction coefficient too large");
        out.push_back(-a.get_si());
    }
    return out;
}

class Builder {
public:
    VertexId add(Weight w, Role role) {
        const VertexId id{static_cast<int>(weights_.size())};
        weights_[id] = w;
        roles_[id] = role;
        return id;
    }
    void link(VertexId a, VertexId b) { edges_.emplace_back(a, b); }
    /// Appends a chain after `from` (if any); returns the last vertex or `from`.
    std::optional<VertexId> chain(const std::vector<Weight>& ws, Role role,
                                  std::optional<VertexId> from) {
        for (Weight w : ws) {
            const VertexId v = add(w, role);
            if (from) link(*from, v);
            from = v;
        }
        return from;
    }
    AnnotatedTree finish() { return {WeightedTree(weights_, edges_), roles_}; }

private:
    std::map<VertexId, Weight> weights_;
    std::map<VertexId, Role> roles_;
    std::vector<std::pair<VertexId, VertexId>> edges_;
};

}  // namespace

AnnotatedTree raw_plumbing_annotated(const SurgerySpec& s) {
    if (!s.knot.algebraic()) {
        throw Unsupported(s.knot.to_string() + " is not algebraic");
    }
    std::vector<CablePair> pairs = s.knot.pairs();
    // T(p,a) = T(a,p) for the innermost torus knot; the hook wants p < a.
    if (pairs[0].alpha < pairs[0].p) std::swap(pairs[0].p, pairs[0].alpha);
    if (pairs[0].p < 2) throw Unsupported("innermost pair describes an unknot");

    Builder b;
    std::optional<VertexId> prev_corner;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [p, a] = pairs[i];
        const int body = static_cast<int>(i) + 1;
        const auto torso = to_weights(hjcf::expand_neg_cf(hjcf::PositiveRational(a, a - p)));
        const auto leg_cf = to_weights(hjcf::expand_neg_cf(hjcf::PositiveRational(a, p)));
        std::optional<VertexId> from;
        if (prev_corner) {
            const auto [pp, pa] = pairs[i - 1];
            const VertexId link = b.add(-pp * pa, {Part::Junction, body});
            b.link(*prev_corner, link);
            const VertexId unit = b.add(-1, {Part::Junction, body});
            b.link(link, unit);
            from = unit;
        }
        const auto torso_end = b.chain(torso, {Part::Torso, body}, from);
        const VertexId corner = b.add(-corner_weight(p, a), {Part::Node, body});
        b.link(*torso_end, corner);
        // Leg reads outward from the corner: d_t, ..., d_2.
        std::vector<Weight> leg(leg_cf.rbegin(), leg_cf.rend() - 1);
        b.chain(leg, {Part::Leg, body}, corner);
        prev_corner = corner;
    }
    const VertexId leaf = b.add(s.reduced_framing(), {Part::Surgery, 0});
    b.link(*prev_corner, leaf);
    return b.finish();
}

WeightedTree raw_plumbing(const SurgerySpec& s) { return raw_plumbing_annotated(s).tree; }

ReducedPlumbing reduced_plumbing(const SurgerySpec& s) {
    const AnnotatedTree raw = raw_plumbing_annotated(s);
    WeightedTree reduced = plumbing::reduce(raw.tree);
    std::map<VertexId, Role> roles;
    for (VertexId v : reduced.vertices()) {
        const auto it = raw.roles.find(v);
        roles[v] = it == raw.roles.end() ? Role{Part::Tail, 0} : it->second;
    }
    const auto N = s.reduced_framing();
    ReducedStatus status = ReducedStatus::NegativeDefinite;
    if (N < 0) status = ReducedStatus::NoNegativeDefiniteForm;
    else if (N == 0) status = ReducedStatus::ReducibleBoundary;
    else if (N == 1) status = ReducedStatus::OutOfScope;
    return ReducedPlumbing{status, AnnotatedTree{std::move(reduced), std::move(roles)}};
}

bool in_congruence_family(const CableTower& t) {
    if (t.iterations() != 2 || !t.algebraic()) return false;
    const auto [p1, a1] = t[0];
    const auto [p2, a2] = t[1];
    if (a1 <= p1 || a1 % p1 != 1) return false;
    const auto r = a2 % p2;
    return r == 1 || r == p2 - 1;
}

FamilyParams family_params(const SurgerySpec& s) {
    if (!in_congruence_family(s.knot)) {
        throw Unsupported(s.knot.to_string() +
                          " is outside alpha1 = 1 (mod p1), alpha2 = +-1 (mod p2), algebraic");
    }
    const auto [p1, a1] = s.knot[0];
    const auto [p2, a2] = s.knot[1];
    FamilyParams f{};
    f.p1 = p1;
    f.k1 = (a1 - 1) / p1;
    f.p2 = p2;
    if (a2 % p2 == p2 - 1) {
        f.congruence = -1;
        f.k2 = (a2 + 1) / p2 - 1;
    } else {
        f.congruence = 1;
        f.k2 = (a2 - 1) / p2;
    }
    f.N = s.reduced_framing();
    f.l = f.k2 - 1 - p1 * a1;
    return f;
}

AnnotatedTree closed_form_two_iter(const SurgerySpec& s) {
    const FamilyParams f = family_params(s);
    if (f.N < 2) throw Unsupported("closed form needs N >= 2");
    // Algebraicity gives l >= -1; l = -1 is the algebraic-only boundary.
    const bool boundary = f.l < 0;
    const auto twos = [](std::int64_t k) { return std::vector<Weight>(static_cast<std::size_t>(k), -2); };

    Builder b;
    auto torso1 = twos(f.k1 - 1);
    torso1.push_back(-(f.p1 + 1));
    const auto t1_end = b.chain(torso1, {Part::Torso, 1}, std::nullopt);
    const auto leg1_top = b.chain(twos(f.p1 - 1), {Part::Leg, 1}, std::nullopt);

    // Torso 2 is the dual of alpha2/p2 with its first p1*alpha1 entries consumed;
    // the last consumed entry lands in node 1.
    std::vector<Weight> torso2;
    Weight node1 = -2;
    if (f.congruence == -1) {
        if (boundary) {
            node1 = -3;
            torso2 = twos(f.p2 - 2);
        } else {
            torso2 = twos(f.l);
            torso2.push_back(-3);
            const auto rest = twos(f.p2 - 2);
            torso2.insert(torso2.end(), rest.begin(), rest.end());
        }
    } else {
        if (boundary) {
            node1 = -(f.p2 + 1);
        } else {
            torso2 = twos(f.l);
            torso2.push_back(-(f.p2 + 1));
        }
    }
    const VertexId n1 = b.add(node1, {Part::Node, 1});
    b.link(*t1_end, n1);
    if (leg1_top) b.link(*leg1_top, n1);
    const auto t2_end = b.chain(torso2, {Part::Torso, 2}, n1);

    const VertexId n2 = b.add(-2, {Part::Node, 2});
    b.link(*t2_end, n2);
    const auto leg2 = f.congruence == -1 ? std::vector<Weight>{-f.p2} : twos(f.p2 - 1);
    // Leg vertices are emitted top-down from the node.
    b.chain(leg2, {Part::Leg, 2}, n2);
    b.chain(twos(f.N - 1), {Part::Tail, 0}, n2);
    return b.finish();
}

void cross_check(const SurgerySpec& s) {
    const auto calculus = reduced_plumbing(s);
    const auto closed = closed_form_two_iter(s);
    if (!plumbing::isomorphic(calculus.graph.tree, closed.tree)) {
        throw std::logic_error("construction routes disagree for " + s.to_string() +
                               "\n  calculus:    " + plumbing::describe(calculus.graph.tree) +
                               "\n  closed form: " + plumbing::describe(closed.tree));
    }
}

}  // namespace donaldson::cabling
