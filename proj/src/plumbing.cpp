#include "donaldson/plumbing.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace donaldson::plumbing {

// Mutable scratch copy used by the moves; the result is re-validated on release.
class TreeEditor {
public:
    explicit TreeEditor(const WeightedTree& t) : t_(t) {}

    Weight& weight(VertexId v) { return t_.weights_.at(v); }
    std::set<VertexId>& adj(VertexId v) { return t_.adjacency_.at(v); }

    VertexId add(Weight w) {
        const VertexId id = t_.next_id();
        t_.weights_[id] = w;
        t_.adjacency_[id];
        return id;
    }
    void link(VertexId a, VertexId b) {
        t_.adjacency_.at(a).insert(b);
        t_.adjacency_.at(b).insert(a);
    }
    void unlink(VertexId a, VertexId b) {
        t_.adjacency_.at(a).erase(b);
        t_.adjacency_.at(b).erase(a);
    }
    void erase(VertexId v) {
        for (VertexId u : std::set<VertexId>(t_.adjacency_.at(v))) unlink(u, v);
        t_.adjacency_.erase(v);
        t_.weights_.erase(v);
    }
    WeightedTree release() {
        WeightedTree out = std::move(t_);
        assert(out.size() > 0);
        return out;
    }

private:
    WeightedTree t_;
};

WeightedTree::WeightedTree(std::map<VertexId, Weight> weights,
                           const std::vector<std::pair<VertexId, VertexId>>& edges)
    : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("a plumbing tree needs at least one vertex");
    for (const auto& [v, w] : weights_) adjacency_[v];
    for (const auto& [a, b] : edges) {
        if (!contains(a) || !contains(b)) {
            throw std::invalid_argument("edge references unknown vertex");
        }
        if (a == b) throw std::invalid_argument("self-loop in plumbing graph");
        if (!adjacency_[a].insert(b).second) throw std::invalid_argument("duplicate edge");
        adjacency_[b].insert(a);
    }
    if (edges.size() + 1 != weights_.size()) {
        throw std::invalid_argument("edge count does not match a tree");
    }
    // n-1 edges and connected => tree.
    std::set<VertexId> seen{weights_.begin()->first};
    std::vector<VertexId> stack{weights_.begin()->first};
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (VertexId u : adjacency_[v])
            if (seen.insert(u).second) stack.push_back(u);
    }
    if (seen.size() != weights_.size()) throw std::invalid_argument("plumbing graph is not connected");
}

std::vector<VertexId> WeightedTree::vertices() const {
    std::vector<VertexId> out;
    out.reserve(weights_.size());
    for (const auto& [v, w] : weights_) out.push_back(v);
    return out;
}

Weight WeightedTree::weight(VertexId v) const {
    auto it = weights_.find(v);
    if (it == weights_.end()) throw std::out_of_range("no vertex " + std::to_string(v.value));
    return it->second;
}

const std::set<VertexId>& WeightedTree::neighbors(VertexId v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end()) throw std::out_of_range("no vertex " + std::to_string(v.value));
    return it->second;
}

bool WeightedTree::adjacent(VertexId a, VertexId b) const { return neighbors(a).count(b) != 0; }

std::vector<std::pair<VertexId, VertexId>> WeightedTree::edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (const auto& [v, nb] : adjacency_)
        for (VertexId u : nb)
            if (v < u) out.emplace_back(v, u);
    return out;
}

VertexId WeightedTree::next_id() const {
    return weights_.empty() ? VertexId{0} : VertexId{weights_.rbegin()->first.value + 1};
}

// ---------------------------------------------------------------------------

GramMatrix::GramMatrix(std::size_t dimension) : dim_(dimension), a_(dimension * dimension, 0) {}

GramMatrix GramMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    GramMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw std::invalid_argument("Gram matrix is not square");
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (rows[i][j] != rows[j][i]) throw std::invalid_argument("Gram matrix is not symmetric");
            m.a_[i * m.dim_ + j] = rows[i][j];
        }
    }
    return m;
}

void GramMatrix::set(std::size_t i, std::size_t j, std::int64_t value) {
    a_[i * dim_ + j] = value;
    a_[j * dim_ + i] = value;
}

GramMatrix gram_matrix(const WeightedTree& t) {
    const auto ids = t.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    GramMatrix m(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) m.set(i, i, t.weight(ids[i]));
    for (const auto& [a, b] : t.edges()) m.set(index[a], index[b], 1);
    return m;
}

namespace {

// Bareiss elimination without pivoting.  Returns the leading principal minors
// d_1..d_k computed before the first zero pivot (d_k = 0 stops the sweep).
std::vector<mpz_class> leading_minors(const GramMatrix& g) {
    const std::size_t n = g.dimension();
    std::vector<mpz_class> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = g(i, j);
    std::vector<mpz_class> minors;
    mpz_class prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const mpz_class pivot = a[k * n + k];
        minors.push_back(pivot);
        if (pivot == 0) break;
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class v = pivot * a[i * n + j] - a[i * n + k] * a[k * n + j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a[i * n + j] = v;
            }
        }
        prev = pivot;
    }
    return minors;
}

}  // namespace

mpz_class det_exact(const GramMatrix& g) {
    const std::size_t n = g.dimension();
    if (n == 0) return 1;
    std::vector<mpz_class> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = g(i, j);
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r * n + k] == 0) ++r;
            if (r == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class v = a[k * n + k] * a[i * n + j] - a[i * n + k] * a[k * n + j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a[i * n + j] = v;
            }
        }
        prev = a[k * n + k];
    }
    return sign * a[n * n - 1];
}

bool is_negative_definite(const GramMatrix& g) {
    const auto minors = leading_minors(g);
    if (minors.size() != g.dimension()) return false;
    for (std::size_t k = 0; k < minors.size(); ++k) {
        const int expected = (k % 2 == 0) ? -1 : 1;  // minor of order k+1
        if (sgn(minors[k]) != expected) return false;
    }
    return true;
}

Inertia inertia(const WeightedTree& t) {
    // Peel leaves.  A leaf with rational weight w != 0 splits off <w> and
    // subtracts 1/w from its parent; a 0-leaf pairs with its parent into a
    // hyperbolic plane and decouples the parent's other neighbours.
    std::map<VertexId, mpq_class> w;
    std::map<VertexId, std::set<VertexId>> adj;
    for (VertexId v : t.vertices()) {
        w[v] = t.weight(v);
        adj[v] = t.neighbors(v);
    }
    Inertia out;
    auto count = [&](const mpq_class& x) {
        const int s = sgn(x);
        if (s > 0) ++out.positive;
        else if (s < 0) ++out.negative;
        else ++out.zero;
    };
    auto drop = [&](VertexId v) {
        for (VertexId u : adj[v]) adj[u].erase(v);
        adj.erase(v);
        w.erase(v);
    };
    while (!w.empty()) {
        // A forest always has a vertex of valence at most one.
        const auto it = std::find_if(adj.begin(), adj.end(), [](const auto& e) { return e.second.size() <= 1; });
        const VertexId leaf = it->first;
        if (adj[leaf].empty()) {
            count(w[leaf]);
            drop(leaf);
            continue;
        }
        const VertexId parent = *adj[leaf].begin();
        if (w[leaf] != 0) {
            count(w[leaf]);
            w[parent] -= 1 / w[leaf];
            drop(leaf);
        } else {
            ++out.positive;
            ++out.negative;
            drop(leaf);
            drop(parent);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

WeightedTree blow_down(const WeightedTree& t, VertexId v) {
    if (!t.contains(v)) throw InvalidMove("blow_down: unknown vertex");
    if (t.weight(v) != -1) {
        throw InvalidMove("blow_down: vertex " + std::to_string(v.value) + " has weight " +
                          std::to_string(t.weight(v)));
    }
    if (t.valence(v) > 2) throw InvalidMove("blow_down: valence > 2");
    if (t.size() == 1) throw InvalidMove("blow_down: cannot remove the only vertex");
    TreeEditor ed(t);
    const std::vector<VertexId> nb(t.neighbors(v).begin(), t.neighbors(v).end());
    ed.erase(v);
    for (VertexId u : nb) ed.weight(u) += 1;
    if (nb.size() == 2) ed.link(nb[0], nb[1]);
    return ed.release();
}

namespace {

// Blow-down of a (+1)-vertex; only used inside flatten_positive_leaf.
WeightedTree blow_down_positive(const WeightedTree& t, VertexId v) {
    assert(t.weight(v) == 1 && t.valence(v) <= 2 && t.size() > 1);
    TreeEditor ed(t);
    const std::vector<VertexId> nb(t.neighbors(v).begin(), t.neighbors(v).end());
    ed.erase(v);
    for (VertexId u : nb) ed.weight(u) -= 1;
    if (nb.size() == 2) ed.link(nb[0], nb[1]);
    return ed.release();
}

}  // namespace

WeightedTree blow_up(const WeightedTree& t, const BlowUpSite& site) {
    TreeEditor ed(t);
    if (const auto* vs = std::get_if<VertexSite>(&site)) {
        if (!t.contains(vs->v)) throw InvalidMove("blow_up: unknown vertex");
        const VertexId n = ed.add(-1);
        ed.link(vs->v, n);
        ed.weight(vs->v) -= 1;
    } else if (const auto* es = std::get_if<EdgeSite>(&site)) {
        if (!t.contains(es->a) || !t.contains(es->b) || !t.adjacent(es->a, es->b)) {
            throw InvalidMove("blow_up: no such edge");
        }
        const VertexId n = ed.add(-1);
        ed.unlink(es->a, es->b);
        ed.link(es->a, n);
        ed.link(n, es->b);
        ed.weight(es->a) -= 1;
        ed.weight(es->b) -= 1;
    } else {
        throw InvalidMove("blow_up: a free (-1)-vertex would disconnect the tree");
    }
    return ed.release();
}

WeightedTree absorb_zero(const WeightedTree& t, VertexId v) {
    if (!t.contains(v)) throw InvalidMove("absorb_zero: unknown vertex");
    if (t.weight(v) != 0) throw InvalidMove("absorb_zero: vertex weight is not 0");
    if (t.valence(v) != 2) throw InvalidMove("absorb_zero: valence is not 2");
    const VertexId a = *t.neighbors(v).begin();
    const VertexId b = *t.neighbors(v).rbegin();
    TreeEditor ed(t);
    const Weight wb = t.weight(b);
    const std::set<VertexId> b_nb = t.neighbors(b);
    ed.erase(v);
    ed.erase(b);
    ed.weight(a) += wb;
    for (VertexId u : b_nb)
        if (u != v) ed.link(a, u);
    return ed.release();
}

std::optional<VertexId> find_positive_leaf(const WeightedTree& t) {
    for (const auto& [v, w] : t.weights()) {
        if (w >= 1 && t.valence(v) == 1 && t.weight(*t.neighbors(v).begin()) == -1) return v;
    }
    return std::nullopt;
}

WeightedTree flatten_positive_leaf(const WeightedTree& t, VertexId leaf) {
    if (!t.contains(leaf) || t.weight(leaf) < 1 || t.valence(leaf) != 1 ||
        t.weight(*t.neighbors(leaf).begin()) != -1) {
        throw InvalidMove("flatten_positive_leaf: no positive leaf on a (-1)-vertex");
    }
    WeightedTree cur = t;
    VertexId tip = *t.neighbors(leaf).begin();
    while (cur.weight(leaf) > 1) {
        const VertexId fresh = cur.next_id();
        cur = blow_up(cur, EdgeSite{tip, leaf});
        tip = fresh;
    }
    return blow_down_positive(cur, leaf);
}

WeightedTree flatten_positive_leaf(const WeightedTree& t) {
    const auto leaf = find_positive_leaf(t);
    if (!leaf) throw InvalidMove("flatten_positive_leaf: no positive leaf on a (-1)-vertex");
    return flatten_positive_leaf(t, *leaf);
}

WeightedTree reduce(const WeightedTree& t) {
    WeightedTree cur = t;
    if (const auto leaf = find_positive_leaf(cur)) cur = flatten_positive_leaf(cur, *leaf);
    while (true) {
        std::optional<WeightedTree> next;
        for (const auto& [v, w] : cur.weights()) {
            if (w == 0 && cur.valence(v) == 2) {
                next = absorb_zero(cur, v);
                break;
            }
        }
        if (!next && cur.size() > 1) {
            for (const auto& [v, w] : cur.weights()) {
                if (w == -1 && cur.valence(v) <= 2) {
                    next = blow_down(cur, v);
                    break;
                }
            }
        }
        if (!next) {
            if (const auto leaf = find_positive_leaf(cur)) next = flatten_positive_leaf(cur, *leaf);
        }
        if (!next) return cur;
        cur = std::move(*next);
    }
}

ReduceOutcome reduce_negative_definite(const WeightedTree& t) {
    WeightedTree r = reduce(t);
    if (is_negative_definite(gram_matrix(r))) return r;
    return NoNegativeDefiniteForm{std::move(r)};
}

// ---------------------------------------------------------------------------

namespace {

std::string encode_rooted(const WeightedTree& t, VertexId v, std::optional<VertexId> parent) {
    std::vector<std::string> kids;
    for (VertexId u : t.neighbors(v))
        if (!parent || u != *parent) kids.push_back(encode_rooted(t, u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + std::to_string(t.weight(v));
    for (const auto& k : kids) s += k;
    return s + ")";
}

std::vector<VertexId> centers(const WeightedTree& t) {
    std::map<VertexId, std::size_t> deg;
    std::vector<VertexId> layer;
    for (VertexId v : t.vertices()) {
        deg[v] = t.valence(v);
        if (deg[v] <= 1) layer.push_back(v);
    }
    std::size_t remaining = t.size();
    while (remaining > 2) {
        remaining -= layer.size();
        std::vector<VertexId> next;
        for (VertexId v : layer)
            for (VertexId u : t.neighbors(v))
                if (--deg[u] == 1) next.push_back(u);
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

}  // namespace

std::string canonical_form(const WeightedTree& t) {
    std::string best;
    for (VertexId c : centers(t)) {
        auto s = encode_rooted(t, c, std::nullopt);
        if (best.empty() || s < best) best = std::move(s);
    }
    return best;
}

bool isomorphic(const WeightedTree& a, const WeightedTree& b) {
    return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

WeightedTree relabel(const WeightedTree& t, const std::map<VertexId, VertexId>& ids) {
    std::map<VertexId, Weight> w;
    for (const auto& [v, x] : t.weights()) {
        if (!w.emplace(ids.at(v), x).second) throw std::invalid_argument("relabel map is not injective");
    }
    std::vector<std::pair<VertexId, VertexId>> e;
    for (const auto& [a, b] : t.edges()) e.emplace_back(ids.at(a), ids.at(b));
    return WeightedTree(std::move(w), e);
}

WeightedTree path(const std::vector<Weight>& weights) {
    std::map<VertexId, Weight> w;
    std::vector<std::pair<VertexId, VertexId>> e;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        w[VertexId{static_cast<int>(i)}] = weights[i];
        if (i) e.emplace_back(VertexId{static_cast<int>(i - 1)}, VertexId{static_cast<int>(i)});
    }
    return WeightedTree(std::move(w), e);
}

std::string describe(const WeightedTree& t) {
    std::ostringstream os;
    os << "vertices:";
    for (const auto& [v, w] : t.weights()) os << ' ' << v.value << '[' << w << ']';
    os << " edges:";
    for (const auto& [a, b] : t.edges()) os << ' ' << a.value << '-' << b.value;
    return os.str();
}

}  // namespace donaldson::plumbing
