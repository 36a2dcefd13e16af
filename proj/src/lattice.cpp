#include "donaldson/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <stdexcept>

namespace donaldson::lattice {

bool verify_embedding(const GramMatrix& g, const EmbeddingMatrix& m) {
    if (m.vectors.size() != g.dimension()) {
        throw std::invalid_argument("embedding has " + std::to_string(m.vectors.size()) +
                                    " vectors for a Gram matrix of dimension " +
                                    std::to_string(g.dimension()));
    }
    for (const auto& v : m.vectors) {
        if (static_cast<int>(v.size()) != m.rank) {
            throw std::invalid_argument("embedding vector length differs from its rank");
        }
    }
    for (std::size_t i = 0; i < m.vectors.size(); ++i) {
        for (std::size_t j = i; j < m.vectors.size(); ++j) {
            std::int64_t dot = 0;
            for (int c = 0; c < m.rank; ++c) dot += m.vectors[i][c] * m.vectors[j][c];
            if (-dot != g(i, j)) return false;
        }
    }
    return true;
}

const char* to_string(SearchOutcome o) {
    switch (o) {
        case SearchOutcome::Found: return "found";
        case SearchOutcome::None: return "none";
        case SearchOutcome::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::vector<std::vector<int>> square_decompositions(int m) {
    std::vector<std::vector<int>> out;
    if (m < 1) return out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int cap) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int l = std::min(cap, static_cast<int>(std::sqrt(static_cast<double>(rest))) + 1); l >= 1; --l) {
            if (l * l > rest) continue;
            cur.push_back(l);
            rec(rest - l * l, l);
            cur.pop_back();
        }
    };
    rec(m, m);
    return out;
}

namespace {

std::vector<std::vector<std::size_t>> adjacency(const GramMatrix& g) {
    std::vector<std::vector<std::size_t>> adj(g.dimension());
    for (std::size_t i = 0; i < g.dimension(); ++i)
        for (std::size_t j = 0; j < g.dimension(); ++j)
            if (i != j && g(i, j) != 0) adj[i].push_back(j);
    return adj;
}

std::vector<std::size_t> eccentricities(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::size_t> ecc(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
        std::deque<std::size_t> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            const auto v = q.front();
            q.pop_front();
            ecc[s] = std::max(ecc[s], dist[v]);
            for (auto u : adj[v]) {
                if (dist[u] == std::numeric_limits<std::size_t>::max()) {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            }
        }
    }
    return ecc;
}

}  // namespace

std::vector<std::size_t> placement_order(const GramMatrix& g, VertexOrder order) {
    const std::size_t n = g.dimension();
    std::vector<std::size_t> out;
    if (order == VertexOrder::Given) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(i);
        return out;
    }
    const auto adj = adjacency(g);
    const auto ecc = eccentricities(adj);
    // Larger norm first, then more central, then lower index.
    auto better = [&](std::size_t a, std::size_t b) {
        if (g(a, a) != g(b, b)) return -g(a, a) > -g(b, b);
        if (ecc[a] != ecc[b]) return ecc[a] < ecc[b];
        return a < b;
    };
    if (order == VertexOrder::HeaviestFirst) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(i);
        std::sort(out.begin(), out.end(), better);
        return out;
    }
    std::vector<bool> placed(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::optional<std::size_t> pick;
        for (std::size_t v = 0; v < n; ++v) {
            if (placed[v]) continue;
            const bool frontier = std::any_of(adj[v].begin(), adj[v].end(), [&](auto u) { return placed[u]; });
            if (step > 0 && !frontier) continue;
            if (!pick || better(v, *pick)) pick = v;
        }
        if (!pick) {  // disconnected: restart from the best remaining vertex
            for (std::size_t v = 0; v < n; ++v)
                if (!placed[v] && (!pick || better(v, *pick))) pick = v;
        }
        placed[*pick] = true;
        out.push_back(*pick);
    }
    return out;
}

namespace {

class Search {
public:
    Search(const GramMatrix& g, int rank, std::vector<std::size_t> order)
        : g_(g), r_(rank), order_(std::move(order)), rows_(g.dimension(), std::vector<int>(rank, 0)) {}

    // Visits every canonical embedding; the visitor returns false to stop.
    // Returns false if stopped by the visitor or the node limit.
    bool run(const std::function<bool()>& visit, std::optional<std::uint64_t> limit) {
        visit_ = &visit;
        limit_ = limit;
        stopped_ = false;
        State st;
        st.used = 0;
        st.block_prev.assign(r_, -1);
        descend(0, st);
        return !stopped_;
    }

    bool budget_exhausted() const { return exhausted_; }
    std::uint64_t nodes() const { return nodes_; }

    EmbeddingMatrix current() const {
        EmbeddingMatrix m;
        m.rank = r_;
        for (const auto& row : rows_) m.vectors.emplace_back(row.begin(), row.end());
        return m;
    }

    int used_columns() const { return used_at_leaf_; }

private:
    struct State {
        int used = 0;
        std::vector<int> block_prev;  // previous column of the same block, or -1
    };

    struct Constraint {
        const std::vector<int>* row;
        int target;
        int last;                   // last column with a non-zero entry
        std::vector<int> tail_norm; // tail_norm[c] = sum_{c' >= c} row[c']^2
    };

    void descend(std::size_t depth, const State& st) {
        if (stopped_) return;
        if (depth == order_.size()) {
            used_at_leaf_ = st.used;
            if (!(*visit_)()) stopped_ = true;
            return;
        }
        const std::size_t gen = order_[depth];
        const int norm = static_cast<int>(-g_(gen, gen));

        std::vector<Constraint> cons;
        for (std::size_t d = 0; d < depth; ++d) {
            const std::size_t other = order_[d];
            Constraint c{&rows_[other], static_cast<int>(-g_(gen, other)), -1, std::vector<int>(st.used + 1, 0)};
            for (int col = st.used - 1; col >= 0; --col) {
                const int x = rows_[other][col];
                c.tail_norm[col] = c.tail_norm[col + 1] + x * x;
                if (x != 0 && c.last < 0) c.last = col;
            }
            if (c.last < 0 && c.target != 0) return;  // cannot happen for placed vectors
            cons.push_back(std::move(c));
        }
        // Constraints closing at each column.
        std::vector<std::vector<std::size_t>> closing(st.used);
        std::vector<std::vector<std::size_t>> touching(st.used);
        for (std::size_t k = 0; k < cons.size(); ++k) {
            if (cons[k].last >= 0) closing[cons[k].last].push_back(k);
            for (int col = 0; col < st.used; ++col)
                if ((*cons[k].row)[col] != 0) touching[col].push_back(k);
        }

        std::vector<int> x(r_, 0);
        std::vector<int> partial(cons.size(), 0);
        std::vector<std::vector<int>> candidates;

        std::function<void(int, int)> cols = [&](int col, int rest) {
            if (col == st.used) {
                const int room = r_ - st.used;
                if (rest == 0) {
                    candidates.push_back(x);
                    return;
                }
                for (const auto& parts : square_decompositions(rest)) {
                    if (static_cast<int>(parts.size()) > room) continue;
                    for (std::size_t k = 0; k < parts.size(); ++k) x[st.used + k] = parts[k];
                    candidates.push_back(x);
                    for (std::size_t k = 0; k < parts.size(); ++k) x[st.used + k] = 0;
                }
                return;
            }
            int hi = 0;
            while ((hi + 1) * (hi + 1) <= rest) ++hi;
            int lo = -hi;
            if (st.block_prev[col] >= 0) hi = std::min(hi, x[st.block_prev[col]]);
            if (!closing[col].empty()) {
                const auto& c = cons[closing[col].front()];
                const int coef = (*c.row)[col];
                const int need = c.target - partial[closing[col].front()];
                if (need % coef != 0) return;
                const int forced = need / coef;
                lo = std::max(lo, forced);
                hi = std::min(hi, forced);
            }
            for (int v = hi; v >= lo; --v) {
                x[col] = v;
                for (auto k : touching[col]) partial[k] += v * (*cons[k].row)[col];
                const int left = rest - v * v;
                bool ok = true;
                for (auto k : closing[col]) {
                    if (partial[k] != cons[k].target) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    // Cauchy-Schwarz on the constraints still open.
                    for (std::size_t k = 0; k < cons.size() && ok; ++k) {
                        if (cons[k].last <= col) continue;
                        const long gap = cons[k].target - partial[k];
                        if (gap * gap > static_cast<long>(left) * cons[k].tail_norm[col + 1]) ok = false;
                    }
                }
                if (ok) cols(col + 1, left);
                for (auto k : touching[col]) partial[k] -= v * (*cons[k].row)[col];
            }
            x[col] = 0;
        };
        cols(0, norm);

        for (const auto& cand : candidates) {
            if (stopped_) return;
            ++nodes_;
            if (limit_ && nodes_ > *limit_) {
                exhausted_ = true;
                stopped_ = true;
                return;
            }
            State next;
            next.block_prev.assign(r_, -1);
            for (int col = 0; col < st.used; ++col) {
                const int p = st.block_prev[col];
                next.block_prev[col] = (p >= 0 && cand[p] == cand[col]) ? p : -1;
            }
            next.used = st.used;
            while (next.used < r_ && cand[next.used] != 0) {
                const int col = next.used;
                next.block_prev[col] = (col > st.used && cand[col - 1] == cand[col]) ? col - 1 : -1;
                ++next.used;
            }
            std::copy(cand.begin(), cand.end(), rows_[gen].begin());
            descend(depth + 1, next);
            std::fill(rows_[gen].begin(), rows_[gen].end(), 0);
        }
    }

    const GramMatrix& g_;
    int r_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<int>> rows_;
    const std::function<bool()>* visit_ = nullptr;
    std::optional<std::uint64_t> limit_;
    bool stopped_ = false;
    bool exhausted_ = false;
    std::uint64_t nodes_ = 0;
    int used_at_leaf_ = 0;
};

void require_searchable(const GramMatrix& g, int rank) {
    if (rank < 1) throw std::invalid_argument("target rank must be at least 1");
    if (!plumbing::is_negative_definite(g)) {
        throw std::domain_error("lattice embedding search needs a negative-definite form");
    }
}

}  // namespace

SearchResult find_embedding(const GramMatrix& g, int rank, const SearchBudget& budget,
                            const SearchOptions& options) {
    require_searchable(g, rank);
    Search s(g, rank, placement_order(g, options.order));
    SearchResult out;
    std::function<bool()> visit = [&] {
        out.embedding = s.current();
        return false;
    };
    s.run(visit, budget.node_limit);
    out.nodes = s.nodes();
    if (out.embedding) {
        out.outcome = SearchOutcome::Found;
        assert(verify_embedding(g, *out.embedding));
    } else {
        out.outcome = s.budget_exhausted() ? SearchOutcome::Indeterminate : SearchOutcome::None;
    }
    return out;
}

std::vector<EmbeddingMatrix> enumerate_embeddings(const GramMatrix& g, int rank,
                                                  bool locally_minimal_only,
                                                  const SearchOptions& options) {
    require_searchable(g, rank);
    Search s(g, rank, placement_order(g, options.order));
    std::vector<EmbeddingMatrix> out;
    std::function<bool()> visit = [&] {
        if (!locally_minimal_only || s.used_columns() == rank) out.push_back(s.current());
        return true;
    };
    s.run(visit, std::nullopt);
    return out;
}

bool locally_minimal(const EmbeddingMatrix& m) {
    for (int c = 0; c < m.rank; ++c) {
        bool hit = false;
        for (const auto& v : m.vectors) hit = hit || v[c] != 0;
        if (!hit) return false;
    }
    return true;
}

EmbeddingMatrix canonical_form(const EmbeddingMatrix& m) {
    std::vector<std::vector<std::int64_t>> cols(m.rank);
    for (int c = 0; c < m.rank; ++c) {
        for (const auto& v : m.vectors) cols[c].push_back(v[c]);
        const auto first = std::find_if(cols[c].begin(), cols[c].end(), [](auto x) { return x != 0; });
        if (first != cols[c].end() && *first < 0)
            for (auto& x : cols[c]) x = -x;
    }
    std::sort(cols.begin(), cols.end(), std::greater<>());
    EmbeddingMatrix out;
    out.rank = m.rank;
    out.vectors.assign(m.vectors.size(), std::vector<std::int64_t>(m.rank, 0));
    for (int c = 0; c < m.rank; ++c)
        for (std::size_t i = 0; i < m.vectors.size(); ++i) out.vectors[i][c] = cols[c][i];
    return out;
}

std::vector<std::vector<std::size_t>> gram_automorphisms(const GramMatrix& g) {
    const std::size_t n = g.dimension();
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> image(n);
    std::vector<bool> taken(n, false);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            out.push_back(image);
            return;
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (taken[t] || g(t, t) != g(i, i)) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = g(image[j], t) == g(j, i);
            if (!ok) continue;
            taken[t] = true;
            image[i] = t;
            rec(i + 1);
            taken[t] = false;
        }
    };
    rec(0);
    return out;
}

std::size_t count_up_to_automorphisms(const GramMatrix& g, const std::vector<EmbeddingMatrix>& embeddings) {
    const auto autos = gram_automorphisms(g);
    std::vector<EmbeddingMatrix> seen;
    for (const auto& m : embeddings) {
        EmbeddingMatrix best = canonical_form(m);
        for (const auto& sigma : autos) {
            EmbeddingMatrix moved = m;
            for (std::size_t i = 0; i < sigma.size(); ++i) moved.vectors[i] = m.vectors[sigma[i]];
            best = std::min(best, canonical_form(moved), [](const auto& a, const auto& b) { return a.vectors < b.vectors; });
        }
        if (std::find(seen.begin(), seen.end(), best) == seen.end()) seen.push_back(best);
    }
    return seen.size();
}

std::string render(const EmbeddingMatrix& m, const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t i = 0; i < m.vectors.size(); ++i) {
        std::string row;
        for (int c = 0; c < m.rank; ++c) {
            const auto x = m.vectors[i][c];
            if (x == 0) continue;
            const std::string sym = c < static_cast<int>(labels.size()) ? labels[c] : "e" + std::to_string(c + 1);
            const auto mag = x < 0 ? -x : x;
            if (row.empty()) row += x < 0 ? "-" : "";
            else row += x < 0 ? " - " : " + ";
            if (mag != 1) row += std::to_string(mag);
            row += sym;
        }
        if (row.empty()) row = "0";
        out += "v" + std::to_string(i + 1) + " = " + row + "\n";
    }
    return out;
}

}  // namespace donaldson::lattice
