#pragma once

// Slow, independent reference implementations used only by the tests.

#include "donaldson/hjcf.hpp"
#include "donaldson/lattice.hpp"
#include "donaldson/plumbing.hpp"

#include <Eigen/Dense>
#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using donaldson::lattice::EmbeddingMatrix;
using donaldson::plumbing::GramMatrix;
using donaldson::plumbing::VertexId;
using donaldson::plumbing::Weight;
using donaldson::plumbing::WeightedTree;

// Value of [a1,...,as] from the product of [[a,-1],[1,0]] matrices.
inline mpq_class cf_value(const donaldson::hjcf::CoeffSeq& s) {
    mpz_class m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (const auto& a : s) {
        const mpz_class n00 = m00 * a + m01, n01 = -m00;
        const mpz_class n10 = m10 * a + m11, n11 = -m10;
        m00 = n00, m01 = n01, m10 = n10, m11 = n11;
    }
    mpq_class q(m00, m10);
    q.canonicalize();
    return q;
}

// Laplace expansion along the first free row, memoised on the used-column mask.
inline mpz_class det_cofactor(const GramMatrix& g) {
    const std::size_t n = g.dimension();
    std::map<std::uint32_t, mpz_class> memo;
    std::function<mpz_class(std::size_t, std::uint32_t)> rec = [&](std::size_t row, std::uint32_t used) -> mpz_class {
        if (row == n) return 1;
        if (auto it = memo.find(used); it != memo.end()) return it->second;
        mpz_class sum = 0;
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (used & (1u << c)) continue;
            if (g(row, c) != 0) sum += sign * g(row, c) * rec(row + 1, used | (1u << c));
            sign = -sign;
        }
        return memo[used] = sum;
    };
    return rec(0, 0);
}

// Gaussian elimination over Q with row pivoting.
inline mpq_class det_rational(const GramMatrix& g) {
    const std::size_t n = g.dimension();
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(g(i, j));
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const mpq_class f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

// -G admits a Cholesky factorisation over Q with positive pivots.
inline bool negative_definite_cholesky(const GramMatrix& g) {
    const std::size_t n = g.dimension();
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = -static_cast<long>(g(i, j));
    for (std::size_t c = 0; c < n; ++c) {
        if (a[c][c] <= 0) return false;
        for (std::size_t r = c + 1; r < n; ++r) {
            const mpq_class f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return true;
}

inline donaldson::plumbing::Inertia inertia_eigen(const GramMatrix& g) {
    const auto n = static_cast<Eigen::Index>(g.dimension());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(g(i, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    donaldson::plumbing::Inertia out;
    for (auto x : es.eigenvalues()) {
        if (x > 1e-9) ++out.positive;
        else if (x < -1e-9) ++out.negative;
        else ++out.zero;
    }
    return out;
}

// Random labelled tree: vertex i > 0 hangs off a uniformly chosen earlier vertex.
template <class Rng>
WeightedTree random_tree(Rng& rng, std::size_t n, Weight lo, Weight hi) {
    std::uniform_int_distribution<Weight> wd(lo, hi);
    std::map<VertexId, Weight> w;
    std::vector<std::pair<VertexId, VertexId>> e;
    for (std::size_t i = 0; i < n; ++i) {
        w[VertexId{static_cast<int>(i)}] = wd(rng);
        if (i > 0) {
            std::uniform_int_distribution<std::size_t> pd(0, i - 1);
            e.emplace_back(VertexId{static_cast<int>(pd(rng))}, VertexId{static_cast<int>(i)});
        }
    }
    return WeightedTree(w, e);
}

// Applies absorptions and blow-downs in a random order until none applies.
template <class Rng>
WeightedTree reduce_shuffled(WeightedTree t, Rng& rng) {
    using namespace donaldson::plumbing;
    if (find_positive_leaf(t)) t = flatten_positive_leaf(t);
    for (;;) {
        std::vector<std::pair<bool, VertexId>> moves;
        for (VertexId v : t.vertices()) {
            if (t.weight(v) == 0 && t.valence(v) == 2) moves.emplace_back(true, v);
            if (t.weight(v) == -1 && t.valence(v) <= 2 && t.size() > 1) moves.emplace_back(false, v);
        }
        if (moves.empty()) return t;
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        const auto [absorb, v] = moves[pick(rng)];
        t = absorb ? absorb_zero(t, v) : blow_down(t, v);
    }
}

// All integer vectors of squared norm m in Z^r.
inline std::vector<std::vector<std::int64_t>> vectors_of_norm(int m, int r) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> x(r, 0);
    std::function<void(int, int)> rec = [&](int i, int rest) {
        if (i == r) {
            if (rest == 0) out.push_back(x);
            return;
        }
        for (std::int64_t v = -m; v <= m; ++v) {
            if (v * v > rest) continue;
            x[i] = v;
            rec(i + 1, rest - static_cast<int>(v * v));
        }
        x[i] = 0;
    };
    rec(0, m);
    return out;
}

// Every embedding, with no symmetry reduction at all.
inline std::vector<EmbeddingMatrix> all_embeddings(const GramMatrix& g, int r) {
    const std::size_t n = g.dimension();
    std::vector<std::vector<std::vector<std::int64_t>>> cands(n);
    for (std::size_t i = 0; i < n; ++i) cands[i] = vectors_of_norm(static_cast<int>(-g(i, i)), r);
    std::vector<EmbeddingMatrix> out;
    EmbeddingMatrix cur{r, std::vector<std::vector<std::int64_t>>(n)};
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (const auto& v : cands[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                std::int64_t d = 0;
                for (int c = 0; c < r; ++c) d += v[c] * cur.vectors[j][c];
                ok = -d == g(i, j);
            }
            if (!ok) continue;
            cur.vectors[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

// Minimum image under every signed permutation of the columns.
inline EmbeddingMatrix orbit_min(const EmbeddingMatrix& m) {
    const int r = m.rank;
    std::vector<int> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    EmbeddingMatrix best = m;
    bool first = true;
    do {
        for (std::uint32_t signs = 0; signs < (1u << r); ++signs) {
            EmbeddingMatrix x = m;
            for (std::size_t i = 0; i < m.vectors.size(); ++i)
                for (int c = 0; c < r; ++c)
                    x.vectors[i][c] = m.vectors[i][perm[c]] * ((signs >> c) & 1u ? -1 : 1);
            if (first || x.vectors < best.vectors) best = x, first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline std::size_t orbit_count(const std::vector<EmbeddingMatrix>& ms) {
    std::vector<EmbeddingMatrix> seen;
    for (const auto& m : ms) {
        auto k = orbit_min(m);
        if (std::find(seen.begin(), seen.end(), k) == seen.end()) seen.push_back(k);
    }
    return seen.size();
}

inline GramMatrix chain_gram(std::size_t k, Weight w = -2) {
    GramMatrix g(k);
    for (std::size_t i = 0; i < k; ++i) {
        g.set(i, i, w);
        if (i + 1 < k) g.set(i, i + 1, 1);
    }
    return g;
}

// Block-diagonal sum of matrices.
inline GramMatrix direct_sum(const std::vector<GramMatrix>& parts) {
    std::size_t n = 0;
    for (const auto& p : parts) n += p.dimension();
    GramMatrix g(n);
    std::size_t off = 0;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < p.dimension(); ++i)
            for (std::size_t j = i; j < p.dimension(); ++j) g.set(off + i, off + j, p(i, j));
        off += p.dimension();
    }
    return g;
}

}  // namespace oracle
