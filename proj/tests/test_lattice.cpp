#include "donaldson/cabling.hpp"
#include "donaldson/lattice.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>

using namespace donaldson;
using namespace donaldson::lattice;
using plumbing::GramMatrix;

namespace {

EmbeddingMatrix rows(int rank, std::vector<std::vector<std::int64_t>> v) { return EmbeddingMatrix{rank, std::move(v)}; }

GramMatrix reduced_gram(std::int64_t p1, std::int64_t a1, std::int64_t p2, std::int64_t a2, std::int64_t n) {
    const auto s = cabling::make_spec(cabling::CableTower({{p1, a1}, {p2, a2}}), n);
    return plumbing::gram_matrix(cabling::reduced_plumbing(s).graph.tree);
}

// Every tree Gram matrix on up to four vertices with diagonal in [-4, -1].
std::vector<GramMatrix> small_tree_grams() {
    std::vector<std::vector<std::pair<int, int>>> shapes = {
        {}, {{0, 1}}, {{0, 1}, {1, 2}}, {{0, 1}, {1, 2}, {2, 3}}, {{0, 1}, {0, 2}, {0, 3}}};
    std::vector<GramMatrix> out;
    for (const auto& edges : shapes) {
        const int n = edges.empty() ? 1 : static_cast<int>(edges.size()) + 1;
        int combos = 1;
        for (int i = 0; i < n; ++i) combos *= 4;
        for (int c = 0; c < combos; ++c) {
            GramMatrix g(n);
            int x = c;
            for (int i = 0; i < n; ++i, x /= 4) g.set(i, i, -1 - x % 4);
            for (auto [a, b] : edges) g.set(a, b, 1);
            out.push_back(g);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("verify") {
    CHECK(verify_embedding(GramMatrix::from_rows({{-2}}), rows(2, {{1, -1}})));
    CHECK(verify_embedding(oracle::chain_gram(3), rows(3, {{1, -1, 0}, {0, 1, -1}, {-1, -1, 0}})));
    CHECK_FALSE(verify_embedding(oracle::chain_gram(2), rows(2, {{1, -1}, {1, 1}})));
    CHECK_THROWS_AS(verify_embedding(oracle::chain_gram(2), rows(2, {{1, -1}})), std::invalid_argument);
    CHECK_THROWS_AS(verify_embedding(oracle::chain_gram(1), rows(2, {{1, -1, 0}})), std::invalid_argument);
}

TEST_CASE("square decompositions") {
    CHECK(square_decompositions(2) == std::vector<std::vector<int>>{{1, 1}});
    CHECK(square_decompositions(3) == std::vector<std::vector<int>>{{1, 1, 1}});
    CHECK(square_decompositions(4) == std::vector<std::vector<int>>{{2}, {1, 1, 1, 1}});
    CHECK(square_decompositions(0).empty());
    // Against a direct count of non-increasing tuples.
    for (int m = 1; m <= 40; ++m) {
        std::size_t count = 0;
        std::function<void(int, int)> rec = [&](int rest, int cap) {
            if (rest == 0) {
                ++count;
                return;
            }
            for (int l = 1; l <= cap; ++l)
                if (l * l <= rest) rec(rest - l * l, l);
        };
        rec(m, m);
        const auto ds = square_decompositions(m);
        CHECK(ds.size() == count);
        for (const auto& d : ds) {
            int s = 0;
            for (int x : d) s += x * x;
            CHECK(s == m);
            CHECK(std::is_sorted(d.rbegin(), d.rend()));
        }
    }
}

TEST_CASE("search on chains and surgeries") {
    CHECK(find_embedding(oracle::chain_gram(4), 4).outcome == SearchOutcome::None);
    const auto c3 = find_embedding(oracle::chain_gram(3), 3);
    REQUIRE(c3.outcome == SearchOutcome::Found);
    CHECK(verify_embedding(oracle::chain_gram(3), *c3.embedding));

    const auto g36 = reduced_gram(2, 3, 2, 17, 36);
    const auto f = find_embedding(g36, 8);
    REQUIRE(f.outcome == SearchOutcome::Found);
    CHECK(verify_embedding(g36, *f.embedding));

    const auto g38 = reduced_gram(2, 3, 2, 17, 38);
    CHECK(find_embedding(g38, static_cast<int>(g38.dimension())).outcome == SearchOutcome::None);

    CHECK_THROWS_AS(find_embedding(GramMatrix::from_rows({{0}}), 1), std::domain_error);
    CHECK_THROWS_AS(find_embedding(oracle::chain_gram(2), 0), std::invalid_argument);
}

TEST_CASE("budget exhaustion is indeterminate, never a false negative") {
    const auto g = reduced_gram(2, 3, 2, 17, 38);
    const auto full = find_embedding(g, static_cast<int>(g.dimension()));
    REQUIRE(full.outcome == SearchOutcome::None);
    REQUIRE(full.nodes > 2);
    const auto cut = find_embedding(g, static_cast<int>(g.dimension()), SearchBudget{full.nodes - 1});
    CHECK(cut.outcome == SearchOutcome::Indeterminate);
    CHECK(find_embedding(g, static_cast<int>(g.dimension()), SearchBudget{full.nodes}).outcome == SearchOutcome::None);
}

TEST_CASE("placement orders") {
    const auto g = reduced_gram(2, 7, 2, 31, 64);
    for (auto o : {VertexOrder::Frontier, VertexOrder::HeaviestFirst, VertexOrder::Given}) {
        auto order = placement_order(g, o);
        CHECK(order.size() == g.dimension());
        std::sort(order.begin(), order.end());
        for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
        const auto r = find_embedding(g, 9, {}, SearchOptions{o});
        REQUIRE(r.outcome == SearchOutcome::Found);
        CHECK(verify_embedding(g, *r.embedding));
    }
    // Heaviest vertex first.
    CHECK(g(placement_order(g, VertexOrder::Frontier)[0], placement_order(g, VertexOrder::Frontier)[0]) == -3);
}

TEST_CASE("minus-two chains: one locally minimal class into rank k+1, rank k only for k = 3") {
    for (std::size_t k = 1; k <= 6; ++k) {
        const auto g = oracle::chain_gram(k);
        const auto up = enumerate_embeddings(g, static_cast<int>(k + 1), true);
        REQUIRE(up.size() == 1);
        // The staircase e1 - e2, ..., ek - e(k+1).
        EmbeddingMatrix stair{static_cast<int>(k + 1), {}};
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<std::int64_t> v(k + 1, 0);
            v[i] = 1;
            v[i + 1] = -1;
            stair.vectors.push_back(v);
        }
        CHECK(canonical_form(up[0]) == canonical_form(stair));
        const auto same = enumerate_embeddings(g, static_cast<int>(k), true);
        CHECK(same.size() == (k == 3 ? 1u : 0u));
    }
    const auto c3 = enumerate_embeddings(oracle::chain_gram(3), 3, true);
    REQUIRE(c3.size() == 1);
    CHECK(canonical_form(c3[0]) == canonical_form(rows(3, {{1, -1, 0}, {0, 1, -1}, {-1, -1, 0}})));
}

TEST_CASE("two disjoint -2 vertices into rank 2") {
    const auto g = oracle::direct_sum({oracle::chain_gram(1), oracle::chain_gram(1)});
    const auto all = enumerate_embeddings(g, 2, true);
    REQUIRE(all.size() == 1);
    CHECK(canonical_form(all[0]) == canonical_form(rows(2, {{1, -1}, {1, 1}})));
}

TEST_CASE("enumeration counts match the brute-force orbit count") {
    for (const auto& g : small_tree_grams()) {
        if (!plumbing::is_negative_definite(g) || g.dimension() > 3) continue;
        for (int r = 1; r <= 4; ++r) {
            const auto naive = oracle::all_embeddings(g, r);
            const auto classes = enumerate_embeddings(g, r, false);
            CHECK(classes.size() == oracle::orbit_count(naive));
            std::vector<EmbeddingMatrix> minimal;
            for (const auto& m : naive)
                if (locally_minimal(m)) minimal.push_back(m);
            CHECK(enumerate_embeddings(g, r, true).size() == oracle::orbit_count(minimal));
        }
    }
}

TEST_CASE("find_embedding agrees with the naive oracle on small trees") {
    std::size_t checked = 0;
    for (const auto& g : small_tree_grams()) {
        if (!plumbing::is_negative_definite(g)) continue;
        for (int r = 1; r <= 4; ++r) {
            const bool exists = !oracle::all_embeddings(g, r).empty();
            const auto res = find_embedding(g, r);
            CHECK(res.outcome == (exists ? SearchOutcome::Found : SearchOutcome::None));
            if (res.embedding) CHECK(verify_embedding(g, *res.embedding));
            ++checked;
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("monotonicity in the target rank") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 60; ++iter) {
        const auto t = oracle::random_tree(rng, 2 + rng() % 5, -4, -2);
        const auto g = plumbing::gram_matrix(t);
        if (!plumbing::is_negative_definite(g)) continue;
        bool found_before = false;
        for (int r = 1; r <= static_cast<int>(g.dimension()) + 2; ++r) {
            const bool found = find_embedding(g, r).outcome == SearchOutcome::Found;
            CHECK((found || !found_before));  // once found, larger ranks keep it
            found_before = found_before || found;
        }
    }
}

TEST_CASE("canonical form is invariant under signed permutations") {
    std::mt19937_64 rng(11);
    const auto g = reduced_gram(2, 3, 2, 17, 36);
    const auto m = *find_embedding(g, 8).embedding;
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<int> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        EmbeddingMatrix x = m;
        for (std::size_t i = 0; i < m.vectors.size(); ++i)
            for (int c = 0; c < 8; ++c) x.vectors[i][c] = m.vectors[i][perm[c]];
        const std::uint32_t signs = static_cast<std::uint32_t>(rng());
        for (auto& v : x.vectors)
            for (int c = 0; c < 8; ++c)
                if ((signs >> c) & 1u) v[c] = -v[c];
        CHECK(verify_embedding(g, x));
        CHECK(canonical_form(x) == canonical_form(m));
    }
}

TEST_CASE("automorphism-aware counting") {
    CHECK(gram_automorphisms(oracle::chain_gram(3)).size() == 2);
    CHECK(gram_automorphisms(oracle::direct_sum({oracle::chain_gram(1), oracle::chain_gram(1)})).size() == 2);
    // The staircase into rank k+1 stays a single class.
    const auto g = oracle::chain_gram(4);
    const auto all = enumerate_embeddings(g, 5, true);
    CHECK(count_up_to_automorphisms(g, all) == 1);
    // Every class of a disjoint union, then merged along swaps of equal components.
    const auto u = oracle::direct_sum({oracle::chain_gram(2), oracle::chain_gram(2)});
    const auto cu = enumerate_embeddings(u, 4, true);
    CHECK(count_up_to_automorphisms(u, cu) <= cu.size());
}

TEST_CASE("rendering") {
    const auto s = render(rows(3, {{1, -1, 0}, {0, 2, 1}, {-1, 0, 0}, {0, 0, 0}}));
    CHECK(s == "v1 = e1 - e2\nv2 = 2e2 + e3\nv3 = -e1\nv4 = 0\n");
    CHECK(render(rows(2, {{1, 1}}), {"f1", "h"}) == "v1 = f1 + h\n");
}

TEST_CASE("the hand-built witness for (2,3;2,17;36) fits the closed-form centipede") {
    const auto s = cabling::make_spec(cabling::CableTower({{2, 3}, {2, 17}}), 36);
    const auto g = plumbing::gram_matrix(cabling::closed_form_two_iter(s).tree);
    REQUIRE(g.dimension() == 8);
    // Basis f1..f4, g1..g3, h.
    const std::vector<std::vector<std::int64_t>> vs = {
        {1, -1, 0, 0, 0, 0, 0, 0}, {0, 1, -1, 0, 0, 0, 0, 0}, {0, 0, 1, -1, 0, 0, 0, 0},
        {0, 0, 0, 0, 1, -1, 0, 0}, {0, 0, 0, 0, 0, 1, -1, 0}, {0, 0, 1, 1, 0, 0, 0, -1},
        {0, 0, 0, 1, -1, 0, 0, 1}, {0, 0, 0, 0, 0, 1, 1, 0}};
    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    bool fits = false;
    do {
        EmbeddingMatrix m{8, {}};
        for (auto i : perm) m.vectors.push_back(vs[i]);
        fits = verify_embedding(g, m);
    } while (!fits && std::next_permutation(perm.begin(), perm.end()));
    CHECK(fits);
}
