#pragma once

/**
 * @file lattice.hpp
 * @brief Exact search for lattice embeddings into (Z^r, -Id).
 *
 * An embedding assigns an integer vector v_i to every generator so that
 * -(v_i . v_j) equals the Gram entry G(i,j).  The search is a complete
 * backtracking over generators.  At each step only one representative per
 * orbit of the stabiliser of the vectors already placed is tried: the
 * stabiliser of a set of rows inside the signed permutations of Z^r permutes
 * columns whose (sign-normalised) contents agree, and acts as the full
 * hyperoctahedral group on the untouched columns.  Requiring the new vector to
 * be non-increasing inside every such block picks exactly one element per
 * orbit, so the search never misses an embedding and enumeration lists every
 * isometry class once.
 */

#include "donaldson/plumbing.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace donaldson::lattice {

using plumbing::GramMatrix;

struct EmbeddingMatrix {
    int rank = 0;
    /// One row per generator, each of length `rank`.
    std::vector<std::vector<std::int64_t>> vectors;

    friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;
};

/// True iff -M M^T == G.  Throws std::invalid_argument on a shape mismatch.
bool verify_embedding(const GramMatrix& g, const EmbeddingMatrix& m);

struct SearchBudget {
    std::optional<std::uint64_t> node_limit;
};

enum class VertexOrder {
    Frontier,      ///< heaviest first, then always a vertex adjacent to those placed
    HeaviestFirst, ///< global order by |weight|, ties by centrality
    Given,         ///< index order
};

struct SearchOptions {
    VertexOrder order = VertexOrder::Frontier;
};

enum class SearchOutcome { Found, None, Indeterminate };

const char* to_string(SearchOutcome o);

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::None;
    std::optional<EmbeddingMatrix> embedding;
    std::uint64_t nodes = 0;
};

/// Placement order used by the search (exposed for tests and diagnostics).
std::vector<std::size_t> placement_order(const GramMatrix& g, VertexOrder order);

/**
 * Decide whether G embeds in (Z^rank, -Id).  None is an exhaustive proof of
 * non-existence; Indeterminate only happens when the budget runs out.
 * Throws std::domain_error if G is not negative definite and
 * std::invalid_argument if rank < 1.
 */
SearchResult find_embedding(const GramMatrix& g, int rank, const SearchBudget& budget = {},
                            const SearchOptions& options = {});

/// Every embedding up to signed permutations of the target, one per class.
std::vector<EmbeddingMatrix> enumerate_embeddings(const GramMatrix& g, int rank,
                                                  bool locally_minimal_only,
                                                  const SearchOptions& options = {});

/// Permutations sigma of the generators with G(sigma i, sigma j) = G(i, j).
std::vector<std::vector<std::size_t>> gram_automorphisms(const GramMatrix& g);

/// Number of classes when rows may additionally be permuted by automorphisms of G.
std::size_t count_up_to_automorphisms(const GramMatrix& g, const std::vector<EmbeddingMatrix>& embeddings);

/// Every target coordinate is non-zero on some vector.
bool locally_minimal(const EmbeddingMatrix& m);

/// Canonical representative under signed column permutations (rows stay put).
EmbeddingMatrix canonical_form(const EmbeddingMatrix& m);

/// Multisets {l_1 >= l_2 >= ...} of positive integers with sum l_i^2 = m.
std::vector<std::vector<int>> square_decompositions(int m);

/// Renders rows as combinations of basis symbols, e.g. "e1 - e2".
std::string render(const EmbeddingMatrix& m, const std::vector<std::string>& labels = {});

}  // namespace donaldson::lattice
