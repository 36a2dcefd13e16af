#pragma once

/**
 * @file plumbing.hpp
 * @brief Weighted plumbing trees, their intersection forms and calculus moves.
 *
 * A WeightedTree is an immutable value: every move returns a new tree.  Vertex
 * identifiers are stable across moves, so callers can follow a vertex through
 * a reduction.  New vertices always receive max(id) + 1.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace donaldson::plumbing {

using Weight = std::int64_t;

struct VertexId {
    int value = 0;
    friend auto operator<=>(VertexId, VertexId) = default;
};

/// Thrown when a move's precondition does not hold.
class InvalidMove : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class WeightedTree {
public:
    /// Throws std::invalid_argument unless the data describe a non-empty tree.
    WeightedTree(std::map<VertexId, Weight> weights,
                 const std::vector<std::pair<VertexId, VertexId>>& edges);

    std::size_t size() const { return weights_.size(); }
    std::vector<VertexId> vertices() const;
    Weight weight(VertexId v) const;
    bool contains(VertexId v) const { return weights_.count(v) != 0; }
    const std::set<VertexId>& neighbors(VertexId v) const;
    std::size_t valence(VertexId v) const { return neighbors(v).size(); }
    bool adjacent(VertexId a, VertexId b) const;
    /// Each edge once, as (smaller, larger), ascending.
    std::vector<std::pair<VertexId, VertexId>> edges() const;
    const std::map<VertexId, Weight>& weights() const { return weights_; }
    VertexId next_id() const;

    friend bool operator==(const WeightedTree&, const WeightedTree&) = default;

private:
    WeightedTree() = default;
    friend class TreeEditor;

    std::map<VertexId, Weight> weights_;
    std::map<VertexId, std::set<VertexId>> adjacency_;
};

/// Dense symmetric integer matrix.
class GramMatrix {
public:
    explicit GramMatrix(std::size_t dimension);
    /// Throws std::invalid_argument unless rows are square and symmetric.
    static GramMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

    std::size_t dimension() const { return dim_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    /// Sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, std::int64_t value);

    friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

private:
    std::size_t dim_;
    std::vector<std::int64_t> a_;
};

/// Rows and columns follow ascending VertexId.
GramMatrix gram_matrix(const WeightedTree& t);

/// Exact determinant by fraction-free (Bareiss) elimination.
mpz_class det_exact(const GramMatrix& m);

/// Every leading principal minor has sign (-1)^k.
bool is_negative_definite(const GramMatrix& m);

struct Inertia {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Exact inertia of the intersection form, by eliminating leaves.
Inertia inertia(const WeightedTree& t);

// ---------------------------------------------------------------------------
// Calculus moves

/// Remove a (-1)-vertex of valence <= 2; neighbours gain +1 and become adjacent.
WeightedTree blow_down(const WeightedTree& t, VertexId v);

struct VertexSite {
    VertexId v;
};
struct EdgeSite {
    VertexId a;
    VertexId b;
};
struct FreeSite {};
using BlowUpSite = std::variant<VertexSite, EdgeSite, FreeSite>;

/// Inverse of blow_down.  A free blow-up would disconnect the tree and is rejected.
WeightedTree blow_up(const WeightedTree& t, const BlowUpSite& site);

/// Merge the two neighbours of a 0-vertex of valence 2.  The merged vertex keeps
/// the smaller identifier.
WeightedTree absorb_zero(const WeightedTree& t, VertexId v);

/// A leaf of weight N >= 1 hanging off a (-1)-vertex, if any (lowest id first).
std::optional<VertexId> find_positive_leaf(const WeightedTree& t);

/**
 * Replace a leaf of weight N >= 1 and its (-1) neighbour by a chain of N
 * (-2)-vertices, by N-1 edge blow-ups followed by blowing down the leaf once
 * it has weight +1.  The former (-1)-vertex keeps its id and heads the chain.
 */
WeightedTree flatten_positive_leaf(const WeightedTree& t);
WeightedTree flatten_positive_leaf(const WeightedTree& t, VertexId leaf);

/**
 * Normal-form reduction.  Flattens one positive leaf if present, then applies
 * 0-absorptions, (-1)-blow-downs and positive-leaf flattenings, in that order
 * of priority and lowest id first, until none applies.  Absorptions and
 * flattenings lower the positive index by one and blow-downs keep it while
 * removing a vertex, so (positive index, vertex count) decreases
 * lexicographically at every step.
 */
WeightedTree reduce(const WeightedTree& t);

/// reduce() left a form that is not negative definite.
struct NoNegativeDefiniteForm {
    WeightedTree stuck;
};

using ReduceOutcome = std::variant<WeightedTree, NoNegativeDefiniteForm>;

ReduceOutcome reduce_negative_definite(const WeightedTree& t);

/// Weight-preserving tree isomorphism via canonical encoding.
std::string canonical_form(const WeightedTree& t);
bool isomorphic(const WeightedTree& a, const WeightedTree& b);

/// Relabels vertices through the given injective map.
WeightedTree relabel(const WeightedTree& t, const std::map<VertexId, VertexId>& ids);

/// Builds a path whose vertices get ids 0..k-1.
WeightedTree path(const std::vector<Weight>& weights);

std::string describe(const WeightedTree& t);

}  // namespace donaldson::plumbing
