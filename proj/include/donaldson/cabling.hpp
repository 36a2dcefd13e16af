#pragma once

/**
 * @file cabling.hpp
 * @brief Iterated torus knots and the plumbing trees bounding their surgeries.
 *
 * Two independent routes build the negative-definite tree of a two-iteration
 * surgery: the plumbing calculus applied to the raw graph, and a closed-form
 * centipede assembled directly from the cabling parameters.  They are kept as
 * mutual oracles; see cross_check().
 */

#include "donaldson/plumbing.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace donaldson::cabling {

using plumbing::VertexId;
using plumbing::WeightedTree;

/// The requested construction is outside what is supported (e.g. not algebraic).
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CablePair {
    std::int64_t p = 0;
    std::int64_t alpha = 0;
    friend bool operator==(const CablePair&, const CablePair&) = default;
};

/// T(p1,a1; ...; pk,ak): the (pk,ak)-cable of ... of the (p1,a1) torus knot.
class CableTower {
public:
    /// Throws std::invalid_argument unless non-empty, p >= 2, alpha >= 1, gcd = 1.
    explicit CableTower(std::vector<CablePair> pairs);

    const std::vector<CablePair>& pairs() const { return pairs_; }
    std::size_t iterations() const { return pairs_.size(); }
    const CablePair& operator[](std::size_t i) const { return pairs_.at(i); }

    bool algebraic() const;
    bool super_algebraic() const;

    std::string to_string() const;

    friend bool operator==(const CableTower&, const CableTower&) = default;

private:
    std::vector<CablePair> pairs_;
};

/// Newton pairs (p_i, q_i): alpha_1 = q_1, alpha_{i+1} = q_{i+1} + p_{i+1} p_i alpha_i.
CableTower from_newton_pairs(const std::vector<CablePair>& newton);

enum class TowerClass { NotAlgebraic, AlgebraicOnly, SuperAlgebraic };

TowerClass classify_tower(const CableTower& t);
const char* to_string(TowerClass c);

struct SurgerySpec {
    CableTower knot;
    std::int64_t n = 0;

    /// N = n - p_k alpha_k, the weight of the surgery leaf.
    std::int64_t reduced_framing() const;
    std::string to_string() const;
};

/// Throws std::invalid_argument for n == 0.
SurgerySpec make_spec(CableTower knot, std::int64_t n);

/**
 * Weight of the hook corner: the sum 1/(p a) + (a-p)* /a + (p ceil(a/p) - a)* /p
 * must be a positive integer below 2, so this always returns 1.  Any other
 * value throws std::logic_error.
 */
int corner_weight(std::int64_t p, std::int64_t alpha);

/// Segment of the centipede a vertex belongs to; numbering starts at 1.
enum class Part { Torso, Leg, Node, Tail, Junction, Surgery };

struct Role {
    Part part = Part::Torso;
    int body = 0;
    friend bool operator==(const Role&, const Role&) = default;
};

std::string to_string(const Role& r);

struct AnnotatedTree {
    WeightedTree tree;
    std::map<VertexId, Role> roles;
};

/**
 * Raw plumbing of S^3_n(K).  Hook i is the chain of torso weights
 * -[alpha_i/(alpha_i - p_i)] ending in a (-1) corner, with the leg
 * -[alpha_i/p_i] minus its first coefficient hanging off the corner.  Hook i
 * joins hook i+1 through a vertex of weight -p_i alpha_i followed by a (-1),
 * and the last corner carries the surgery leaf of weight N.
 *
 * Throws Unsupported for towers that are not algebraic.
 */
AnnotatedTree raw_plumbing_annotated(const SurgerySpec& s);
WeightedTree raw_plumbing(const SurgerySpec& s);

/// Outcome of reduced_plumbing when N is not at least 2.
enum class ReducedStatus { NegativeDefinite, NoNegativeDefiniteForm, ReducibleBoundary, OutOfScope };

struct ReducedPlumbing {
    ReducedStatus status;
    AnnotatedTree graph;  ///< calculus output (meaningful for every status)
};

/**
 * reduce(raw_plumbing(s)) with roles carried through the calculus.  N < 0
 * yields NoNegativeDefiniteForm, N = 0 ReducibleBoundary, N = 1 OutOfScope
 * (the tree is still negative definite there, but flagged).
 */
ReducedPlumbing reduced_plumbing(const SurgerySpec& s);

/// alpha_1 = 1 (mod p_1), alpha_2 = +-1 (mod p_2), algebraic, two iterations.
bool in_congruence_family(const CableTower& t);

/**
 * Reduced centipede written down directly from (k1, p1, k2, p2, N), without
 * running the calculus.  Requires in_congruence_family() and N >= 2; throws
 * Unsupported otherwise.
 */
AnnotatedTree closed_form_two_iter(const SurgerySpec& s);

/// Throws std::logic_error with both trees in the message if the calculus
/// and closed-form routes disagree.
void cross_check(const SurgerySpec& s);

/// Parameters of the congruence family read off the tower.
struct FamilyParams {
    std::int64_t p1, k1, p2, k2;
    int congruence;  ///< +1 or -1; -1 whenever p2 == 2
    std::int64_t N;
    std::int64_t l;  ///< twos left in torso 2 (may be -1 in the algebraic-only case)
};

FamilyParams family_params(const SurgerySpec& s);

}  // namespace donaldson::cabling
