#pragma once

/**
 * @file classify.hpp
 * @brief Donaldson verdicts for surgeries on two-iteration torus knots,
 * parameter sweeps, the explicit witness families and the family audit.
 */

#include "donaldson/cabling.hpp"
#include "donaldson/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace donaldson::classify {

using cabling::SurgerySpec;
using lattice::EmbeddingMatrix;

struct NoNegativeDefiniteForm {};
struct ReducibleBoundary {};
struct OutOfScope {};
/// No embedding at the Donaldson rank: the surgery bounds no rational homology ball.
struct ObstructionFails {};
/// An embedding exists.  This says nothing about whether a ball exists.
struct ObstructionPasses {
    EmbeddingMatrix witness;
};
struct Indeterminate {
    std::uint64_t budget = 0;
};

using Verdict = std::variant<NoNegativeDefiniteForm, ReducibleBoundary, OutOfScope, ObstructionFails,
                             ObstructionPasses, Indeterminate>;

/// Short kebab-case name used in CSV and reports.
std::string verdict_name(const Verdict& v);

enum class GraphRoute { Calculus, ClosedForm };

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

struct ClassifyOptions {
    lattice::SearchBudget budget{kDefaultNodeBudget};
    lattice::SearchOptions search{};
    GraphRoute route = GraphRoute::Calculus;
    /// Compare both construction routes before searching.
    bool cross_check = true;
};

struct Classification {
    Verdict verdict;
    std::optional<int> rank;  ///< vertex count of the reduced graph, when one is built
    std::uint64_t nodes = 0;
};

/**
 * Throws cabling::Unsupported outside the congruence family (two iterations,
 * algebraic, alpha1 = 1 mod p1, alpha2 = +-1 mod p2).  For N < 0 no graph is
 * reduced and no search runs.
 */
Classification classify_one(const SurgerySpec& s, const ClassifyOptions& options = {});

/// Embedding built by hand for one of the two solution families.
struct KnownWitness {
    int family = 0;                   ///< 1 or 2
    EmbeddingMatrix embedding;        ///< rows follow the vertices of closed_form_two_iter(s)
    std::vector<std::string> labels;  ///< basis symbols e.., f.., g.., h
};

std::optional<KnownWitness> known_witness(const SurgerySpec& s);

enum class FamilyForm {
    Derived,  ///< alpha2 = p2 (p1+1)^2 - 1
    Printed,  ///< alpha2 = p2 (p1+1) - 1
};

const char* to_string(FamilyForm f);

/// Family 1 member (p1, p1+1; p2, alpha2; p2^2 (p1+1)^2) in the chosen form.
/// Returns nothing if the tuple is not a valid cable (never for p1, p2 >= 2).
std::optional<SurgerySpec> family_one(std::int64_t p1, std::int64_t p2, FamilyForm form);
/// Family 2 member (2, 7; p2, 16 p2 - 1; 16 p2^2).
SurgerySpec family_two(std::int64_t p2);

struct FamilyPredicate {
    FamilyForm form = FamilyForm::Derived;
    bool operator()(const SurgerySpec& s) const;
};

struct IntRange {
    std::vector<std::int64_t> values;  ///< ascending, distinct

    static IntRange interval(std::int64_t lo, std::int64_t hi);
    static IntRange of(std::vector<std::int64_t> values);
};

enum class Congruence { Minus, Plus, Both };

struct SweepRanges {
    IntRange p1, k1, p2, k2, N;
    Congruence congruence = Congruence::Both;

    /// p1, p2 in {2,3}; k1 <= 3; k2 <= 25; N in 2..6; both congruences.
    static SweepRanges desk();
};

/**
 * Specs of the range: alpha1 = p1 k1 + 1, alpha2 = p2 (k2+1) - 1 or
 * p2 k2 + 1, n = N + p2 alpha2, algebraic only.  For p2 = 2 the two
 * congruences coincide and the tuple appears once.  Ascending in
 * (p1, alpha1, p2, alpha2, n).
 */
std::vector<SurgerySpec> sweep_tuples(const SweepRanges& r);

struct SweepRow {
    SurgerySpec spec;
    std::int64_t N = 0;
    Classification result;
    double ms = 0;
};

struct SweepOptions {
    ClassifyOptions classify{};
    unsigned workers = 1;
};

/// Rows in the order of sweep_tuples(); identical for any worker count.
std::vector<SweepRow> sweep(const SweepRanges& r, const SweepOptions& options = {});

struct AuditEntry {
    SurgerySpec spec;
    std::string verdict;
    bool predicted_pass = false;
};

struct AuditReport {
    FamilyForm form = FamilyForm::Derived;
    std::size_t rows = 0;
    std::size_t agreements = 0;
    std::vector<AuditEntry> disagreements;
    std::vector<AuditEntry> indeterminate;
    /// Rows that are neither a pass nor a fail (e.g. N <= 1); not compared.
    std::size_t skipped = 0;
    /// Family members for the p1, p2 of the range that no row covers, with the reason.
    std::vector<std::pair<std::string, std::string>> uncovered_family_members;

    bool perfect() const { return disagreements.empty() && indeterminate.empty(); }
};

AuditReport theorem_audit(const SweepRanges& r, const std::vector<SweepRow>& rows, FamilyPredicate predicate);

}  // namespace donaldson::classify
