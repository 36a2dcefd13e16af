#pragma once

/**
 * @file hjcf.hpp
 * @brief Negative (Hirzebruch-Jung) continued fractions.
 *
 * A coefficient sequence [a1, ..., as] denotes the descending fraction
 *
 *     a1 - 1/(a2 - 1/(... - 1/as))
 *
 * and is canonical when every ai >= 2.  Every rational x > 1 has exactly one
 * canonical expansion.  Everything here is exact; no floating point.
 */

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <vector>

namespace donaldson::hjcf {

using Integer = mpz_class;

/// Fraction numerator/denominator with both parts positive and coprime.
class PositiveRational {
public:
    /// Throws std::invalid_argument unless both parts are positive and coprime.
    PositiveRational(Integer numerator, Integer denominator);

    const Integer& numerator() const { return num_; }
    const Integer& denominator() const { return den_; }

    /// Parses "p/q" or a bare integer "p".
    static PositiveRational parse(const std::string& text);

    std::string to_string() const;

    friend bool operator==(const PositiveRational&, const PositiveRational&) = default;

private:
    Integer num_;
    Integer den_;
};

std::ostream& operator<<(std::ostream& os, const PositiveRational& x);

using CoeffSeq = std::vector<Integer>;

/// True iff the sequence is non-empty and every entry is at least 2.
bool is_canonical(const CoeffSeq& s);

/// Canonical expansion of x > 1.  Throws std::invalid_argument for x <= 1.
CoeffSeq expand_neg_cf(const PositiveRational& x);

/// Exact value of a canonical sequence.
PositiveRational eval_neg_cf(const CoeffSeq& s);

/**
 * Riemenschneider point rule.  Row i of the point diagram carries a_i - 1
 * points and starts in the column where row i-1 ended; the dual coefficients
 * are one more than the column counts.  If s evaluates to a/b then the result
 * evaluates to a/(a-b).
 */
CoeffSeq dual_point_rule(const CoeffSeq& s);

/// The unique a* with 0 < a* < b and a*a* = 1 (mod b).  Requires gcd(a,b)=1, b >= 2.
Integer star_inverse(const Integer& a, const Integer& b);

/// Parses "2,2,3" (brackets optional).
CoeffSeq parse_coeffs(const std::string& text);

std::string to_string(const CoeffSeq& s);

}  // namespace donaldson::hjcf
