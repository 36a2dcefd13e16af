#include "donaldson/hjcf.hpp"

#include <sstream>
#include <stdexcept>

namespace donaldson::hjcf {

PositiveRational::PositiveRational(Integer numerator, Integer denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (num_ <= 0 || den_ <= 0) {
        throw std::invalid_argument("rational parts must be positive: " + num_.get_str() +
                                    "/" + den_.get_str());
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
    if (g != 1) {
        throw std::invalid_argument("fraction not in lowest terms: " + num_.get_str() + "/" +
                                    den_.get_str());
    }
}

namespace {

Integer parse_integer(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty integer");
    Integer v;
    if (v.set_str(text, 10) != 0) throw std::invalid_argument("not an integer: '" + text + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n[]");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\n[]");
    return s.substr(b, e - b + 1);
}

}  // namespace

PositiveRational PositiveRational::parse(const std::string& text) {
    const auto t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string::npos) return PositiveRational(parse_integer(t), 1);
    return PositiveRational(parse_integer(trim(t.substr(0, slash))),
                            parse_integer(trim(t.substr(slash + 1))));
}

std::string PositiveRational::to_string() const {
    return num_.get_str() + "/" + den_.get_str();
}

std::ostream& operator<<(std::ostream& os, const PositiveRational& x) {
    return os << x.to_string();
}

bool is_canonical(const CoeffSeq& s) {
    if (s.empty()) return false;
    for (const auto& a : s)
        if (a < 2) return false;
    return true;
}

CoeffSeq expand_neg_cf(const PositiveRational& x) {
    if (x.numerator() <= x.denominator()) {
        throw std::invalid_argument("expansion needs a value > 1, got " + x.to_string());
    }
    // a = ceil(p/q); the remainder 1/(a - p/q) = q/(a q - p) is again > 1 unless exact.
    CoeffSeq out;
    Integer p = x.numerator();
    Integer q = x.denominator();
    while (true) {
        Integer a;
        mpz_cdiv_q(a.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        out.push_back(a);
        Integer r = a * q - p;
        if (r == 0) break;
        p = q;
        q = r;
    }
    return out;
}

PositiveRational eval_neg_cf(const CoeffSeq& s) {
    if (!is_canonical(s)) throw std::invalid_argument("sequence is not canonical: " + to_string(s));
    // Fold from the back: value = a_i - 1/value.
    Integer num = s.back();
    Integer den = 1;
    for (auto it = s.rbegin() + 1; it != s.rend(); ++it) {
        Integer next = *it * num - den;
        den = num;
        num = next;
    }
    return PositiveRational(num, den);
}

CoeffSeq dual_point_rule(const CoeffSeq& s) {
    if (!is_canonical(s)) throw std::invalid_argument("sequence is not canonical: " + to_string(s));
    std::vector<Integer> column_points;
    std::size_t column = 0;  // column holding the last point of the previous row
    for (std::size_t row = 0; row < s.size(); ++row) {
        const auto points = mpz_class(s[row] - 1).get_ui();
        std::size_t start = row == 0 ? 0 : column;
        for (std::size_t k = 0; k < points; ++k) {
            if (start + k >= column_points.size()) column_points.push_back(0);
            column_points[start + k] += 1;
        }
        column = start + points - 1;
    }
    CoeffSeq out;
    out.reserve(column_points.size());
    for (auto& c : column_points) out.push_back(c + 1);
    return out;
}

Integer star_inverse(const Integer& a, const Integer& b) {
    if (b < 2) throw std::invalid_argument("star_inverse needs modulus >= 2");
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()) == 0) {
        throw std::invalid_argument("star_inverse: " + a.get_str() + " is not invertible mod " +
                                    b.get_str());
    }
    if (inv < 0) inv += b;
    return inv;
}

CoeffSeq parse_coeffs(const std::string& text) {
    CoeffSeq out;
    std::stringstream ss(trim(text));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_integer(trim(item)));
    if (out.empty()) throw std::invalid_argument("empty coefficient list");
    return out;
}

std::string to_string(const CoeffSeq& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += s[i].get_str();
    }
    return out + "]";
}

}  // namespace donaldson::hjcf
