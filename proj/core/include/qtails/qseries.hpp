#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtails/errors.hpp"

namespace qtails {

using Int = boost::multiprecision::cpp_int;

// All exponents live on the quarter-integer grid: the stored integer e
// represents q^(e/4).  Integer powers of q therefore have exponents divisible
// by 4 and half-integer powers exponents divisible by 2.
using expq_t = std::int64_t;

// Sentinel truncation for exact Laurent polynomials: every coefficient at or
// beyond EXACT_TRUNC is known to be zero.  Chosen far below the int64 range so
// that saturating exponent arithmetic cannot overflow.
inline constexpr expq_t EXACT_TRUNC = INT64_C(1) << 56;

// Saturating addition of quarter-exponents, capped at EXACT_TRUNC.
inline expq_t sat_add_expq(expq_t a, expq_t b) {
    if (a >= EXACT_TRUNC || b >= EXACT_TRUNC) return EXACT_TRUNC;
    expq_t s = a + b;
    return s >= EXACT_TRUNC ? EXACT_TRUNC : s;
}

// A signed monomial +-q^(exp_q/4).
struct QMonomial {
    int sign = 1; // +1 or -1
    expq_t exp_q = 0;
};

// Truncated Laurent series in q with exponents on the quarter grid and exact
// integer coefficients.  coeffs[i] is the coefficient of q^((min_exp_q+i)/4);
// everything at quarter-exponent >= trunc_q is unknown (or known zero when
// trunc_q == EXACT_TRUNC).
//
// Canonical form: either coeffs is empty (the zero series, min_exp_q ==
// trunc_q for finite truncations) or coeffs.front() != 0.  Exact polynomials
// additionally drop trailing zeros.
class QSeries {
public:
    QSeries() : min_exp_q_(EXACT_TRUNC), trunc_q_(EXACT_TRUNC) {}

    static QSeries zero(expq_t trunc_q = EXACT_TRUNC);
    static QSeries monomial(Int coeff, expq_t exp_q, expq_t trunc_q = EXACT_TRUNC);
    static QSeries one(expq_t trunc_q = EXACT_TRUNC) { return monomial(1, 0, trunc_q); }
    // Builds from raw data and canonicalizes.
    static QSeries make(expq_t min_exp_q, std::vector<Int> coeffs, expq_t trunc_q);

    expq_t min_exp_q() const { return min_exp_q_; }
    expq_t trunc_q() const { return trunc_q_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_exact() const { return trunc_q_ == EXACT_TRUNC; }

    // Lowest exponent with nonzero coefficient; throws ZeroSeries on 0.
    expq_t valuation_q() const;

    // Coefficient of q^(exp_q/4); throws TruncationExceeded at or beyond the
    // truncation (unless the series is exact).
    const Int& coeff_q(expq_t exp_q) const;

    // Restricts to coefficients with exponent < trunc_q (no-op if already
    // weaker).
    QSeries truncated(expq_t trunc_q) const;

    QSeries operator-() const;
    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries operator*(const QMonomial& m) const;

    // Multiplicative inverse; requires the lowest coefficient to be +-1.
    QSeries inverse_unit() const;

    // Multiplies by q^(dexp/4).
    QSeries shifted(expq_t dexp) const;

    // Structural equality (same truncation, same coefficients).
    bool operator==(const QSeries& o) const = default;

    // True when the two series have identical coefficients on the exponent
    // range [-inf, upto_q) that both know about; upto_q defaults to the weaker
    // truncation.
    bool agrees_with(const QSeries& o, expq_t upto_q = EXACT_TRUNC) const;

    std::string to_string() const;
    std::string to_json() const;

private:
    void canonicalize();

    expq_t min_exp_q_;
    expq_t trunc_q_;
    std::vector<Int> coeffs_;
};

// (q^(a_exp_q/4); q)_n = prod_{k=0}^{n-1} (1 - q^(a_exp_q/4 + k)), truncated
// at N_q quarter-units; n < 0 means the infinite product, which requires
// a_exp_q > 0.
QSeries pochhammer(expq_t a_exp_q, long long n, expq_t N_q);

// (q;q)_n as an exact polynomial (n >= 0).
QSeries pochhammer_q_exact(long long n);

// (q;q)_infty truncated at N_q quarter-units.
inline QSeries euler_function(expq_t N_q) { return pochhammer(4, -1, N_q); }

// Gaussian binomial (q;q)_a / ((q;q)_b (q;q)_{a-b}) as an exact polynomial.
QSeries qbinom(long long a, long long b);

// x-coefficient tables of (x;q)_infty = sum_j (-1)^j q^(j(j-1)/2) x^j / (q;q)_j
// and 1/(x;q)_infty = sum_j x^j / (q;q)_j, for j = 0..jmax, each a QSeries
// truncated at N_q quarter-units.
struct EulerTables {
    std::vector<QSeries> direct;  // coefficients of (x;q)_infty
    std::vector<QSeries> inverse; // coefficients of 1/(x;q)_infty
};
EulerTables euler_expand_pochhammer_inf(long long jmax, expq_t N_q);

// Splits a nonzero series as monomial * unit with the unit having constant
// term +1 at exponent 0; the lowest coefficient must be +-1.
std::pair<QMonomial, QSeries> divide_by_lowest(const QSeries& a);

} // namespace qtails
