#include "qtails/qseries.hpp"

#include <algorithm>
#include <sstream>

namespace qtails {

namespace {
const Int kZeroInt = 0;
}

void QSeries::canonicalize() {
    // Strip leading zeros.
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        min_exp_q_ += static_cast<expq_t>(lead);
    }
    if (trunc_q_ == EXACT_TRUNC) {
        // Exact polynomial: drop trailing zeros.
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        if (coeffs_.empty()) min_exp_q_ = EXACT_TRUNC;
    } else {
        if (min_exp_q_ > trunc_q_) min_exp_q_ = trunc_q_;
        // Keep the stored window exactly [min_exp_q, trunc_q).
        coeffs_.resize(static_cast<std::size_t>(trunc_q_ - min_exp_q_));
        bool all_zero = std::all_of(coeffs_.begin(), coeffs_.end(),
                                    [](const Int& c) { return c == 0; });
        if (all_zero) {
            coeffs_.clear();
            min_exp_q_ = trunc_q_;
        }
    }
}

QSeries QSeries::zero(expq_t trunc_q) {
    QSeries s;
    s.min_exp_q_ = trunc_q;
    s.trunc_q_ = trunc_q;
    return s;
}

QSeries QSeries::monomial(Int coeff, expq_t exp_q, expq_t trunc_q) {
    QSeries s;
    s.min_exp_q_ = exp_q;
    s.trunc_q_ = trunc_q;
    if (coeff != 0 && exp_q < trunc_q) s.coeffs_.push_back(std::move(coeff));
    s.canonicalize();
    return s;
}

QSeries QSeries::make(expq_t min_exp_q, std::vector<Int> coeffs, expq_t trunc_q) {
    QSeries s;
    s.min_exp_q_ = min_exp_q;
    s.trunc_q_ = trunc_q;
    s.coeffs_ = std::move(coeffs);
    if (trunc_q != EXACT_TRUNC &&
        s.coeffs_.size() > static_cast<std::size_t>(trunc_q - min_exp_q))
        s.coeffs_.resize(static_cast<std::size_t>(trunc_q - min_exp_q));
    s.canonicalize();
    return s;
}

expq_t QSeries::valuation_q() const {
    if (is_zero()) throw ZeroSeries("valuation of the zero series");
    return min_exp_q_;
}

const Int& QSeries::coeff_q(expq_t exp_q) const {
    if (exp_q >= trunc_q_) {
        if (trunc_q_ == EXACT_TRUNC) return kZeroInt;
        throw TruncationExceeded("coefficient request at quarter-exponent " +
                                 std::to_string(exp_q) + " >= truncation " +
                                 std::to_string(trunc_q_));
    }
    if (exp_q < min_exp_q_) return kZeroInt;
    std::size_t i = static_cast<std::size_t>(exp_q - min_exp_q_);
    if (i >= coeffs_.size()) return kZeroInt;
    return coeffs_[i];
}

QSeries QSeries::truncated(expq_t trunc_q) const {
    if (trunc_q >= trunc_q_) return *this;
    QSeries s;
    s.min_exp_q_ = min_exp_q_;
    s.trunc_q_ = trunc_q;
    if (trunc_q > min_exp_q_) {
        std::size_t n = std::min<std::size_t>(coeffs_.size(),
                                              static_cast<std::size_t>(trunc_q - min_exp_q_));
        s.coeffs_.assign(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(n));
    }
    s.canonicalize();
    return s;
}

QSeries QSeries::operator-() const {
    QSeries s = *this;
    for (Int& c : s.coeffs_) c = -c;
    return s;
}

QSeries QSeries::operator+(const QSeries& o) const {
    expq_t trunc = std::min(trunc_q_, o.trunc_q_);
    if (is_zero() && o.is_zero()) return zero(trunc);
    expq_t lo = std::min(is_zero() ? trunc : min_exp_q_, o.is_zero() ? trunc : o.min_exp_q_);
    expq_t hi = trunc;
    if (hi == EXACT_TRUNC) {
        // Both exact polynomials.
        hi = std::max(is_zero() ? lo : min_exp_q_ + static_cast<expq_t>(coeffs_.size()),
                      o.is_zero() ? lo : o.min_exp_q_ + static_cast<expq_t>(o.coeffs_.size()));
    }
    std::vector<Int> c(static_cast<std::size_t>(hi - lo));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        expq_t e = min_exp_q_ + static_cast<expq_t>(i);
        if (e >= hi) break;
        c[static_cast<std::size_t>(e - lo)] += coeffs_[i];
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
        expq_t e = o.min_exp_q_ + static_cast<expq_t>(i);
        if (e >= hi) break;
        c[static_cast<std::size_t>(e - lo)] += o.coeffs_[i];
    }
    return make(lo, std::move(c), trunc);
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + (-o); }

QSeries QSeries::operator*(const QSeries& o) const {
    // Truncation by valuation bookkeeping: unknown terms of one factor meet
    // the lowest term of the other first.
    expq_t trunc = std::min(is_zero() ? trunc_q_ : sat_add_expq(o.trunc_q_, min_exp_q_),
                            o.is_zero() ? o.trunc_q_ : sat_add_expq(trunc_q_, o.min_exp_q_));
    if (is_zero() || o.is_zero()) return zero(trunc);
    expq_t lo = min_exp_q_ + o.min_exp_q_;
    expq_t hi = trunc == EXACT_TRUNC
                    ? lo + static_cast<expq_t>(coeffs_.size() + o.coeffs_.size()) - 1
                    : trunc;
    if (hi < lo) hi = lo;
    std::vector<Int> c(static_cast<std::size_t>(hi - lo));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        expq_t ei = min_exp_q_ + static_cast<expq_t>(i);
        if (ei + o.min_exp_q_ >= hi) break;
        std::size_t jmax = std::min<std::size_t>(
            o.coeffs_.size(), static_cast<std::size_t>(hi - ei - o.min_exp_q_));
        for (std::size_t j = 0; j < jmax; ++j) {
            if (o.coeffs_[j] == 0) continue;
            c[static_cast<std::size_t>(ei + o.min_exp_q_ + static_cast<expq_t>(j) - lo)] +=
                coeffs_[i] * o.coeffs_[j];
        }
    }
    return make(lo, std::move(c), trunc);
}

QSeries QSeries::operator*(const QMonomial& m) const {
    QSeries s = shifted(m.exp_q);
    return m.sign < 0 ? -s : s;
}

QSeries QSeries::inverse_unit() const {
    if (is_zero()) throw ZeroSeries("inverse of the zero series");
    const Int& lead = coeffs_.front();
    if (lead != 1 && lead != -1)
        throw NonUnitLeadingCoefficient("lowest coefficient " + lead.str() +
                                        " is not a unit");
    // Invert the unit part u = a * q^{-v} * lead, then restore monomial and sign.
    expq_t trunc = trunc_q_ == EXACT_TRUNC ? EXACT_TRUNC : trunc_q_ - min_exp_q_;
    if (trunc == EXACT_TRUNC && coeffs_.size() > 1)
        throw NonUnitLeadingCoefficient(
            "inverse of a non-monomial exact polynomial is not polynomial; truncate first");
    std::size_t len = trunc == EXACT_TRUNC ? 1 : static_cast<std::size_t>(trunc);
    std::vector<Int> inv(len);
    int s = lead < 0 ? -1 : 1;
    inv[0] = 1;
    // u = 1 + sum_{k>0} u_k q^{k/4} with u_k = s * coeffs_[k]; solve u*inv = 1.
    for (std::size_t k = 1; k < len; ++k) {
        Int acc = 0;
        std::size_t jmax = std::min(k, coeffs_.size() - 1);
        for (std::size_t j = 1; j <= jmax; ++j)
            if (coeffs_[j] != 0) acc += s * coeffs_[j] * inv[k - j];
        inv[k] = -acc;
    }
    QSeries r = make(-min_exp_q_, std::move(inv), sat_add_expq(trunc, -min_exp_q_));
    return s < 0 ? -r : r;
}

QSeries QSeries::shifted(expq_t dexp) const {
    QSeries s = *this;
    if (s.is_zero()) {
        if (s.trunc_q_ != EXACT_TRUNC) {
            s.trunc_q_ += dexp;
            s.min_exp_q_ = s.trunc_q_;
        }
        return s;
    }
    s.min_exp_q_ += dexp;
    if (s.trunc_q_ != EXACT_TRUNC) s.trunc_q_ += dexp;
    return s;
}

bool QSeries::agrees_with(const QSeries& o, expq_t upto_q) const {
    expq_t hi = std::min({upto_q, trunc_q_, o.trunc_q_});
    if (hi == EXACT_TRUNC) return *this == o;
    expq_t lo = std::min(is_zero() ? hi : min_exp_q_, o.is_zero() ? hi : o.min_exp_q_);
    for (expq_t e = lo; e < hi; ++e)
        if (coeff_q(e) != o.coeff_q(e)) return false;
    return true;
}

std::string QSeries::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Int& c = coeffs_[i];
        if (c == 0) continue;
        expq_t e = min_exp_q_ + static_cast<expq_t>(i);
        if (!first) out << (c < 0 ? " - " : " + ");
        else if (c < 0) out << "-";
        first = false;
        Int a = abs(c);
        if (e == 0) {
            out << a.str();
        } else {
            if (a != 1) out << a.str() << "*";
            out << "q";
            if (e != 4) {
                out << "^";
                if (e % 4 == 0) out << (e / 4);
                else out << "(" << e << "/4)";
            }
        }
    }
    if (trunc_q_ != EXACT_TRUNC) out << " + O(q^(" << trunc_q_ << "/4))";
    return out.str();
}

std::string QSeries::to_json() const {
    std::ostringstream out;
    out << "{\"min_exp_quarters\": " << (is_zero() ? trunc_q_ : min_exp_q_)
        << ", \"coefficients\": [";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out << ", ";
        out << coeffs_[i].str();
    }
    out << "], \"trunc_quarters\": ";
    if (trunc_q_ == EXACT_TRUNC) out << "null";
    else out << trunc_q_;
    out << "}";
    return out.str();
}

QSeries pochhammer(expq_t a_exp_q, long long n, expq_t N_q) {
    if (N_q <= 0) throw OutOfRange("pochhammer truncation must be positive");
    if (n < 0 && a_exp_q <= 0)
        throw DivergentProduct("(x;q)_infty requires positive lowest exponent, got " +
                               std::to_string(a_exp_q) + "/4");
    QSeries r = QSeries::one(N_q);
    for (long long k = 0;; ++k) {
        if (n >= 0 && k >= n) break;
        expq_t e = a_exp_q + 4 * k;
        if (n < 0 && e >= N_q) break; // all later factors are 1 + O(q^{N_q/4})
        QSeries factor = QSeries::one(N_q) - QSeries::monomial(1, e, N_q);
        r = r * factor;
    }
    return r;
}

QSeries pochhammer_q_exact(long long n) {
    if (n < 0) throw OutOfRange("pochhammer_q_exact requires n >= 0");
    QSeries r = QSeries::one();
    for (long long k = 1; k <= n; ++k)
        r = r * (QSeries::one() - QSeries::monomial(1, 4 * k));
    return r;
}

QSeries qbinom(long long a, long long b) {
    if (b < 0 || b > a) throw OutOfRange("qbinom requires 0 <= b <= a");
    // Pascal recurrence binom(m,j) = binom(m-1,j-1) + q^j binom(m-1,j) keeps
    // everything polynomial; row[j] holds binom(i+j, j) after pass i.
    std::vector<QSeries> row(static_cast<std::size_t>(b) + 1);
    for (long long j = 0; j <= b; ++j) row[static_cast<std::size_t>(j)] = QSeries::one();
    for (long long i = 1; i <= a - b; ++i)
        for (long long j = 1; j <= b; ++j)
            row[static_cast<std::size_t>(j)] =
                row[static_cast<std::size_t>(j - 1)] +
                row[static_cast<std::size_t>(j)].shifted(4 * j);
    return row[static_cast<std::size_t>(b)];
}

EulerTables euler_expand_pochhammer_inf(long long jmax, expq_t N_q) {
    if (N_q <= 0) throw OutOfRange("truncation must be positive");
    EulerTables t;
    t.direct.reserve(static_cast<std::size_t>(jmax) + 1);
    t.inverse.reserve(static_cast<std::size_t>(jmax) + 1);
    QSeries inv_poch = QSeries::one(N_q); // 1/(q;q)_j, updated incrementally
    for (long long j = 0; j <= jmax; ++j) {
        if (j > 0)
            inv_poch = inv_poch *
                       (QSeries::one(N_q) - QSeries::monomial(1, 4 * j, N_q)).inverse_unit();
        expq_t e = 4 * (j * (j - 1) / 2);
        t.inverse.push_back(inv_poch);
        QSeries d = inv_poch.shifted(e).truncated(N_q);
        t.direct.push_back(j % 2 ? -d : d);
    }
    return t;
}

std::pair<QMonomial, QSeries> divide_by_lowest(const QSeries& a) {
    if (a.is_zero()) throw ZeroSeries("divide_by_lowest of the zero series");
    const Int& lead = a.coeffs().front();
    if (lead != 1 && lead != -1)
        throw NonUnitLeadingCoefficient("lowest coefficient " + lead.str() +
                                        " is not +-1");
    QMonomial m{lead < 0 ? -1 : 1, a.min_exp_q()};
    QSeries u = a.shifted(-m.exp_q);
    if (m.sign < 0) u = -u;
    return {m, u};
}

} // namespace qtails
