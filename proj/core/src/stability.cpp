#include "qtails/stability.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "qtails/errors.hpp"

namespace qtails {

QSeries reduced_hat_jones(const BraidWord& b, long long n, expq_t N_q) {
    if (n == 0) return QSeries::one(N_q);
    HatJones h = hat_jones(jones_braid(b, n));
    QSeries one_minus_q = QSeries::one(N_q) - QSeries::monomial(1, 4, N_q);
    QSeries denom = QSeries::one(N_q) - QSeries::monomial(1, 4 * (n + 1), N_q);
    return h.unit.truncated(N_q) * one_minus_q * denom.inverse_unit();
}

std::map<long long, QSeries> hat_jones_sequence(const BraidWord& b, long long n_max,
                                                expq_t N_q) {
    std::map<long long, QSeries> seq;
    for (long long n = 0; n <= n_max; ++n) seq.emplace(n, reduced_hat_jones(b, n, N_q));
    return seq;
}

long long default_n_max(int crossings) { return crossings <= 6 ? 8 : 6; }

namespace {

// Valuation in whole q powers; a series that is zero to its truncation only
// gives a lower bound, which is what the congruence checks need.
long long val_or_trunc(const QSeries& s) {
    if (s.is_zero())
        return s.trunc_q() == EXACT_TRUNC ? std::numeric_limits<long long>::max() / 8
                                          : s.trunc_q() / 4;
    expq_t v = s.valuation_q();
    if (v % 4 != 0) throw Error("stability input off the integer exponent grid");
    return v / 4;
}

QSeries shifted_residual(const std::vector<QSeries>& phis, const QSeries& fn,
                         long long n, int upto, int shift) {
    QSeries r = fn;
    for (int j = 0; j < upto; ++j) r = r - phis[j].shifted(4 * j * (n + 1));
    return r.shifted(-4 * shift * (n + 1));
}

} // namespace

std::vector<QSeries> empirical_phi(const std::map<long long, QSeries>& seq, int k,
                                   long long N, const std::vector<QSeries>& known) {
    if (k < 0) throw OutOfRange("negative stability order");
    if (known.size() > static_cast<std::size_t>(k) + 1)
        throw OutOfRange("more known limits than requested order");
    std::vector<QSeries> phis(known);
    for (int j = static_cast<int>(known.size()); j <= k; ++j) {
        // residuals of the already extracted prefix, one per available n
        std::map<long long, QSeries> res;
        for (const auto& [n, fn] : seq)
            res.emplace(n, shifted_residual(phis, fn, n, j, j));
        // extract as far as the witnesses reach; the extra orders beyond N
        // sharpen the residuals of the later phases
        std::vector<Int> coeffs;
        long long reach = -1;
        for (long long m = 0;; ++m) {
            // the two smallest n with n > m whose residual still knows q^m
            const QSeries* a = nullptr;
            const QSeries* b = nullptr;
            for (auto it = res.begin(); it != res.end(); ++it) {
                // the q^m coefficient of the j-th residual settles once the
                // color exceeds both m and j - 1
                if (it->first <= m || it->first < j) continue;
                if (it->second.trunc_q() != EXACT_TRUNC && it->second.trunc_q() <= 4 * m)
                    continue;
                if (!a) a = &it->second;
                else if (!b) {
                    b = &it->second;
                    break;
                }
            }
            if (!a || !b) break;
            if (a->coeff_q(4 * m) != b->coeff_q(4 * m))
                throw NotStabilized("coefficient of q^" + std::to_string(m) +
                                    " did not stabilize at order " + std::to_string(j));
            if (m) coeffs.insert(coeffs.end(), 3, 0);
            coeffs.push_back(a->coeff_q(4 * m));
            reach = m;
        }
        if (reach < N)
            throw NotStabilized("order " + std::to_string(j) +
                                " limit only certifiable through q^" +
                                std::to_string(reach) + ", requested q^" +
                                std::to_string(N));
        phis.push_back(QSeries::make(0, std::move(coeffs), 4 * (reach + 1)));
    }
    return phis;
}

StabilityReport verify_0stability(const QSeries& phi0,
                                  const std::map<long long, QSeries>& seq,
                                  long long n_max) {
    if (phi0.trunc_q() != EXACT_TRUNC && phi0.trunc_q() < 4 * (n_max + 1))
        throw OutOfRange("limit series truncated below the congruence range");
    StabilityReport rep;
    rep.k = 0;
    rep.phi_hat = {phi0};
    rep.pass = true;
    for (const auto& [n, fn] : seq) {
        if (n > n_max) break;
        QSeries r = fn - phi0;
        long long v = val_or_trunc(r);
        rep.residual_valuations.push_back(v);
        // a residual that vanishes to its truncation passes vacuously
        if (!r.is_zero() && v < n + 1) rep.pass = false;
    }
    return rep;
}

StabilityReport verify_kstability(const std::vector<QSeries>& phis,
                                  const std::map<long long, QSeries>& seq,
                                  long long n_max, int k) {
    if (k < 0 || phis.size() != static_cast<std::size_t>(k) + 1)
        throw OutOfRange("need exactly k+1 limit series");
    if (phis[0].trunc_q() != EXACT_TRUNC && phis[0].trunc_q() < 4 * (n_max + 1))
        throw OutOfRange("limit series truncated below the congruence range");
    StabilityReport rep;
    rep.k = k;
    rep.phi_hat = phis;
    rep.pass = true;
    double worst = 0;
    for (const auto& [n, fn] : seq) {
        if (n < k) continue; // below order k the shifted residual is degenerate
        if (n > n_max) break;
        QSeries r = shifted_residual(phis, fn, n, k + 1, k);
        long long v = val_or_trunc(r);
        rep.residual_valuations.push_back(v);
        if (!r.is_zero() && v < n + 1) rep.pass = false;
        worst = std::max(worst, static_cast<double>(n + 1 - v));
    }
    rep.rate_constants = std::make_pair(0.0, worst);
    return rep;
}

std::string StabilityReport::to_json() const {
    std::ostringstream out;
    out << "{\"k\":" << k << ",\"pass\":" << (pass ? "true" : "false");
    out << ",\"residual_valuations\":[";
    for (std::size_t i = 0; i < residual_valuations.size(); ++i)
        out << (i ? "," : "") << residual_valuations[i];
    out << "],\"phi_heads\":[";
    for (std::size_t i = 0; i < phi_hat.size(); ++i) {
        out << (i ? "," : "") << "[";
        for (int m = 0; m < 16; ++m) {
            if (phi_hat[i].trunc_q() != EXACT_TRUNC && phi_hat[i].trunc_q() <= 4 * m)
                break;
            out << (m ? "," : "") << phi_hat[i].coeff_q(4 * m);
        }
        out << "]";
    }
    out << "]";
    if (rate_constants)
        out << ",\"rate_constants\":[" << rate_constants->first << ","
            << rate_constants->second << "]";
    out << "}";
    return out.str();
}

} // namespace qtails
