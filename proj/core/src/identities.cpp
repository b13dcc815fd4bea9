#include "qtails/identities.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qtails/errors.hpp"
#include "qtails/knot_table.hpp"
#include "qtails/nahm.hpp"

namespace qtails {

namespace {

// Accumulates integer-exponent coefficients on the quarter grid.
class Accumulator {
public:
    explicit Accumulator(expq_t N_q) : N_q_(N_q), coeffs_(static_cast<std::size_t>(std::max<expq_t>(N_q, 0))) {}

    bool in_range(long long e) const { return 4 * e < N_q_; }
    void add(long long e, long long c) { coeffs_[static_cast<std::size_t>(4 * e)] += c; }

    QSeries take() { return QSeries::make(0, std::move(coeffs_), N_q_); }

private:
    expq_t N_q_;
    std::vector<Int> coeffs_;
};

} // namespace

QSeries h_series(long long b, bool starred, expq_t N_q) {
    if (b < 1) throw OutOfRange("h series needs b >= 1");
    if (N_q <= 0) return QSeries::zero(N_q);
    Accumulator acc(N_q);
    // e(n) = b n(n+1)/2 - n is >= |n| (|n| - 1) / 2, so the loop below covers
    // every exponent under the truncation.
    for (long long n = 0;; ++n) {
        long long ep = b * n * (n + 1) / 2 - n;          // n >= 0
        long long em = b * n * (n - 1) / 2 + n;          // -n
        bool use_p = acc.in_range(ep), use_m = n > 0 && acc.in_range(em);
        if (!use_p && !use_m && n * (n - 1) / 2 >= N_q / 4 + 1) break;
        if (starred) {
            // eps(n) = +1 for n >= 0, -1 for n < 0; the opposite convention
            // fails the anchors h*_2 = 1 and h*_4 = 1 - q + q^3 - ...
            if (use_p) acc.add(ep, 1);
            if (use_m) acc.add(em, -1);
        } else {
            long long s = (n % 2 == 0) ? 1 : -1;
            if (use_p) acc.add(ep, s);
            if (use_m) acc.add(em, s);
        }
    }
    return acc.take();
}

QSeries eval_h_product(const std::string& expr, expq_t N_q) {
    std::string s;
    for (char c : expr)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty series expression");
    if (s == "1") return QSeries::one(N_q);
    QSeries out = QSeries::one(N_q);
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] != 'h') throw ParseError("bad factor in series expression: " + s);
        ++pos;
        bool starred = pos < s.size() && s[pos] == 's';
        if (starred) ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ParseError("missing index in series expression: " + s);
        long long b = std::stoll(s.substr(start, pos - start));
        long long k = 1;
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) throw ParseError("missing exponent in series expression: " + s);
            k = std::stoll(s.substr(start, pos - start));
        }
        QSeries f = h_series(b, starred, N_q);
        for (long long i = 0; i < k; ++i) out = out * f;
        if (pos < s.size()) {
            if (s[pos] != '*') throw ParseError("expected '*' in series expression: " + s);
            ++pos;
            if (pos == s.size()) throw ParseError("trailing '*' in series expression: " + s);
        }
    }
    return out;
}

QSeries pochhammer_step(expq_t a_exp_q, expq_t step_q, long long n, expq_t N_q) {
    if (n < 0 && (a_exp_q <= 0 || step_q <= 0))
        throw OutOfRange("infinite product needs positive start and step");
    QSeries out = QSeries::one(N_q);
    expq_t e = a_exp_q;
    for (long long j = 0; n < 0 || j < n; ++j, e = sat_add_expq(e, step_q)) {
        if (e >= N_q) {
            if (n < 0) break;
            continue; // the factor is 1 + O(q^N)
        }
        out = out * (QSeries::one(N_q) - QSeries::monomial(1, e, N_q));
    }
    return out;
}

bool theta_factorization_check(long long b, expq_t N_q) {
    if (b < 2) throw OutOfRange("theta factorization needs b >= 2");
    QSeries denom = QSeries::one(N_q);
    for (long long k = 2; k <= 2 * b - 1; ++k)
        denom = denom * pochhammer_step(4 * k, 4 * (2 * b + 1), -1, N_q);
    QSeries lhs = euler_function(N_q) * denom.inverse_unit();
    // the right side sum_{n in Z} (-1)^n q^{((2b+1) n^2 + (2b-1) n)/2} has the
    // same exponents as h_{2b+1}
    return lhs.agrees_with(h_series(2 * b + 1, false, N_q), N_q);
}

QSeries twist_knot_phi(long long p, Side side, expq_t N_q) {
    if (p == 0) throw OutOfRange("twist parameter must be nonzero");
    if (p < 0) {
        if (side == Side::tail) return euler_function(N_q);
        long long m = -p;
        QSeries denom = QSeries::one(N_q);
        for (long long k = 2; k <= 2 * m - 1; ++k)
            denom = denom * pochhammer_step(4 * k, 4 * (2 * m + 1), -1, N_q);
        return euler_function(N_q) * denom.inverse_unit();
    }
    if (side == Side::head) return euler_function(N_q);
    // tail, p > 0: the difference of the two unilateral false theta sums.
    // Substituting n -> -(n+1) in the first exponent gives the second, so
    // this equals h*_{2p} with the sign convention of h_series.
    Accumulator acc(N_q);
    for (long long n = 0;; ++n) {
        long long ep = p * n * n + (p - 1) * n;
        long long em = p * n * n + (p + 1) * n + 1;
        if (!acc.in_range(ep) && !acc.in_range(em)) break;
        if (acc.in_range(ep)) acc.add(ep, 1);
        if (acc.in_range(em)) acc.add(em, -1);
    }
    return acc.take();
}

QSeries durfee_factor(long long b1, long long b2, expq_t N_q) {
    QSeries sum = QSeries::zero(N_q);
    std::vector<QSeries> inv; // 1/(q;q)_m
    auto inv_at = [&](long long m) {
        while (static_cast<long long>(inv.size()) <= m)
            inv.push_back(pochhammer(4, static_cast<long long>(inv.size()), N_q).inverse_unit());
        return inv[static_cast<std::size_t>(m)];
    };
    for (long long a = std::max(-b1, -b2);; ++a) {
        long long m1 = a + b1, m2 = a + b2;
        expq_t e = 4 * m1 * m2;
        if (m1 > 0 && m2 > 0 && e >= N_q) break;
        if (e >= N_q) continue; // one factor still zero, exponent past cutoff
        sum = sum + QSeries::monomial(1, e, N_q) * inv_at(m1) * inv_at(m2);
    }
    return euler_function(N_q) * sum;
}

namespace {

QSeries one_minus_q_inverse(expq_t N_q) {
    return (QSeries::one(N_q) - QSeries::monomial(1, 4, N_q)).inverse_unit();
}

} // namespace

QSeries tetra_series(long long n, expq_t N_q) {
    if (n < 0) throw OutOfRange("color must be nonnegative");
    std::vector<QSeries> inv; // 1/(q;q)_m
    for (long long m = 0; m <= n; ++m)
        inv.push_back(pochhammer(4, m, N_q).inverse_unit());
    QSeries sum = QSeries::zero(N_q);
    for (long long k = 0; k <= n; ++k) {
        expq_t e = 4 * (k * (3 * k + 1) / 2);
        if (e >= N_q) break;
        QSeries term = QSeries::monomial((k % 2 == 0) ? 1 : -1, e, N_q) *
                       pochhammer(4, 4 * n + 1 - k, N_q);
        const QSeries& ik = inv[static_cast<std::size_t>(k)];
        const QSeries& il = inv[static_cast<std::size_t>(n - k)];
        term = term * ik * ik * ik;
        term = term * il * il * il * il;
        sum = sum + term;
    }
    return sum * one_minus_q_inverse(N_q);
}

QSeries tetra_phi0(expq_t N_q) {
    std::vector<QSeries> inv;
    QSeries sum = QSeries::zero(N_q);
    for (long long k = 0;; ++k) {
        expq_t e = 4 * (k * (3 * k + 1) / 2);
        if (e >= N_q) break;
        QSeries ik = pochhammer(4, k, N_q).inverse_unit();
        sum = sum + QSeries::monomial((k % 2 == 0) ? 1 : -1, e, N_q) * ik * ik * ik;
    }
    QSeries ie = euler_function(N_q).inverse_unit();
    return sum * ie * ie * ie * one_minus_q_inverse(N_q);
}

const QSeries& ratio_85_reference() {
    static const QSeries ref = [] {
        static const long long c[101] = {
            1,  -1, 1,  0,  -1, 1,  1,  0,  -1, 0,  2,  1,  1,  -1, -2, 0,  2,
            3,  2,  1,  0,  -3, -2, 1,  4,  4,  5,  3,  1,  -2, -3, -3, 0,  5,
            8,  8,  8,  6,  3,  -2, -5, -6, -1, 2,  9,  13, 17, 16, 14, 9,  4,
            -3, -8, -8, -5, 3,  14, 21, 27, 32, 33, 28, 21, 11, 1,  -9, -11,
            -11, -2, 9,  27, 40, 56, 60, 65, 62, 54, 39, 23, 4,  -9, -16, -14,
            -3, 16, 40, 67, 92, 114, 129, 135, 127, 115, 92, 66, 35, 9,  -12,
            -14, -11, 13};
        std::vector<Int> coeffs(4 * 101);
        for (int e = 0; e <= 100; ++e) coeffs[static_cast<std::size_t>(4 * e)] = c[e];
        return QSeries::make(0, std::move(coeffs), 4 * 101);
    }();
    return ref;
}

TableReport knot_table_suite(long long N) {
    if (N < 1) throw OutOfRange("suite order must be positive");
    const expq_t T = 4 * (N + 1);
    TableReport rep;
    rep.order = N;
    for (const auto& r : knot_table()) {
        TableRowReport row;
        row.name = r.name;
        row.proven = r.proven;
        row.tail_known = !r.tail_expr.empty();
        row.head_known = !r.head_expr.empty();
        LinkDiagram d = parse_pd(r.pd);
        QSeries t = phi0(nahm_data(faces(d, false)), N).truncated(T);
        QSeries h = phi0(nahm_data(faces(d, true)), N).truncated(T);
        QSeries te = row.tail_known ? eval_h_product(r.tail_expr, T) : QSeries();
        QSeries he = row.head_known ? eval_h_product(r.head_expr, T) : QSeries();
        auto fits = [&](const QSeries& got, bool known, const QSeries& want) {
            return !known || got.agrees_with(want, T);
        };
        // The data file records the coloring whose tail expression matches the
        // default checkerboard choice, but the comparison double-checks by
        // trying the mirrored assignment too.
        bool direct = fits(t, row.tail_known, te) && fits(h, row.head_known, he);
        bool swapped = fits(h, row.tail_known, te) && fits(t, row.head_known, he);
        if (!direct && swapped) {
            std::swap(t, h);
            row.swapped = true;
            direct = true;
        }
        row.tail_ok = row.tail_known && t.agrees_with(te, T);
        row.head_ok = row.head_known && h.agrees_with(he, T);
        if (!row.head_known) {
            // no closed form: compare head / h_3 against the stored expansion
            const QSeries& ref = ratio_85_reference();
            expq_t upto = std::min<expq_t>(T, ref.trunc_q());
            QSeries ratio = h * h_series(3, false, T).inverse_unit();
            row.ratio_checked = true;
            row.ratio_ok = ratio.agrees_with(ref, upto);
        }
        bool row_ok = (!row.tail_known || row.tail_ok) &&
                      (!row.head_known || row.head_ok) &&
                      (!row.ratio_checked || row.ratio_ok);
        if (r.proven && !row_ok) rep.proven_pass = false;
        if (!row_ok) rep.all_pass = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string TableReport::to_json() const {
    std::ostringstream out;
    out << "{\"order\":" << order << ",\"proven_pass\":" << (proven_pass ? "true" : "false")
        << ",\"all_pass\":" << (all_pass ? "true" : "false") << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << (i ? "," : "") << "{\"name\":\"" << r.name << "\",\"proven\":"
            << (r.proven ? "true" : "false") << ",\"swapped\":" << (r.swapped ? "true" : "false");
        if (r.tail_known) out << ",\"tail_ok\":" << (r.tail_ok ? "true" : "false");
        if (r.head_known) out << ",\"head_ok\":" << (r.head_ok ? "true" : "false");
        if (r.ratio_checked) out << ",\"ratio_ok\":" << (r.ratio_ok ? "true" : "false");
        out << "}";
    }
    out << "]}";
    return out.str();
}

std::string TableReport::to_text() const {
    std::ostringstream out;
    out << "knot      tail            head            status\n";
    for (const auto& r : rows) {
        const auto& rec = knot_lookup(r.name);
        auto cell = [](bool known, bool ok, const std::string& expr) {
            if (!known) return std::string("(no closed form)");
            return expr + (ok ? " ok" : " MISMATCH");
        };
        out << r.name;
        out << std::string(r.name.size() < 10 ? 10 - r.name.size() : 1, ' ');
        std::string tc = cell(r.tail_known, r.tail_ok, rec.tail_expr);
        std::string hc = r.ratio_checked
                             ? std::string(r.ratio_ok ? "expansion ok" : "expansion MISMATCH")
                             : cell(r.head_known, r.head_ok, rec.head_expr);
        out << tc << std::string(tc.size() < 16 ? 16 - tc.size() : 1, ' ');
        out << hc << std::string(hc.size() < 16 ? 16 - hc.size() : 1, ' ');
        out << (r.proven ? "proven" : "conjectural");
        if (r.swapped) out << " (mirrored)";
        out << "\n";
    }
    return out.str();
}

} // namespace qtails
