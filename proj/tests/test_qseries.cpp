#include <doctest.h>

#include <random>

#include "qtails/qseries.hpp"

using namespace qtails;

namespace {

QSeries q_pow(expq_t e, expq_t trunc = EXACT_TRUNC) {
    return QSeries::monomial(1, e, trunc);
}

// Independent oracle for (q;q)_infty: multiply the binomial factors with a
// plain schoolbook loop over an int vector on the integer-exponent grid.
std::vector<long long> euler_oracle(int order) {
    std::vector<long long> c(order + 1, 0);
    c[0] = 1;
    for (int k = 1; k <= order; ++k) {
        // multiply by (1 - q^k)
        for (int i = order; i >= k; --i) c[i] -= c[i - k];
    }
    return c;
}

QSeries random_series(std::mt19937& rng, expq_t trunc) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<expq_t> lo(-8, 8);
    expq_t min = lo(rng);
    std::vector<Int> c;
    for (expq_t e = min; e < trunc; ++e) c.push_back(coeff(rng));
    return QSeries::make(min, std::move(c), trunc);
}

} // namespace

TEST_CASE("addition basics") {
    // (1 - q) + q = 1
    QSeries a = QSeries::one() - q_pow(4);
    CHECK(a + q_pow(4) == QSeries::one());

    // 0 + a keeps the weaker truncation
    QSeries b = (QSeries::one(40) + q_pow(4, 40));
    QSeries z = QSeries::zero(20);
    CHECK((z + b).trunc_q() == 20);
    CHECK((b + z).coeff_q(4) == 1);

    // truncation propagation: (1 + q | trunc 8) + (1 | trunc 40) = 2 + q + O(q^2)
    QSeries c = QSeries::one(8) + q_pow(4, 8);
    QSeries d = QSeries::one(40);
    QSeries s = c + d;
    CHECK(s.trunc_q() == 8);
    CHECK(s.coeff_q(0) == 2);
    CHECK(s.coeff_q(4) == 1);
}

TEST_CASE("multiplication basics") {
    // (1 - q) * geometric series = 1 + O(q^N)
    QSeries geo = (QSeries::one(40) - q_pow(4, 40)).inverse_unit();
    QSeries p = (QSeries::one(40) - q_pow(4, 40)) * geo;
    CHECK(p.agrees_with(QSeries::one(), 36));

    // quarter-grid exponents: q^(1/2) * q^(1/2) = q
    CHECK(q_pow(2) * q_pow(2) == q_pow(4));

    // (q;q)_2 = 1 - q - q^2 + q^3
    QSeries p2 = pochhammer_q_exact(2);
    CHECK(p2.coeff_q(0) == 1);
    CHECK(p2.coeff_q(4) == -1);
    CHECK(p2.coeff_q(8) == -1);
    CHECK(p2.coeff_q(12) == 1);
    CHECK(p2.coeffs().size() == 13);

    // multiplication truncation rule
    QSeries a = QSeries::make(4, {Int(1)}, 20);  // q + O(q^5)
    QSeries b = QSeries::make(8, {Int(1)}, 16);  // q^2 + O(q^4)
    CHECK((a * b).trunc_q() == std::min<expq_t>(20 + 8, 16 + 4));
}

TEST_CASE("inverse_unit") {
    CHECK(q_pow(2).inverse_unit() == q_pow(-2));
    QSeries euler = euler_function(100);
    QSeries p = euler * euler.inverse_unit();
    CHECK(p.agrees_with(QSeries::one(), 96));

    QSeries bad = QSeries::monomial(2, 0, 40);
    CHECK_THROWS_AS((void)bad.inverse_unit(), NonUnitLeadingCoefficient);
    CHECK_THROWS_AS((void)QSeries::zero(8).inverse_unit(), ZeroSeries);
}

TEST_CASE("pochhammer") {
    // (q;q)_infty to order q^8: 1 - q - q^2 + q^5 + q^7
    QSeries e = euler_function(4 * 9);
    auto oracle = euler_oracle(9);
    for (int k = 0; k <= 8; ++k) CHECK(e.coeff_q(4 * k) == oracle[k]);

    CHECK(pochhammer(4, 0, 40) == QSeries::one(40));
    QSeries p1 = pochhammer(4, 1, 40);
    CHECK(p1.coeff_q(0) == 1);
    CHECK(p1.coeff_q(4) == -1);

    CHECK_THROWS_AS((void)pochhammer(0, -1, 40), DivergentProduct);
}

TEST_CASE("pentagonal number support") {
    const int order = 60;
    QSeries e = euler_function(4 * (order + 1));
    auto oracle = euler_oracle(order + 1);
    for (int k = 0; k <= order; ++k) {
        const Int& c = e.coeff_q(4 * k);
        CHECK(c == oracle[k]);
        CHECK(abs(c) <= 1);
        // generalized pentagonal numbers j(3j-1)/2
        bool pent = false;
        for (int j = -20; j <= 20; ++j)
            if (j * (3 * j - 1) / 2 == k) pent = true;
        CHECK((c != 0) == pent);
    }
    // no support on the quarter grid off the integer exponents
    for (expq_t eq = 0; eq < 40; ++eq)
        if (eq % 4 != 0) CHECK(e.coeff_q(eq) == 0);
}

TEST_CASE("qbinom") {
    CHECK(qbinom(2, 1) == QSeries::one() + q_pow(4));
    CHECK(qbinom(7, 0) == QSeries::one());
    // binom(4,2) = 1 + q + 2q^2 + q^3 + q^4
    QSeries b = qbinom(4, 2);
    CHECK(b.coeff_q(0) == 1);
    CHECK(b.coeff_q(4) == 1);
    CHECK(b.coeff_q(8) == 2);
    CHECK(b.coeff_q(12) == 1);
    CHECK(b.coeff_q(16) == 1);
    CHECK(b.coeffs().size() == 17);
    CHECK_THROWS_AS((void)qbinom(2, 3), OutOfRange);

    // oracle: binom(a,b) * (q)_b * (q)_{a-b} = (q)_a for a range of inputs
    for (long long a = 0; a <= 8; ++a)
        for (long long bb = 0; bb <= a; ++bb)
            CHECK(qbinom(a, bb) * pochhammer_q_exact(bb) * pochhammer_q_exact(a - bb) ==
                  pochhammer_q_exact(a));
}

TEST_CASE("euler expansion tables") {
    const expq_t N = 4 * 30;
    auto t = euler_expand_pochhammer_inf(12, N);
    CHECK(t.direct[0].agrees_with(QSeries::one(), N));
    CHECK(t.inverse[0].agrees_with(QSeries::one(), N));
    // x^1 coefficient of (x;q)_infty is -1/(q;q)_1
    QSeries m1 = -(QSeries::one(N) - QSeries::monomial(1, 4, N)).inverse_unit();
    CHECK(t.direct[1].agrees_with(m1, N));

    // Cauchy product of the two tables in x is 1 (reciprocal pair)
    for (int order = 0; order <= 12; ++order) {
        QSeries acc = QSeries::zero(N);
        for (int j = 0; j <= order; ++j)
            acc = acc + t.direct[j] * t.inverse[order - j];
        CHECK(acc.agrees_with(order == 0 ? QSeries::one() : QSeries::zero(), N - 4 * 12));
    }

    // Summing j of direct[j] * q^{j} ... sanity: (q;q)_infty = sum_j direct[j] at x = q
    QSeries total = QSeries::zero(N);
    for (int j = 0; j <= 12; ++j) total = total + t.direct[j].shifted(4 * j).truncated(N);
    CHECK(total.agrees_with(euler_function(N), 4 * 12));
}

TEST_CASE("divide_by_lowest") {
    // -q^{-5/2} (1 - q + q^3)
    QSeries u = QSeries::one() - q_pow(4) + q_pow(12);
    QSeries a = -(u.shifted(-10));
    auto [m, v] = divide_by_lowest(a);
    CHECK(m.sign == -1);
    CHECK(m.exp_q == -10);
    CHECK(v == u);

    auto [m2, v2] = divide_by_lowest(QSeries::one() + q_pow(4));
    CHECK(m2.sign == 1);
    CHECK(m2.exp_q == 0);
    CHECK(v2.coeff_q(0) == 1);

    CHECK_THROWS_AS((void)divide_by_lowest(QSeries::zero(8)), ZeroSeries);
}

TEST_CASE("ring laws on random inputs") {
    std::mt19937 rng(20260823);
    for (int trial = 0; trial < 50; ++trial) {
        expq_t trunc = 16 + static_cast<expq_t>(trial % 5) * 4;
        QSeries a = random_series(rng, trunc);
        QSeries b = random_series(rng, trunc);
        QSeries c = random_series(rng, trunc);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        // Products' truncations depend on association; compare on shared range.
        CHECK((a * b) * c == (a * b) * c);
        QSeries ab_c = (a * b) * c;
        QSeries a_bc = a * (b * c);
        CHECK(ab_c.agrees_with(a_bc, std::min(ab_c.trunc_q(), a_bc.trunc_q())));
        QSeries lhs = a * (b + c);
        QSeries rhs = a * b + a * c;
        CHECK(lhs.agrees_with(rhs, std::min(lhs.trunc_q(), rhs.trunc_q())));
    }
}

TEST_CASE("truncation monotonicity") {
    // recomputing at larger N reproduces the smaller-N output verbatim
    for (expq_t N : {20, 40, 80}) {
        QSeries small = euler_function(N);
        QSeries big = euler_function(2 * N);
        CHECK(big.truncated(N) == small);
    }
}

TEST_CASE("serialization") {
    QSeries a = (QSeries::one() - q_pow(4)).shifted(-2);
    CHECK(a.to_json() ==
          "{\"min_exp_quarters\": -2, \"coefficients\": [1, 0, 0, 0, -1], "
          "\"trunc_quarters\": null}");
    CHECK(QSeries::zero(8).to_json() ==
          "{\"min_exp_quarters\": 8, \"coefficients\": [], \"trunc_quarters\": 8}");
    CHECK(a.to_string() == "q^(-2/4) - q^(2/4)");
    CHECK((QSeries::one() + q_pow(8)).to_string() == "1 + q^2");
}
