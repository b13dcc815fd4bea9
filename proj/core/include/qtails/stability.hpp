#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtails/jones.hpp"
#include "qtails/qseries.hpp"

namespace qtails {

// Reduced colored Jones of the braid closure: jones_braid divided by [n+1]
// and by its lowest monomial, truncated at N_q quarter-units.  For an
// alternating knot this is a power series in q with constant term 1 whose
// low coefficients stabilize as n grows.
QSeries reduced_hat_jones(const BraidWord& b, long long n, expq_t N_q);

// n -> reduced_hat_jones(b, n, N_q) for 0 <= n <= n_max.
std::map<long long, QSeries> hat_jones_sequence(const BraidWord& b, long long n_max,
                                                expq_t N_q);

// Default largest color for the stability sweeps: 8 for small diagrams, 6
// once the state sum gets expensive.
long long default_n_max(int crossings);

struct StabilityReport {
    int k = 0;
    std::vector<QSeries> phi_hat;               // the limit series tested against
    std::vector<long long> residual_valuations; // per n, q-units, after the
                                                // q^{-k(n+1)} shift
    bool pass = false;
    // Informational fit (C, C') of the lower bound
    // valuation >= n + 1 - C (k+1)^2 - C'; C is pinned to 0 since a single k
    // cannot separate the two constants.
    std::optional<std::pair<double, double>> rate_constants;

    std::string to_json() const;
};

// Reads the limit series Phi_0..Phi_k off the sequence: the q^m coefficient
// of the j-th shifted residual (f_n - sum_{i<j} Phi_i q^{i(n+1)}) q^{-j(n+1)}
// is independent of n for n > m, so it is taken from the smallest admissible
// color and cross-checked against the next one.  Coefficients are extracted
// at least through q^N (each series keeps its full certified truncation);
// disagreement or insufficient data throws NotStabilized.
// Series in `known` are trusted as the exact first limits and not
// re-extracted; this extends the certifiable range of the later ones, whose
// witnesses must otherwise fit inside the truncation of the earlier
// empirical series.
std::vector<QSeries> empirical_phi(const std::map<long long, QSeries>& seq, int k,
                                   long long N,
                                   const std::vector<QSeries>& known = {});

// Checks the exact congruence f_n - phi0 in q^{n+1} Z[[q]] for every
// n <= n_max present in the sequence.  residual_valuations holds the raw
// valuation of f_n - phi0; pass requires valuation >= n + 1 throughout.
StabilityReport verify_0stability(const QSeries& phi0,
                                  const std::map<long long, QSeries>& seq,
                                  long long n_max);

// Checks that the shifted residual q^{-k(n+1)} (f_n - sum_{j<=k} Phi_j
// q^{j(n+1)}) has valuation >= n + 1 for every k <= n <= n_max (colors below
// k are degenerate and skipped).  phis must hold k+1 series; k = 0 imposes
// the same condition as verify_0stability.
StabilityReport verify_kstability(const std::vector<QSeries>& phis,
                                  const std::map<long long, QSeries>& seq,
                                  long long n_max, int k);

} // namespace qtails
