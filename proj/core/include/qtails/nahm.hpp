#pragma once

#include <functional>
#include <vector>

#include "qtails/diagram.hpp"
#include "qtails/qseries.hpp"

namespace qtails {

// One admissible lattice point of the region-coloring cone.
struct ConePoint {
    std::vector<int> lambda;      // variable values (v_inf pinned to 0)
    long long q2_value = 0;       // (Q+L)(lambda), an integer
    std::vector<int> edge_values; // e(lambda) per arc
    int sign = 1;                 // (-1)^{2L(lambda)}
};

struct EnumOptions {
    long long max_points = 100000000; // safety cap on emitted points
    int threads = 1;
    // Optional per-arc upper bound on e(lambda); empty means "the degree
    // bound".  Used to carve out the faces-vanish-near-a-polygon subcones.
    std::vector<int> edge_upper;
};

// Yields every admissible lambda with Q(lambda)+L(lambda) <= N exactly once,
// in depth-first lexicographic order along a breadth-first variable order
// rooted at v_inf.  Throws BoundTooLarge past opts.max_points.
void enumerate_adm(const NahmData& nd, long long N,
                   const std::function<void(const ConePoint&)>& emit,
                   const EnumOptions& opts = {});
std::vector<ConePoint> enumerate_adm_collect(const NahmData& nd, long long N,
                                             const EnumOptions& opts = {});

// The stable tail: (1-q) (q;q)_inf^c * sum over Adm of
// (-1)^{2L} q^{Q+L} / prod_e (q;q)_{e(lambda)}, truncated at order N (integer
// q-powers; the returned QSeries uses the quarter grid).  The (1-q) factor
// normalizes the unknot tail to 1.
QSeries phi0(const NahmData& nd, long long N, const EnumOptions& opts = {});

// The stable 1-limit in the same normalization: the tail plus the first
// correction term, so that phi1 - phi0 = O(q) captures the next stable row.
QSeries phi1(const NahmData& nd, long long N, const EnumOptions& opts = {});

// Points enumerated by the most recent phi0/phi1 call are reported through
// this struct when requested explicitly.
struct NahmRunStats {
    long long points = 0;
    bool used_bigint = false;
};
QSeries phi0(const NahmData& nd, long long N, const EnumOptions& opts, NahmRunStats& stats);
QSeries phi1(const NahmData& nd, long long N, const EnumOptions& opts, NahmRunStats& stats);

// A generalized Nahm sum sum_{n in C cap N^r} (-1)^{a.n} q^{n^T A n/2 + b.n}
// / prod_i (q;q)_{n_i}.  A and b may be half-integral and are stored doubled.
struct GenericNahmSpec {
    int r = 0;
    std::vector<std::vector<long long>> A2; // doubled symmetric matrix
    std::vector<long long> b2;              // doubled linear form
    std::vector<int> a;                     // sign vector (mod 2 matters)
    // Additional cone rows: row . n >= 0.  Nonnegativity of every coordinate
    // is implicit.
    std::vector<std::vector<long long>> cone;
    long long N = 50;
};

QSeries generic_nahm(const GenericNahmSpec& spec, const EnumOptions& opts = {});

// Change of variables from region colorings to edge states: the resulting
// generic spec sums over centered edge assignments and reproduces the bare
// admissible sum, i.e. phi0 / ((1-q) (q;q)_inf^c).
GenericNahmSpec nahm_to_generic(const NahmData& nd, long long N);

// Centered-state enumeration: edge values in [0, N] satisfying the opposite-
// pair balance at every crossing, pulled back to lambda space.  Oracle-scale.
std::vector<std::vector<int>> centered_state_oracle(const NahmData& nd, int N);

// Empirical regularity scan: the largest c with degree >= c * |edge
// values|_2 over the supplied points.  c is reported through its exact
// signed square as a fraction string.
struct RegularityReport {
    bool flagged = false;       // true iff some nonzero point has degree <= 0
    std::string c_squared;      // "p/q", sign = sign of the worst degree
    long long worst_degree = 0; // degree of the minimizing point
};
RegularityReport regularity_guard(const std::vector<ConePoint>& points);

} // namespace qtails
