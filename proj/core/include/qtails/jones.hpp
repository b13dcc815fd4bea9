#pragma once

#include <string>
#include <vector>

#include "qtails/diagram.hpp"
#include "qtails/qseries.hpp"

namespace qtails {

// A braid on `width` strands; letter +-i is the i-th elementary crossing
// (1 <= i < width) with positive or negative sign.
struct BraidWord {
    int width = 1;
    std::vector<int> word;
};

// Text format: "w:<width> i1 i2 ...".
BraidWord parse_braid(const std::string& text);
std::string braid_to_text(const BraidWord& b);

// Local crossing weights for color n: the weight of a downward crossing with
// incoming colors (a, b), outgoing colors (c, d), a + b = c + d.  Inadmissible
// tuples give the zero series.  Exact Laurent polynomials on the half grid.
class CrossingWeightTable {
public:
    explicit CrossingWeightTable(int n);
    int n() const { return n_; }
    const QSeries& weight(int sign, int a, int b, int c, int d) const;

private:
    int n_;
    std::vector<QSeries> pos_, neg_;
    QSeries zero_;
};

inline CrossingWeightTable crossing_weights(int n) { return CrossingWeightTable(n); }

// Colored Jones polynomial of the closure of the braid, colored by the
// (n+1)-dimensional representation; exact Laurent polynomial, unknot = [n+1].
// Cost grows like (n+1)^(width+1) per letter times the number of live frontier
// states; intended for width <= 5, n <= 10.
QSeries jones_braid(const BraidWord& b, long long n);

// The quantum integer [n+1] = (q^((n+1)/2) - q^(-(n+1)/2)) / (q^(1/2) - q^(-1/2)).
QSeries quantum_integer(long long m);

// Splits off the lowest monomial; the unit part must have constant term +1
// and only integer powers of q (alternating-link normalization).
struct HatJones {
    QMonomial lowest;
    QSeries unit;
};
HatJones hat_jones(const QSeries& j);

// True iff the minimum degree of j equals -(n^2+n)/2 c_minus - n/2 (sigma+1).
bool min_degree_check(const QSeries& j, int c_minus, int sigma, long long n);

// Independent n = 1 oracle: colored Jones at n = 1 computed from the Kauffman
// bracket of the diagram (2^c state expansion).
QSeries kauffman_jones(const LinkDiagram& d);

// Knot determinant |V(-1)| from the Kauffman bracket.
long long determinant(const LinkDiagram& d);

} // namespace qtails
