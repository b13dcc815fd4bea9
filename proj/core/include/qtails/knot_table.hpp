#pragma once

#include <string>
#include <vector>

#include "qtails/diagram.hpp"

namespace qtails {

// One row of the built-in knot table.  The PD is an alternating diagram whose
// writhe equals c_plus - c_minus, so the chirality of the stored diagram
// matches the listed (c_minus, c_plus, signature).  tail_expr / head_expr are
// product expressions over the theta-type series ("h3", "hs4^2", "h3*hs4",
// "1"), empty when no closed form is known.  tail_expr describes
// phi0(nahm_data(faces(pd))) and head_expr the mirrored coloring.
struct KnotRecord {
    std::string name;
    std::string construction; // "cf a1,a2,..." or "pretzel p1,p2,..."
    std::string pd;
    std::string braid;        // "w:<width> i1 i2 ..." or empty
    int c_minus = 0;
    int c_plus = 0;
    int signature = 0;
    std::string tail_expr;
    std::string head_expr;
    bool proven = false;      // stable-series identity proven vs conjectural
};

// The shipped table (see data/knots.txt).  PDs are rebuilt deterministically
// from the recorded constructions on first use.
const std::vector<KnotRecord>& knot_table();

// Lookup by name; twist-knot aliases ("K2" for "5_2", "K-1" for "4_1", ...)
// are accepted.  Throws UnknownKnot.
const KnotRecord& knot_lookup(const std::string& name);

// Alternating diagram of the 2-bridge knot with positive continued fraction
// [a1, a2, ...]; the result is mirrored if necessary so that its writhe
// equals writhe_target.  Throws Error if the construction does not produce a
// knot diagram of that writhe (|writhe| must match).
std::string rational_pd(const std::vector<int>& cf, int writhe_target);

// Alternating pretzel diagram with the given positive twist counts,
// writhe-normalized the same way.
std::string pretzel_pd(const std::vector<int>& twists, int writhe_target);

// Reflect a diagram across a line in the plane: reverses every rotation
// tuple, negating all crossing signs.
std::string mirror_pd(const std::string& pd_text);

} // namespace qtails
