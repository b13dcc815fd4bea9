#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qtails/errors.hpp"

namespace qtails {

// A reduced alternating knot/link diagram given by its PD code.  Each
// crossing lists the four incident arc ids counterclockwise starting from the
// incoming under-strand.  Arc ids are 1..2c and run consecutively along each
// component, which is what recovers the orientation.
struct LinkDiagram {
    std::vector<std::array<int, 4>> crossings;

    // Derived during validation:
    std::vector<int> over_in_slot; // 1 or 3: which slot carries the incoming over-strand
    std::vector<int> crossing_sign; // +1 / -1

    int num_crossings() const { return static_cast<int>(crossings.size()); }
    int num_arcs() const { return 2 * num_crossings(); }
    int writhe() const;
    int arc_at(int crossing, int slot) const { return crossings[crossing][slot & 3]; }

    std::string to_pd_text() const;
};

// Parses "X a b c d" records (whitespace separated, '#' comments, optional
// "X[a,b,c,d]" bracket style) and validates: arc ids appear exactly twice,
// diagram connected, alternating, reduced, planar rotation system.
LinkDiagram parse_pd(const std::string& text);

// Face structure of the underlying 4-valent plane graph, with the checkerboard
// A/B coloring read off the over/under data at each crossing.  "Corner"
// (x, i) denotes the region wedge between slots i and i+1 at crossing x.
// mirrored = true swaps the two coloring conventions, which computes the
// mirror image knot in every downstream quantity.
struct FaceStructure {
    LinkDiagram diagram;
    bool mirrored = false;
    int n_faces = 0;
    std::vector<int> corner_face;              // [4*x + i] -> face id
    std::vector<std::array<int, 2>> arc_faces; // arc id -> the two adjacent faces
    std::vector<char> color;                   // per face: 'A' or 'B'
    std::vector<int> face_deg;                 // sides (with multiplicity)
    std::vector<int> a_faces, b_faces;

    int face_at(int crossing, int corner) const { return corner_face[4 * crossing + (corner & 3)]; }
};

FaceStructure faces(const LinkDiagram& d, bool mirrored = false);

// Tait graph: one vertex per B-face, one edge per crossing joining the two
// B-corners there.  Vertices are reindexed 0..n-1 in B-face order.
struct TaitGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // unordered pairs, multi-edges allowed
    bool reduced = false;

    std::vector<int> degrees() const;
};

TaitGraph tait_graph(const FaceStructure& f);
TaitGraph reduced_tait(const TaitGraph& t);

// Exact multigraph isomorphism by backtracking with degree pruning.
bool graph_isomorphic(const TaitGraph& g1, const TaitGraph& g2);

// Data of the diagram's Nahm sum over region colorings.  Variables are the
// faces minus the distinguished A-face v_inf (whose variable is pinned to 0);
// all half-integer data is stored doubled.
struct NahmData {
    int n_vars = 0; // = c + 1
    int c = 0;      // crossings
    std::vector<std::vector<long long>> Q2x; // doubled symmetric form
    std::vector<long long> L2;               // doubled linear form
    std::vector<char> var_color;             // 'A'/'B' per variable
    std::vector<int> var_face;               // face id per variable
    std::vector<int> var_deg;                // face degree per variable
    std::vector<char> sign_odd;              // 1 if the variable flips (-1)^{2L}

    // Edge functional per arc: the (at most two) variable indices whose sum is
    // e(lambda); -1 marks v_inf (contributing 0).
    std::vector<std::array<int, 2>> edge_rows;
    // Quadrilateral functional per crossing: the four corner variables.
    std::vector<std::array<int, 4>> poly_rows;
    // Per crossing, the two A-angles as pairs of arc indices (0-based into
    // edge_rows): {e1,f1,e2,f2}.  The quadratic form satisfies
    // Q(lambda) = (1/2) sum over A-angles of e(lambda)*f(lambda), which the
    // enumerator uses as a monotone pruning bound.
    std::vector<std::array<int, 4>> angle_arcs;

    // For each variable, the crossings whose quadrilateral touches it.
    std::vector<std::vector<int>> crossings_at_var;

    int v_inf_face = -1;

    // (Q+L)(lambda), doubled.  lambda indexed by variable.
    long long q_plus_l_2x(const std::vector<int>& lambda) const;
    // e(lambda) for one arc.
    int edge_value(int arc_index, const std::vector<int>& lambda) const;
    int sign_of(const std::vector<int>& lambda) const; // (-1)^{2L(lambda)}

    std::string to_json() const;
};

inline constexpr int AUTO_VINF = -1;

// v_inf must be an A-face id; AUTO picks the A-face of maximal degree
// (smallest id on ties).
NahmData nahm_data(const FaceStructure& f, int v_inf = AUTO_VINF);

} // namespace qtails
