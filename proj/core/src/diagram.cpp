#include "qtails/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace qtails {

int LinkDiagram::writhe() const {
    return std::accumulate(crossing_sign.begin(), crossing_sign.end(), 0);
}

std::string LinkDiagram::to_pd_text() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        if (i) out << " ";
        out << "X[" << crossings[i][0] << "," << crossings[i][1] << ","
            << crossings[i][2] << "," << crossings[i][3] << "]";
    }
    return out.str();
}

namespace {

// Union-find over crossings, used for the connectivity check.
struct DSU {
    std::vector<int> p;
    explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) { return p[a] == a ? a : p[a] = find(p[a]); }
    void join(int a, int b) { p[find(a)] = find(b); }
};

// Face orbits of the rotation system: darts are (crossing, slot) pairs, the
// face permutation is dart -> rotate(other end of the arc).  Returns the face
// id per dart and the face count.
std::pair<std::vector<int>, int> face_orbits(const LinkDiagram& d) {
    const int c = d.num_crossings();
    std::vector<std::array<int, 2>> ends(d.num_arcs() + 1, {-1, -1});
    for (int x = 0; x < c; ++x)
        for (int s = 0; s < 4; ++s) {
            int a = d.crossings[x][s];
            if (ends[a][0] < 0) ends[a][0] = 4 * x + s;
            else ends[a][1] = 4 * x + s;
        }
    auto theta = [&](int dart) {
        int a = d.crossings[dart / 4][dart % 4];
        return ends[a][0] == dart ? ends[a][1] : ends[a][0];
    };
    std::vector<int> face(4 * c, -1);
    int nf = 0;
    for (int start = 0; start < 4 * c; ++start) {
        if (face[start] >= 0) continue;
        int dart = start;
        while (face[dart] < 0) {
            face[dart] = nf;
            int t = theta(dart);
            dart = (t & ~3) | ((t + 1) & 3);
        }
        ++nf;
    }
    return {std::move(face), nf};
}

} // namespace

LinkDiagram parse_pd(const std::string& text) {
    // Tokenize; accept "X a b c d" and "X[a,b,c,d]", '#' comments to EOL.
    std::string clean;
    clean.reserve(text.size());
    bool comment = false;
    for (char ch : text) {
        if (ch == '#') comment = true;
        if (ch == '\n') comment = false;
        if (comment) continue;
        if (ch == '[' || ch == ']' || ch == ',' || ch == ';') clean += ' ';
        else clean += ch;
    }
    std::istringstream in(clean);
    LinkDiagram d;
    std::string tok;
    while (in >> tok) {
        if (tok != "X" && tok != "x")
            throw ParseError("expected crossing record 'X', got '" + tok + "'");
        std::array<int, 4> rec{};
        for (int i = 0; i < 4; ++i) {
            if (!(in >> rec[i]) || rec[i] <= 0)
                throw ParseError("crossing record needs four positive arc ids");
        }
        d.crossings.push_back(rec);
    }
    const int c = d.num_crossings();
    if (c == 0) throw ParseError("empty PD code");
    const int na = 2 * c;

    // Every arc id in 1..2c, each exactly twice.
    std::vector<int> count(na + 1, 0);
    for (auto& rec : d.crossings)
        for (int a : rec) {
            if (a > na)
                throw ParseError("arc id " + std::to_string(a) + " out of range 1.." +
                                 std::to_string(na));
            ++count[a];
        }
    for (int a = 1; a <= na; ++a)
        if (count[a] != 2)
            throw ParseError("arc id " + std::to_string(a) + " appears " +
                             std::to_string(count[a]) + " times (want 2)");

    // Orientation of the over-strand from consecutive arc numbering.  Only
    // single-component (knot) PDs are accepted; the traversal check below
    // enforces this.
    d.over_in_slot.resize(c);
    d.crossing_sign.resize(c);
    auto succ = [na](int a) { return a % na + 1; };
    for (int x = 0; x < c; ++x) {
        int b = d.crossings[x][1], dd = d.crossings[x][3];
        bool d_in = succ(dd) == b; // over-strand runs slot 3 -> slot 1
        bool b_in = succ(b) == dd; // over-strand runs slot 1 -> slot 3
        if (d_in == b_in)
            throw ParseError("cannot orient over-strand at crossing " + std::to_string(x) +
                             " from arc numbering");
        d.over_in_slot[x] = d_in ? 3 : 1;
        // Under-strand direction is slot0 -> slot2, i.e. the outgoing unit
        // vector e2.  Over out-slot s gives outgoing vector e_{(s+2)&3}; the
        // crossing is positive when (over, under) is a counterclockwise frame,
        // which happens for over direction e1 (out-slot 1 <=> incoming slot 3).
        d.crossing_sign[x] = d_in ? +1 : -1;
        // Under-strand continuation must also respect the numbering.
        if (succ(d.crossings[x][0]) != d.crossings[x][2])
            throw ParseError("under-strand numbering broken at crossing " +
                             std::to_string(x));
    }

    // Connectivity of the 4-valent graph.
    {
        DSU dsu(c);
        std::vector<int> seen(na + 1, -1);
        for (int x = 0; x < c; ++x)
            for (int a : d.crossings[x]) {
                if (seen[a] >= 0) dsu.join(seen[a], x);
                seen[a] = x;
            }
        for (int x = 1; x < c; ++x)
            if (dsu.find(x) != dsu.find(0))
                throw NotConnected("diagram is split (disconnected plane graph)");
    }

    // Planarity of the rotation system via Euler's formula.
    auto [dart_face, nf] = face_orbits(d);
    if (nf != c + 2)
        throw ParseError("rotation system is not planar: " + std::to_string(nf) +
                         " faces, expected " + std::to_string(c + 2));

    // Reduced: no face may occupy two opposite corners of one crossing
    // (nugatory crossing).  Corner (x,i) lies in the face of dart (x,i+1).
    auto corner = [&](int x, int i) { return dart_face[4 * x + ((i + 1) & 3)]; };
    for (int x = 0; x < c; ++x)
        if (corner(x, 0) == corner(x, 2) || corner(x, 1) == corner(x, 3))
            throw NotReduced("nugatory crossing " + std::to_string(x));

    // Alternation: the corner coloring must be globally consistent; delegate
    // to faces() so there is a single implementation.
    try {
        faces(d);
    } catch (const ColoringInconsistent& e) {
        throw NotAlternating(e.what());
    }
    return d;
}

FaceStructure faces(const LinkDiagram& d, bool mirrored) {
    FaceStructure f;
    f.diagram = d;
    f.mirrored = mirrored;
    const int c = d.num_crossings();
    auto [dart_face, nf] = face_orbits(d);
    f.n_faces = nf;

    f.corner_face.assign(4 * c, -1);
    for (int x = 0; x < c; ++x)
        for (int i = 0; i < 4; ++i)
            f.corner_face[4 * x + i] = dart_face[4 * x + ((i + 1) & 3)];

    f.face_deg.assign(nf, 0);
    for (int v : f.corner_face) ++f.face_deg[v];

    f.arc_faces.assign(d.num_arcs() + 1, {-1, -1});
    for (int x = 0; x < c; ++x)
        for (int s = 0; s < 4; ++s) {
            // Arc at slot s borders the corners (x, s-1) and (x, s).
            int a = d.crossings[x][s];
            int f1 = f.face_at(x, s), f2 = f.face_at(x, (s + 3) & 3);
            f.arc_faces[a] = {std::min(f1, f2), std::max(f1, f2)};
        }

    // Checkerboard colors: at every crossing the two regions swept by
    // rotating the over-strand counterclockwise onto the under-strand are the
    // A-regions; with slot 0 = incoming under these are the odd corners.
    // The mirrored flag swaps the two classes, selecting the other stable
    // limit of the diagram.
    f.color.assign(nf, 0);
    int odd_color = mirrored ? 'B' : 'A';
    int even_color = mirrored ? 'A' : 'B';
    for (int x = 0; x < c; ++x)
        for (int i = 0; i < 4; ++i) {
            char want = static_cast<char>((i & 1) ? odd_color : even_color);
            char& have = f.color[f.face_at(x, i)];
            if (have == 0) have = want;
            else if (have != want)
                throw ColoringInconsistent("face " + std::to_string(f.face_at(x, i)) +
                                           " receives both colors (diagram not alternating)");
        }
    for (int v = 0; v < nf; ++v)
        (f.color[v] == 'A' ? f.a_faces : f.b_faces).push_back(v);
    return f;
}

TaitGraph tait_graph(const FaceStructure& f) {
    TaitGraph t;
    std::vector<int> index(f.n_faces, -1);
    for (int v : f.b_faces) index[v] = t.n++;
    const int c = f.diagram.num_crossings();
    int b0 = f.mirrored ? 1 : 0; // B-corners are the even corners by default
    for (int x = 0; x < c; ++x) {
        int u = index[f.face_at(x, b0)], v = index[f.face_at(x, b0 + 2)];
        t.edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    return t;
}

TaitGraph reduced_tait(const TaitGraph& t) {
    TaitGraph r;
    r.n = t.n;
    r.reduced = true;
    std::vector<std::pair<int, int>> e = t.edges;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    r.edges = std::move(e);
    return r;
}

std::vector<int> TaitGraph::degrees() const {
    std::vector<int> deg(n, 0);
    for (auto& [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

namespace {

using AdjMatrix = std::vector<std::vector<int>>;

AdjMatrix adjacency(const TaitGraph& g) {
    AdjMatrix m(g.n, std::vector<int>(g.n, 0));
    for (auto& [u, v] : g.edges) {
        ++m[u][v];
        if (u != v) ++m[v][u];
    }
    return m;
}

bool iso_backtrack(const AdjMatrix& a, const AdjMatrix& b, const std::vector<int>& da,
                   const std::vector<int>& db, std::vector<int>& map,
                   std::vector<char>& used, std::size_t next) {
    if (next == map.size()) return true;
    for (int cand = 0; cand < static_cast<int>(map.size()); ++cand) {
        if (used[cand] || da[next] != db[cand]) continue;
        bool ok = true;
        for (std::size_t prev = 0; prev < next && ok; ++prev)
            if (a[next][prev] != b[cand][map[prev]]) ok = false;
        if (a[next][next] != b[cand][cand]) ok = false;
        if (!ok) continue;
        map[next] = cand;
        used[cand] = 1;
        if (iso_backtrack(a, b, da, db, map, used, next + 1)) return true;
        used[cand] = 0;
    }
    return false;
}

} // namespace

bool graph_isomorphic(const TaitGraph& g1, const TaitGraph& g2) {
    if (g1.n > 32 || g2.n > 32) throw TooLarge("graph isomorphism limited to 32 vertices");
    if (g1.n != g2.n || g1.edges.size() != g2.edges.size()) return false;
    std::vector<int> d1 = g1.degrees(), d2 = g2.degrees();
    std::vector<int> s1 = d1, s2 = d2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return false;
    AdjMatrix a = adjacency(g1), b = adjacency(g2);
    std::vector<int> map(static_cast<std::size_t>(g1.n), -1);
    std::vector<char> used(static_cast<std::size_t>(g1.n), 0);
    return iso_backtrack(a, b, d1, d2, map, used, 0);
}

NahmData nahm_data(const FaceStructure& f, int v_inf) {
    NahmData nd;
    const int c = f.diagram.num_crossings();
    nd.c = c;

    if (v_inf == AUTO_VINF) {
        int best = -1;
        for (int v : f.a_faces)
            if (best < 0 || f.face_deg[v] > f.face_deg[best]) best = v;
        v_inf = best;
    }
    if (v_inf < 0 || v_inf >= f.n_faces || f.color[v_inf] != 'A')
        throw VInfNotAFace("v_inf must be an A-face id");
    nd.v_inf_face = v_inf;

    // Variable order: faces in ascending id, skipping v_inf.
    std::vector<int> var_of_face(f.n_faces, -1);
    for (int v = 0; v < f.n_faces; ++v) {
        if (v == v_inf) continue;
        var_of_face[v] = nd.n_vars++;
        nd.var_face.push_back(v);
        nd.var_color.push_back(f.color[v]);
        nd.var_deg.push_back(f.face_deg[v]);
    }

    // Doubled symmetric form 2*(Deg + Adj of the dual graph + the Tait-graph
    // Laplacian-like term), restricted to the variables.  The net blocks: AA
    // diagonal = side counts, AB = arc adjacency counts, BB off-diagonal =
    // common crossing counts, BB diagonal = 0.
    nd.Q2x.assign(nd.n_vars, std::vector<long long>(nd.n_vars, 0));
    auto add2 = [&](int face_u, int face_v, long long val) {
        int iu = var_of_face[face_u], iv = var_of_face[face_v];
        if (iu < 0 || iv < 0) return;
        nd.Q2x[iu][iv] += val;
        if (iu != iv) nd.Q2x[iv][iu] += val;
    };
    for (int i = 0; i < nd.n_vars; ++i) {
        int v = nd.var_face[i];
        if (f.color[v] == 'A') nd.Q2x[i][i] = 2LL * f.face_deg[v];
    }
    for (int a = 1; a <= f.diagram.num_arcs(); ++a)
        add2(f.arc_faces[a][0], f.arc_faces[a][1], 2); // dual-graph adjacency
    int b0 = f.mirrored ? 1 : 0;
    for (int x = 0; x < c; ++x) {
        int u = f.face_at(x, b0), v = f.face_at(x, b0 + 2);
        add2(u, v, 2); // Tait-graph adjacency between the two B-corners
    }

    // Doubled linear form: 2 on B-faces, deg - 2 on A-faces.
    nd.L2.resize(nd.n_vars);
    nd.sign_odd.resize(nd.n_vars);
    for (int i = 0; i < nd.n_vars; ++i) {
        if (nd.var_color[i] == 'B') {
            nd.L2[i] = 2;
            nd.sign_odd[i] = 0;
        } else {
            nd.L2[i] = nd.var_deg[i] - 2;
            nd.sign_odd[i] = static_cast<char>(nd.var_deg[i] & 1);
        }
    }

    nd.edge_rows.resize(f.diagram.num_arcs());
    for (int a = 1; a <= f.diagram.num_arcs(); ++a)
        nd.edge_rows[a - 1] = {var_of_face[f.arc_faces[a][0]],
                               var_of_face[f.arc_faces[a][1]]};

    nd.poly_rows.resize(c);
    nd.angle_arcs.resize(c);
    for (int x = 0; x < c; ++x) {
        for (int i = 0; i < 4; ++i)
            nd.poly_rows[x][i] = var_of_face[f.face_at(x, i)];
        // A-corners are (x, a0) and (x, a0+2); the angle at corner (x,i) is
        // flanked by the arcs at slots i and i+1.
        int a0 = f.mirrored ? 0 : 1;
        nd.angle_arcs[x] = {f.diagram.arc_at(x, a0) - 1, f.diagram.arc_at(x, a0 + 1) - 1,
                            f.diagram.arc_at(x, a0 + 2) - 1, f.diagram.arc_at(x, a0 + 3) - 1};
    }

    nd.crossings_at_var.assign(nd.n_vars, {});
    for (int x = 0; x < c; ++x)
        for (int i = 0; i < 4; ++i) {
            int var = nd.poly_rows[x][i];
            if (var >= 0) nd.crossings_at_var[var].push_back(x);
        }
    return nd;
}

long long NahmData::q_plus_l_2x(const std::vector<int>& lambda) const {
    long long quad = 0;
    for (int i = 0; i < n_vars; ++i) {
        if (lambda[i] == 0) continue;
        long long row = 0;
        for (int j = 0; j < n_vars; ++j) row += Q2x[i][j] * lambda[j];
        quad += row * lambda[i];
    }
    // quad = lambda^T (2Q) lambda = 4*Q(lambda); result is 2*(Q+L).
    long long lin = 0;
    for (int i = 0; i < n_vars; ++i) lin += L2[i] * lambda[i];
    return quad / 2 + lin;
}

int NahmData::edge_value(int arc_index, const std::vector<int>& lambda) const {
    int v = 0;
    for (int k : edge_rows[arc_index])
        if (k >= 0) v += lambda[k];
    return v;
}

int NahmData::sign_of(const std::vector<int>& lambda) const {
    int parity = 0;
    for (int i = 0; i < n_vars; ++i)
        if (sign_odd[i]) parity ^= lambda[i] & 1;
    return parity ? -1 : 1;
}

std::string NahmData::to_json() const {
    std::ostringstream out;
    out << "{\"n_vars\": " << n_vars << ", \"matrix_2x\": [";
    for (int i = 0; i < n_vars; ++i) {
        if (i) out << ", ";
        out << "[";
        for (int j = 0; j < n_vars; ++j) {
            if (j) out << ", ";
            out << Q2x[i][j];
        }
        out << "]";
    }
    out << "], \"l_2x\": [";
    for (int i = 0; i < n_vars; ++i) {
        if (i) out << ", ";
        out << L2[i];
    }
    out << "], \"edges\": [";
    for (std::size_t a = 0; a < edge_rows.size(); ++a) {
        if (a) out << ", ";
        out << "[" << edge_rows[a][0] << ", " << edge_rows[a][1] << "]";
    }
    out << "], \"polygons\": [";
    for (std::size_t x = 0; x < poly_rows.size(); ++x) {
        if (x) out << ", ";
        out << "[" << poly_rows[x][0] << ", " << poly_rows[x][1] << ", " << poly_rows[x][2]
            << ", " << poly_rows[x][3] << "]";
    }
    out << "]}";
    return out.str();
}

} // namespace qtails
