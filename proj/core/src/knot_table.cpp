#include "qtails/knot_table.hpp"

#include <array>
#include <map>
#include <mutex>
#include <sstream>

#include "qtails/errors.hpp"
#include "knots_data.hpp"

namespace qtails {

namespace {

// A 4-valent plane projection under construction.  Each crossing has four
// slots in counterclockwise rotation order with the two transit strands on
// the opposite slot pairs (0,2) and (1,3).  link[x][s] is the dart joined to
// slot s of crossing x.
struct Dart {
    int x = -1;
    int s = -1;
};

struct Projection {
    std::vector<std::array<Dart, 4>> link;

    int add_crossing() {
        link.push_back({});
        return static_cast<int>(link.size()) - 1;
    }
    void connect(Dart a, Dart b) {
        link[a.x][a.s] = b;
        link[b.x][b.s] = a;
    }
};

// Trace the closed curve, number the 2c inter-crossing arcs along it, assign
// alternating over/under by passage parity, and emit the PD text.  Slot
// conventions per crossing (counterclockwise): the passage entering at slot s
// leaves at slot s+2.
std::string emit_pd(const Projection& proj) {
    const int c = static_cast<int>(proj.link.size());
    const int total = 2 * c;
    std::vector<std::array<int, 4>> arc(c, {0, 0, 0, 0});
    std::vector<int> under_slot(c, -1);

    Dart cur{0, 0};
    for (int j = 0; j < total; ++j) {
        int in_arc = j + 1;
        int out_arc = (j + 1 == total) ? 1 : j + 2;
        if (arc[cur.x][cur.s] != 0)
            throw Error("projection trace revisits a dart (not a knot)");
        arc[cur.x][cur.s] = in_arc;
        arc[cur.x][(cur.s + 2) & 3] = out_arc;
        // Passages through a crossing of a plane curve are oppositely
        // intersticed, so even passages can consistently go under.
        if (j % 2 == 0) {
            if (under_slot[cur.x] != -1)
                throw Error("projection does not admit an alternating assignment");
            under_slot[cur.x] = cur.s;
        }
        cur = proj.link[cur.x][(cur.s + 2) & 3];
    }
    if (cur.x != 0 || cur.s != 0)
        throw Error("projection has more than one component");

    std::ostringstream out;
    for (int x = 0; x < c; ++x) {
        if (under_slot[x] < 0) throw Error("crossing missed by the trace");
        int s0 = under_slot[x];
        if (x) out << ' ';
        out << "X[" << arc[x][s0] << ',' << arc[x][(s0 + 1) & 3] << ','
            << arc[x][(s0 + 2) & 3] << ',' << arc[x][(s0 + 3) & 3] << ']';
    }
    return out.str();
}

// Horizontal twist crossing appended on the right of a tangle: slots
// 0 = west-top, 1 = west-bottom, 2 = east-bottom, 3 = east-top.
// Vertical twist crossing appended at the bottom: slots 0 = north-west,
// 1 = south-west, 2 = south-east, 3 = north-east.  Both are the generic
// counterclockwise order with transit pairs (0,2), (1,3).
struct Tangle {
    Projection proj;
    Dart nw, ne, sw, se;
};

Tangle first_horizontal(int) {
    Tangle t;
    int x = t.proj.add_crossing();
    t.nw = {x, 0};
    t.sw = {x, 1};
    t.se = {x, 2};
    t.ne = {x, 3};
    return t;
}

void add_horizontal(Tangle& t) {
    int x = t.proj.add_crossing();
    t.proj.connect(t.ne, {x, 0});
    t.proj.connect(t.se, {x, 1});
    t.se = {x, 2};
    t.ne = {x, 3};
}

void add_vertical(Tangle& t) {
    int x = t.proj.add_crossing();
    t.proj.connect(t.sw, {x, 0});
    t.proj.connect(t.se, {x, 3});
    t.sw = {x, 1};
    t.se = {x, 2};
}

std::string normalize_writhe(const std::string& pd, int writhe_target) {
    LinkDiagram d = parse_pd(pd);
    if (d.writhe() == writhe_target) return d.to_pd_text();
    std::string m = mirror_pd(pd);
    LinkDiagram dm = parse_pd(m);
    if (dm.writhe() == writhe_target) return dm.to_pd_text();
    throw Error("constructed diagram has writhe " + std::to_string(d.writhe()) +
                ", neither mirror matches target " + std::to_string(writhe_target));
}

} // namespace

std::string mirror_pd(const std::string& pd_text) {
    LinkDiagram d = parse_pd(pd_text);
    std::ostringstream out;
    for (std::size_t x = 0; x < d.crossings.size(); ++x) {
        if (x) out << ' ';
        const auto& t = d.crossings[x];
        // reflect the plane: rotation order reverses, incoming under stays first
        out << "X[" << t[0] << ',' << t[3] << ',' << t[2] << ',' << t[1] << ']';
    }
    return out.str();
}

std::string rational_pd(const std::vector<int>& cf, int writhe_target) {
    if (cf.empty()) throw Error("empty continued fraction");
    for (int a : cf)
        if (a < 1) throw Error("continued fraction entries must be positive");
    Tangle t = first_horizontal(0);
    for (std::size_t i = 0; i < cf.size(); ++i) {
        int count = cf[i] - (i == 0 ? 1 : 0);
        for (int j = 0; j < count; ++j)
            (i % 2 == 0) ? add_horizontal(t) : add_vertical(t);
    }
    if (cf.size() % 2 == 1) {
        // last twist run horizontal: numerator closure
        t.proj.connect(t.nw, t.ne);
        t.proj.connect(t.sw, t.se);
    } else {
        // last twist run vertical: denominator closure
        t.proj.connect(t.nw, t.sw);
        t.proj.connect(t.ne, t.se);
    }
    return normalize_writhe(emit_pd(t.proj), writhe_target);
}

std::string pretzel_pd(const std::vector<int>& twists, int writhe_target) {
    if (twists.size() < 2) throw Error("pretzel needs at least two columns");
    for (int p : twists)
        if (p < 1) throw Error("pretzel twist counts must be positive");
    Projection proj;
    // column i: twists[i] vertically chained crossings
    std::vector<Dart> tl, tr, bl, br;
    for (int p : twists) {
        int first = -1, last = -1;
        for (int j = 0; j < p; ++j) {
            int x = proj.add_crossing();
            if (j == 0) first = x;
            else {
                proj.connect({x - 1, 1}, {x, 0});
                proj.connect({x - 1, 2}, {x, 3});
            }
            last = x;
        }
        tl.push_back({first, 0});
        tr.push_back({first, 3});
        bl.push_back({last, 1});
        br.push_back({last, 2});
    }
    const int k = static_cast<int>(twists.size());
    for (int i = 0; i + 1 < k; ++i) {
        proj.connect(tr[i], tl[i + 1]);
        proj.connect(br[i], bl[i + 1]);
    }
    proj.connect(tl[0], tr[k - 1]);
    proj.connect(bl[0], br[k - 1]);
    return normalize_writhe(emit_pd(proj), writhe_target);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) out.push_back(std::stoi(trim(tok)));
    return out;
}

std::vector<KnotRecord> load_table() {
    std::vector<KnotRecord> table;
    std::istringstream in(KNOTS_TXT);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> cols;
        std::string col;
        std::istringstream ls(t);
        while (std::getline(ls, col, '|')) cols.push_back(trim(col));
        if (cols.size() != 9) throw ParseError("knot table row needs 9 columns: " + t);
        KnotRecord r;
        r.name = cols[0];
        r.construction = cols[1];
        r.braid = cols[2];
        r.c_minus = std::stoi(cols[3]);
        r.c_plus = std::stoi(cols[4]);
        r.signature = std::stoi(cols[5]);
        r.tail_expr = cols[6];
        r.head_expr = cols[7];
        r.proven = cols[8] == "proven";
        int target = r.c_plus - r.c_minus;
        std::istringstream cs(r.construction);
        std::string kind, args;
        cs >> kind >> args;
        if (kind == "cf") r.pd = rational_pd(parse_int_list(args), target);
        else if (kind == "pretzel") r.pd = pretzel_pd(parse_int_list(args), target);
        else throw ParseError("unknown construction: " + r.construction);
        table.push_back(std::move(r));
    }
    return table;
}

} // namespace

const std::vector<KnotRecord>& knot_table() {
    static const std::vector<KnotRecord> table = load_table();
    return table;
}

const KnotRecord& knot_lookup(const std::string& name) {
    static const std::map<std::string, std::string> aliases = {
        {"K-1", "4_1"}, {"K2", "5_2"}, {"K-2", "6_1"}, {"K3", "7_2"},
        {"K-3", "8_1"}, {"K4", "9_2"}, {"K-4", "10_1"},
    };
    std::string key = name;
    auto it = aliases.find(key);
    if (it != aliases.end()) key = it->second;
    for (const auto& r : knot_table())
        if (r.name == key) return r;
    throw UnknownKnot("no table entry for knot " + name);
}

} // namespace qtails
