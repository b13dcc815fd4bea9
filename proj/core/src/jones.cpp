#include "qtails/jones.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "qtails/errors.hpp"

namespace qtails {

BraidWord parse_braid(const std::string& text) {
    std::istringstream in(text);
    std::string head;
    if (!(in >> head) || head.rfind("w:", 0) != 0)
        throw ParseError("braid text must start with w:<width>");
    BraidWord b;
    try {
        b.width = std::stoi(head.substr(2));
    } catch (const std::exception&) {
        throw ParseError("bad braid width in " + head);
    }
    if (b.width < 1) throw ParseError("braid width must be >= 1");
    long long x;
    while (in >> x) {
        if (x == 0 || std::abs(x) >= b.width)
            throw WidthMismatch("braid letter " + std::to_string(x) +
                                " out of range for width " + std::to_string(b.width));
        b.word.push_back(static_cast<int>(x));
    }
    if (!in.eof()) throw ParseError("trailing junk in braid text");
    return b;
}

std::string braid_to_text(const BraidWord& b) {
    std::ostringstream out;
    out << "w:" << b.width;
    for (int x : b.word) out << ' ' << x;
    return out.str();
}

QSeries quantum_integer(long long m) {
    if (m < 0) throw OutOfRange("quantum integer of negative argument");
    std::vector<Int> coeffs;
    for (long long a = 0; a < m; ++a) {
        coeffs.push_back(1);
        if (a + 1 < m) coeffs.insert(coeffs.end(), 3, 0);
    }
    // [m] = sum_a q^{(2a-(m-1))/2}: quarter exponents -2(m-1), ..., 2(m-1)
    return QSeries::make(-2 * (m - 1), std::move(coeffs), EXACT_TRUNC);
}

// ---------------------------------------------------------------------------
// Crossing weights.  Incoming colors (a, b) = (left, right) above the
// crossing, outgoing (c, d) = (left, right) below it, a + b = c + d.
// ---------------------------------------------------------------------------

CrossingWeightTable::CrossingWeightTable(int n) : n_(n), zero_(QSeries::zero()) {
    if (n < 0) throw OutOfRange("negative color");
    const int m = n + 1;
    pos_.assign(static_cast<std::size_t>(m) * m * m, QSeries::zero());
    neg_.assign(static_cast<std::size_t>(m) * m * m, QSeries::zero());
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b)
            for (int c = 0; c <= n; ++c) {
                int d = a + b - c;
                if (d < 0 || d > n) continue;
                std::size_t idx = (static_cast<std::size_t>(a) * m + b) * m + c;
                if (c >= b) {
                    // positive crossing, admissible when c - b = a - d >= 0
                    QSeries w = pochhammer_q_exact(c - b) * qbinom(n - d, a - d) *
                                qbinom(c, c - b);
                    QMonomial lt{1, 2LL * (n + n * d + n * b - a * b - d * c)};
                    pos_[idx] = w * lt;
                }
                if (b >= c) {
                    // negative crossing, admissible when b - c = d - a >= 0
                    QSeries w = pochhammer_q_exact(b - c) * qbinom(n - c, b - c) *
                                qbinom(d, d - a);
                    QMonomial lt{(b - c) % 2 == 0 ? 1 : -1,
                                 2LL * (-n - n * b - n * d + b * d + a * c - b + c)};
                    neg_[idx] = w * lt;
                }
            }
}

const QSeries& CrossingWeightTable::weight(int sign, int a, int b, int c, int d) const {
    if (a < 0 || b < 0 || c < 0 || d < 0 || a > n_ || b > n_ || c > n_ || d > n_ ||
        a + b != c + d)
        return zero_;
    const int m = n_ + 1;
    std::size_t idx = (static_cast<std::size_t>(a) * m + b) * m + c;
    return sign > 0 ? pos_[idx] : neg_[idx];
}

// ---------------------------------------------------------------------------
// Braid closure state sum.
// ---------------------------------------------------------------------------

namespace {

struct JonesOverflow {};

inline void checked_addmul(long long& acc, long long x, long long y) {
    long long p;
    if (__builtin_mul_overflow(x, y, &p) || __builtin_add_overflow(acc, p, &acc))
        throw JonesOverflow{};
}
inline void checked_addmul(Int& acc, const Int& x, const Int& y) { acc += x * y; }

// Dense Laurent polynomial on the half-exponent grid: v[i] is the coefficient
// of q^{(lo + i)/2}.
template <typename C>
struct HPoly {
    long long lo = 0;
    std::vector<C> v;

    bool empty() const { return v.empty(); }
};

template <typename C>
HPoly<C> hp_one() {
    return HPoly<C>{0, {C(1)}};
}

template <typename C>
HPoly<C> hp_mul(const HPoly<C>& x, const HPoly<C>& y) {
    if (x.empty() || y.empty()) return {};
    HPoly<C> r;
    r.lo = x.lo + y.lo;
    r.v.assign(x.v.size() + y.v.size() - 1, C(0));
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        if (x.v[i] == 0) continue;
        for (std::size_t j = 0; j < y.v.size(); ++j)
            checked_addmul(r.v[i + j], x.v[i], y.v[j]);
    }
    return r;
}

template <typename C>
HPoly<C> hp_shift(HPoly<C> x, long long dh) {
    x.lo += dh;
    return x;
}

template <typename C>
void hp_add_into(HPoly<C>& acc, const HPoly<C>& x) {
    if (x.empty()) return;
    if (acc.empty()) {
        acc = x;
        return;
    }
    long long lo = std::min(acc.lo, x.lo);
    long long hi = std::max(acc.lo + static_cast<long long>(acc.v.size()),
                            x.lo + static_cast<long long>(x.v.size()));
    if (lo != acc.lo || hi != acc.lo + static_cast<long long>(acc.v.size())) {
        std::vector<C> nv(static_cast<std::size_t>(hi - lo), C(0));
        for (std::size_t i = 0; i < acc.v.size(); ++i) nv[acc.lo - lo + i] = acc.v[i];
        acc.v = std::move(nv);
        acc.lo = lo;
    }
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        C& slot = acc.v[x.lo - acc.lo + i];
        checked_addmul(slot, x.v[i], C(1));
    }
}

template <typename C>
HPoly<C> hp_from_qseries(const QSeries& s) {
    HPoly<C> r;
    if (s.is_zero()) return r;
    if (s.min_exp_q() % 2 != 0) throw Error("weight off the half grid");
    r.lo = s.min_exp_q() / 2;
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
        if (i % 2 == 1 && s.coeffs()[i] != 0) throw Error("weight off the half grid");
        if (i % 2 == 0) {
            if constexpr (std::is_same_v<C, long long>) {
                if (s.coeffs()[i] > INT64_MAX || s.coeffs()[i] < INT64_MIN) throw JonesOverflow{};
                r.v.push_back(static_cast<long long>(s.coeffs()[i]));
            } else {
                r.v.push_back(s.coeffs()[i]);
            }
        }
    }
    while (!r.v.empty() && r.v.back() == 0) r.v.pop_back();
    return r;
}

QSeries hp_to_qseries(const HPoly<Int>& p) {
    if (p.empty()) return QSeries::zero();
    std::vector<Int> coeffs;
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        coeffs.push_back(p.v[i]);
        if (i + 1 < p.v.size()) coeffs.push_back(0);
    }
    return QSeries::make(2 * p.lo, std::move(coeffs), EXACT_TRUNC);
}

QSeries hp_to_qseries(const HPoly<long long>& p) {
    HPoly<Int> b;
    b.lo = p.lo;
    for (long long c : p.v) b.v.push_back(c);
    return hp_to_qseries(b);
}

constexpr std::uint64_t SLOT_UNSET = 0xF;

inline int get_slot(std::uint64_t key, int slot) {
    return static_cast<int>((key >> (4 * slot)) & 0xF);
}
inline std::uint64_t set_slot(std::uint64_t key, int slot, int val) {
    key &= ~(std::uint64_t(0xF) << (4 * slot));
    key |= std::uint64_t(val) << (4 * slot);
    return key;
}

// Transfer-matrix evaluation of the braid closure.  The frontier maps packed
// color assignments (current color per strand, plus the remembered initial
// color of strands whose closure is still pending) to accumulated weights.
// One strand's boundary color is pinned instead of closed: the partial
// closure of the other strands is an intertwiner of the irreducible color-n
// representation, hence a scalar, and the full closure contributes a factor
// [n+1] times that scalar.
template <typename C>
QSeries jones_braid_impl(const BraidWord& b, int n) {
    const int w = b.width;
    const int L = static_cast<int>(b.word.size());
    std::vector<int> first(w, -1), last(w, -1);
    for (int j = 0; j < L; ++j) {
        int i = std::abs(b.word[j]) - 1;
        for (int k : {i, i + 1}) {
            if (first[k] < 0) first[k] = j;
            last[k] = j;
        }
    }
    // Leaving the leftmost strand open turns the closure into a planar
    // (1,1)-tangle, a scalar on the irreducible color-n representation, so its
    // own closure can be replaced by the factor [n+1] with the boundary color
    // pinned to n.  Only the leftmost strand qualifies: its closure arc is the
    // outermost one, every other strand's arc would encircle the open ends.
    int pivot = first[0] >= 0 ? 0 : -1;

    CrossingWeightTable table(n);
    // weights converted once; indexed (a*(n+1)+b)*(n+1)+c
    const int m = n + 1;
    std::vector<HPoly<C>> posw(static_cast<std::size_t>(m) * m * m),
        negw(static_cast<std::size_t>(m) * m * m);
    for (int a = 0; a <= n; ++a)
        for (int bb = 0; bb <= n; ++bb)
            for (int c = 0; c <= n; ++c) {
                int d = a + bb - c;
                if (d < 0 || d > n) continue;
                std::size_t idx = (static_cast<std::size_t>(a) * m + bb) * m + c;
                posw[idx] = hp_from_qseries<C>(table.weight(+1, a, bb, c, d));
                negw[idx] = hp_from_qseries<C>(table.weight(-1, a, bb, c, d));
            }

    std::uint64_t all_unset = 0;
    for (int s = 0; s < 2 * w; ++s) all_unset = set_slot(all_unset, s, SLOT_UNSET);

    std::unordered_map<std::uint64_t, HPoly<C>> cur;
    cur.emplace(all_unset, hp_one<C>());

    for (int j = 0; j < L; ++j) {
        const int i = std::abs(b.word[j]) - 1;
        const bool positive = b.word[j] > 0;
        const auto& wt = positive ? posw : negw;
        std::unordered_map<std::uint64_t, HPoly<C>> next;
        next.reserve(cur.size() * 2);
        for (const auto& [key, poly] : cur) {
            int a0 = get_slot(key, i), b0 = get_slot(key, i + 1);
            int alo = a0 == static_cast<int>(SLOT_UNSET) ? (i == pivot ? n : 0) : a0;
            int ahi = a0 == static_cast<int>(SLOT_UNSET) ? (i == pivot ? n : n) : a0;
            for (int a = alo; a <= ahi; ++a) {
                int blo = b0 == static_cast<int>(SLOT_UNSET) ? (i + 1 == pivot ? n : 0) : b0;
                int bhi = b0 == static_cast<int>(SLOT_UNSET) ? (i + 1 == pivot ? n : n) : b0;
                for (int bb = blo; bb <= bhi; ++bb) {
                    for (int c = std::max(0, a + bb - n); c <= std::min(n, a + bb); ++c) {
                        int d = a + bb - c;
                        const HPoly<C>& weight =
                            wt[(static_cast<std::size_t>(a) * m + bb) * m + c];
                        if (weight.empty()) continue;
                        std::uint64_t k2 = key;
                        long long closure_shift = 0;
                        // remember initial colors of strands first touched here
                        int init_i = a0 == static_cast<int>(SLOT_UNSET) ? a : -1;
                        int init_i1 = b0 == static_cast<int>(SLOT_UNSET) ? bb : -1;
                        if (init_i >= 0 && last[i] > j) k2 = set_slot(k2, w + i, init_i);
                        if (init_i1 >= 0 && last[i + 1] > j)
                            k2 = set_slot(k2, w + i + 1, init_i1);
                        k2 = set_slot(k2, i, c);
                        k2 = set_slot(k2, i + 1, d);
                        bool dead = false;
                        for (int k : {i, i + 1}) {
                            if (last[k] != j) continue;
                            int out = get_slot(k2, k);
                            int init = first[k] == j ? (k == i ? init_i : init_i1)
                                                     : get_slot(k2, w + k);
                            if (out != init) {
                                dead = true;
                                break;
                            }
                            if (k != pivot) closure_shift += 2 * init - n;
                            else if (init != n) {
                                dead = true; // pivot boundary color is pinned to n
                                break;
                            }
                            k2 = set_slot(k2, k, SLOT_UNSET);
                            k2 = set_slot(k2, w + k, SLOT_UNSET);
                        }
                        if (dead) continue;
                        hp_add_into(next[k2], hp_shift(hp_mul(poly, weight), closure_shift));
                    }
                }
            }
        }
        // drop entries that became identically zero
        for (auto it = next.begin(); it != next.end();) {
            auto& v = it->second.v;
            while (!v.empty() && v.back() == 0) v.pop_back();
            std::size_t lead = 0;
            while (lead < v.size() && v[lead] == 0) ++lead;
            if (lead) {
                v.erase(v.begin(), v.begin() + static_cast<long>(lead));
                it->second.lo += static_cast<long long>(lead);
            }
            if (v.empty()) it = next.erase(it);
            else ++it;
        }
        cur = std::move(next);
    }

    HPoly<C> total;
    for (const auto& [key, poly] : cur) {
        if (key != all_unset) throw Error("braid closure left an open strand");
        hp_add_into(total, poly);
    }
    QSeries out = hp_to_qseries(total);
    QSeries qi = quantum_integer(n + 1);
    if (pivot >= 0) out = out * qi; // the pinned strand's closure
    for (int k = 0; k < w; ++k)
        if (first[k] < 0) out = out * qi; // strands not meeting any crossing
    return out;
}

} // namespace

QSeries jones_braid(const BraidWord& b, long long n) {
    if (b.width < 1) throw WidthMismatch("braid width must be >= 1");
    if (b.width > 8) throw TooLarge("braid width > 8 not supported");
    for (int x : b.word)
        if (x == 0 || std::abs(x) >= b.width)
            throw WidthMismatch("braid letter out of range");
    if (n < 0) throw OutOfRange("negative color");
    if (n > 14) throw TooLarge("color > 14 not supported by the state encoding");
    if (n == 0) return QSeries::one();
    try {
        return jones_braid_impl<long long>(b, static_cast<int>(n));
    } catch (const JonesOverflow&) {
        return jones_braid_impl<Int>(b, static_cast<int>(n));
    }
}

HatJones hat_jones(const QSeries& j) {
    auto [mono, unit] = divide_by_lowest(j);
    for (std::size_t i = 0; i < unit.coeffs().size(); ++i)
        if (unit.coeffs()[i] != 0 && (unit.min_exp_q() + static_cast<expq_t>(i)) % 4 != 0)
            throw NonUnitLeadingCoefficient(
                "hat-normalized series has non-integer exponents");
    return HatJones{mono, unit};
}

bool min_degree_check(const QSeries& j, int c_minus, int sigma, long long n) {
    // -(n^2+n)/2 c_minus - n/2 (sigma+1), in quarter units
    expq_t want = -2 * (n * n + n) * c_minus - 2 * n * (sigma + 1);
    return !j.is_zero() && j.valuation_q() == want;
}

// ---------------------------------------------------------------------------
// Kauffman bracket oracle.
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int x, int y) { parent[find(x)] = find(y); }
};

// V_K(q): writhe-corrected bracket with A = q^{-1/4}.
QSeries kauffman_v(const LinkDiagram& d) {
    const int c = d.num_crossings();
    if (c > 20) throw TooLarge("Kauffman expansion over 2^20 states");
    const int arcs = d.num_arcs();
    // delta = -A^2 - A^{-2} = -q^{-1/2} - q^{1/2}
    QSeries delta = QSeries::make(-2, {-1, 0, 0, 0, -1}, EXACT_TRUNC);
    std::vector<QSeries> delta_pow{QSeries::one()};
    for (int i = 0; i < c + 1; ++i) delta_pow.push_back(delta_pow.back() * delta);

    QSeries bracket = QSeries::zero(EXACT_TRUNC);
    for (int mask = 0; mask < (1 << c); ++mask) {
        UnionFind uf(arcs + 1);
        int na = 0;
        for (int x = 0; x < c; ++x) {
            const auto& t = d.crossings[x];
            if (mask >> x & 1) {
                // A-smoothing: opens the channel between the two regions swept
                // from the over-strand counterclockwise onto the under-strand
                ++na;
                uf.unite(t[0], t[1]);
                uf.unite(t[2], t[3]);
            } else {
                uf.unite(t[1], t[2]);
                uf.unite(t[3], t[0]);
            }
        }
        int loops = 0;
        for (int a = 1; a <= arcs; ++a)
            if (uf.find(a) == a) ++loops;
        // A^{na - nb} with A = q^{-1/4}: quarter exponent nb - na
        QMonomial mono{1, (c - na) - na};
        bracket = bracket + delta_pow[static_cast<std::size_t>(loops - 1)] * mono;
    }
    // multiply by (-A^3)^{-writhe}
    int wr = d.writhe();
    QMonomial corr{wr % 2 == 0 ? 1 : -1, 3LL * wr};
    return bracket * corr;
}

} // namespace

QSeries kauffman_jones(const LinkDiagram& d) {
    return kauffman_v(d) * quantum_integer(2);
}

long long determinant(const LinkDiagram& d) {
    QSeries v = kauffman_v(d);
    Int det = 0;
    for (std::size_t i = 0; i < v.coeffs().size(); ++i) {
        if (v.coeffs()[i] == 0) continue;
        expq_t e = v.min_exp_q() + static_cast<expq_t>(i);
        if (e % 4 != 0) throw Error("Jones polynomial off the integer grid");
        det += (e / 4) % 2 == 0 ? v.coeffs()[i] : -v.coeffs()[i];
    }
    if (det < 0) det = -det;
    if (det > INT64_MAX) throw Overflow("determinant exceeds int64");
    return static_cast<long long>(det);
}

} // namespace qtails
