#include "qtails/nahm.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <deque>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace qtails {

namespace {

// Search plan: variables in breadth-first order from v_inf, so every variable
// is bounded by at least one arc to an already assigned face the moment it is
// reached.  Arcs and A-angle pairs are scheduled at the depth where their last
// variable gets its value.
struct PlanArc {
    int arc;     // 0-based arc index
    int partner; // the other variable, -1 for v_inf
};

struct EnumPlan {
    std::vector<int> order;
    std::vector<std::vector<PlanArc>> arcs_at;
    std::vector<std::vector<std::array<int, 2>>> angles_at;
};

EnumPlan make_plan(const NahmData& nd) {
    const int n = nd.n_vars;
    const int m = static_cast<int>(nd.edge_rows.size());
    EnumPlan p;
    std::vector<int> pos(n, -1);
    std::deque<int> queue;
    auto visit = [&](int v) {
        if (v < 0 || pos[v] >= 0) return;
        pos[v] = static_cast<int>(p.order.size());
        p.order.push_back(v);
        queue.push_back(v);
    };
    std::vector<int> roots;
    for (int a = 0; a < m; ++a) {
        auto [u, v] = nd.edge_rows[a];
        if (u < 0 && v >= 0) roots.push_back(v);
        if (v < 0 && u >= 0) roots.push_back(u);
    }
    std::sort(roots.begin(), roots.end());
    for (int v : roots) visit(v);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int a = 0; a < m; ++a) {
            if (nd.edge_rows[a][0] == v) visit(nd.edge_rows[a][1]);
            if (nd.edge_rows[a][1] == v) visit(nd.edge_rows[a][0]);
        }
    }
    if (static_cast<int>(p.order.size()) != n)
        throw NotConnected("dual graph of the diagram is disconnected");

    p.arcs_at.resize(n);
    std::vector<int> arc_depth(m, -1);
    for (int a = 0; a < m; ++a) {
        auto [u, v] = nd.edge_rows[a];
        int pu = u < 0 ? -1 : pos[u], pv = v < 0 ? -1 : pos[v];
        int depth = std::max(pu, pv);
        int partner = pu > pv ? v : u;
        arc_depth[a] = depth;
        p.arcs_at[depth].push_back({a, partner});
    }
    p.angles_at.resize(n);
    for (auto& aa : nd.angle_arcs) {
        for (int half = 0; half < 2; ++half) {
            int e = aa[2 * half], f = aa[2 * half + 1];
            p.angles_at[std::max(arc_depth[e], arc_depth[f])].push_back({e, f});
        }
    }
    return p;
}

std::vector<int> effective_ub(const NahmData& nd, long long def, const EnumOptions& opts) {
    if (def > INT_MAX / 4) throw TooLarge("truncation order too large");
    std::vector<int> ub(nd.edge_rows.size(), static_cast<int>(def));
    if (!opts.edge_upper.empty()) {
        if (opts.edge_upper.size() != ub.size())
            throw OutOfRange("edge_upper must have one entry per arc");
        for (std::size_t a = 0; a < ub.size(); ++a)
            ub[a] = std::min(ub[a], opts.edge_upper[a]);
    }
    return ub;
}

// Plain enumeration (no series accumulation).
struct Enumerator {
    const NahmData& nd;
    const EnumPlan& plan;
    long long N;
    std::vector<int> ub;
    const std::function<void(const ConePoint&)>& emit;
    long long cap;

    std::vector<int> lambda, edge;
    std::vector<long long> rowacc; // sum_u Q2x[u][v] * lambda_u over assigned u
    long long ap2 = 0;             // sum of completed A-angle products = 2*Q_angle
    long long q2l2x = 0;           // 2*(Q+L) over assigned variables
    int parity = 0;
    long long points = 0;

    Enumerator(const NahmData& nd_, const EnumPlan& plan_, long long N_, std::vector<int> ub_,
               const std::function<void(const ConePoint&)>& emit_, long long cap_)
        : nd(nd_), plan(plan_), N(N_), ub(std::move(ub_)), emit(emit_), cap(cap_),
          lambda(nd_.n_vars, 0), edge(nd_.edge_rows.size(), 0), rowacc(nd_.n_vars, 0) {}

    void run() { rec(0); }

    void rec(int k) {
        if (k == nd.n_vars) {
            leaf();
            return;
        }
        const int v = plan.order[k];
        long long lo = LLONG_MIN, hi = LLONG_MAX;
        for (auto& pa : plan.arcs_at[k]) {
            long long pv = pa.partner < 0 ? 0 : lambda[pa.partner];
            lo = std::max(lo, -pv);
            hi = std::min(hi, ub[pa.arc] - pv);
        }
        for (long long t = lo; t <= hi; ++t) {
            lambda[v] = static_cast<int>(t);
            long long dq = t * t * (nd.Q2x[v][v] / 2) + t * rowacc[v] + nd.L2[v] * t;
            q2l2x += dq;
            for (int u = 0; u < nd.n_vars; ++u) rowacc[u] += nd.Q2x[v][u] * t;
            for (auto& pa : plan.arcs_at[k])
                edge[pa.arc] = static_cast<int>(t + (pa.partner < 0 ? 0 : lambda[pa.partner]));
            long long saved_ap2 = ap2;
            for (auto& [e, f] : plan.angles_at[k]) ap2 += 1LL * edge[e] * edge[f];
            int dpar = nd.sign_odd[v] ? static_cast<int>(t & 1) : 0;
            parity ^= dpar;
            if (ap2 <= 2 * N) rec(k + 1);
            parity ^= dpar;
            ap2 = saved_ap2;
            for (int u = 0; u < nd.n_vars; ++u) rowacc[u] -= nd.Q2x[v][u] * t;
            q2l2x -= dq;
        }
        lambda[v] = 0;
    }

    void leaf() {
        if (q2l2x & 1) throw Error("internal: Q+L not an integer on an admissible point");
        if (q2l2x < ap2)
            throw Error("internal: angle pruning bound exceeded Q+L");
        long long q2 = q2l2x / 2;
        if (q2 > N) return;
        if (++points > cap) throw BoundTooLarge("admissible point cap exceeded");
        ConePoint pt;
        pt.lambda = lambda;
        pt.q2_value = q2;
        pt.edge_values = edge;
        pt.sign = parity ? -1 : 1;
        emit(pt);
    }
};

// ---- series accumulation -------------------------------------------------

// Coefficients in the hot path are overflow-checked __int128; on overflow the
// whole computation is redone with arbitrary precision.
template <class C>
struct Ops {
    static void fma(C& dst, const C& a, const C& b) { dst += a * b; }
    static void add(C& dst, const C& b) { dst += b; }
};

template <>
struct Ops<__int128> {
    static void fma(__int128& dst, const __int128& a, const __int128& b) {
        __int128 prod;
        if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(dst, prod, &dst))
            throw Overflow("128-bit coefficient overflow");
    }
    static void add(__int128& dst, const __int128& b) {
        if (__builtin_add_overflow(dst, b, &dst)) throw Overflow("128-bit coefficient overflow");
    }
};

Int to_big(const __int128& v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Int r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? -r : r;
}

struct AccumParams {
    long long N = 0;       // highest output order kept
    long long q2cut = 0;   // leaves beyond this degree are dropped; the DFS
                           // prunes once 2*Q_angle exceeds 2*q2cut
    long long off = 0;     // accumulator offset (room below order 0)
    bool weighted = false; // apply the edge-minus-polygon inverse-power weight
    bool shrink = true;    // shorten partial products by the angle bound
};

template <class C>
struct Accumulator {
    const NahmData& nd;
    const EnumPlan& plan;
    AccumParams P;
    std::vector<int> ub;
    long long cap;

    std::vector<std::vector<C>> inv_poch; // 1/(q;q)_k to order N
    std::vector<int> lambda, edge;
    std::vector<long long> rowacc;
    long long ap2 = 0, q2l2x = 0;
    int parity = 0;
    long long points = 0;
    // prod[k][i]: partial product after folding in the i-th arc of depth k.
    std::vector<std::vector<std::vector<C>>> prod;
    std::vector<C> acc;

    Accumulator(const NahmData& nd_, const EnumPlan& plan_, AccumParams P_, std::vector<int> ub_,
                long long cap_)
        : nd(nd_), plan(plan_), P(P_), ub(std::move(ub_)), cap(cap_), lambda(nd_.n_vars, 0),
          edge(nd_.edge_rows.size(), 0), rowacc(nd_.n_vars, 0) {
        const std::size_t len = static_cast<std::size_t>(P.N) + 1;
        int kmax = 0;
        for (int u : ub) kmax = std::max(kmax, u);
        kmax = std::min<long long>(kmax, P.q2cut); // an edge never exceeds the degree kept
        inv_poch.assign(kmax + 1, {});
        inv_poch[0].assign(len, C(0));
        inv_poch[0][0] = 1;
        for (int k = 1; k <= kmax; ++k) {
            inv_poch[k] = inv_poch[k - 1];
            for (std::size_t j = k; j < len; ++j) Ops<C>::add(inv_poch[k][j], inv_poch[k][j - k]);
        }
        prod.resize(nd.n_vars);
        for (int k = 0; k < nd.n_vars; ++k)
            prod[k].assign(plan.arcs_at[k].size(), std::vector<C>(len, C(0)));
        acc.assign(static_cast<std::size_t>(P.off + P.N + 1), C(0));
    }

    const std::vector<C>& prod_before(int k) const {
        for (int j = k - 1; j >= 0; --j)
            if (!prod[j].empty()) return prod[j].back();
        static const std::vector<C> one{C(1)};
        return one;
    }

    // dst = src * inv_poch[e], truncated to len terms.
    void mul_into(std::vector<C>& dst, const std::vector<C>& src, int e, std::size_t len) {
        const auto& g = inv_poch[e];
        for (std::size_t j = 0; j < len; ++j) dst[j] = 0;
        const std::size_t ns = std::min(src.size(), len);
        for (std::size_t i = 0; i < ns; ++i) {
            if (src[i] == 0) continue;
            const C& s = src[i];
            for (std::size_t j = 0; i + j < len; ++j) Ops<C>::fma(dst[i + j], s, g[j]);
        }
    }

    void run(int first_lo, int first_hi) { rec(0, first_lo, first_hi); }

    void rec(int k, int force_lo, int force_hi) {
        if (k == nd.n_vars) {
            leaf();
            return;
        }
        const int v = plan.order[k];
        long long lo = LLONG_MIN, hi = LLONG_MAX;
        for (auto& pa : plan.arcs_at[k]) {
            long long pv = pa.partner < 0 ? 0 : lambda[pa.partner];
            lo = std::max(lo, -pv);
            hi = std::min(hi, ub[pa.arc] - pv);
        }
        if (k == 0) {
            lo = std::max<long long>(lo, force_lo);
            hi = std::min<long long>(hi, force_hi);
        }
        for (long long t = lo; t <= hi; ++t) {
            lambda[v] = static_cast<int>(t);
            long long dq = t * t * (nd.Q2x[v][v] / 2) + t * rowacc[v] + nd.L2[v] * t;
            q2l2x += dq;
            for (int u = 0; u < nd.n_vars; ++u) rowacc[u] += nd.Q2x[v][u] * t;
            for (auto& pa : plan.arcs_at[k])
                edge[pa.arc] = static_cast<int>(t + (pa.partner < 0 ? 0 : lambda[pa.partner]));
            long long saved_ap2 = ap2;
            for (auto& [e, f] : plan.angles_at[k]) ap2 += 1LL * edge[e] * edge[f];
            int dpar = nd.sign_odd[v] ? static_cast<int>(t & 1) : 0;
            parity ^= dpar;
            if (ap2 <= 2 * P.q2cut) {
                // Terms of a completion sit at order >= ceil(ap2/2), so the
                // partial product can shed its top end early.
                std::size_t len = static_cast<std::size_t>(P.N) + 1;
                if (P.shrink) len -= static_cast<std::size_t>((ap2 + 1) / 2);
                const std::vector<C>* cur = &prod_before(k);
                for (std::size_t i = 0; i < plan.arcs_at[k].size(); ++i) {
                    mul_into(prod[k][i], *cur, edge[plan.arcs_at[k][i].arc], len);
                    cur = &prod[k][i];
                }
                rec(k + 1, force_lo, force_hi);
            }
            parity ^= dpar;
            ap2 = saved_ap2;
            for (int u = 0; u < nd.n_vars; ++u) rowacc[u] -= nd.Q2x[v][u] * t;
            q2l2x -= dq;
        }
        lambda[v] = 0;
    }

    void leaf() {
        if (q2l2x & 1) throw Error("internal: Q+L not an integer on an admissible point");
        if (q2l2x < ap2) throw Error("internal: angle pruning bound exceeded Q+L");
        const long long q2 = q2l2x / 2;
        if (q2 > P.q2cut) return;
        if (++points > cap) throw BoundTooLarge("admissible point cap exceeded");
        const std::vector<C>& pr = prod_before(nd.n_vars);
        const int sign = parity ? -1 : 1;
        auto deposit = [&](long long base, int s) {
            if (base > P.N) return;
            const long long jmax = std::min<long long>(static_cast<long long>(pr.size()) - 1,
                                                       P.N - base);
            for (long long j = 0; j <= jmax; ++j) {
                const long long idx = base + j + P.off;
                if (idx < 0) throw Error("internal: term below the retained order window");
                if (s > 0)
                    Ops<C>::add(acc[static_cast<std::size_t>(idx)], pr[static_cast<std::size_t>(j)]);
                else {
                    C neg = pr[static_cast<std::size_t>(j)];
                    neg = -neg;
                    Ops<C>::add(acc[static_cast<std::size_t>(idx)], neg);
                }
            }
        };
        if (!P.weighted) {
            deposit(q2, sign);
        } else {
            for (int e : edge) deposit(q2 - e, sign);
            for (auto& aa : nd.angle_arcs) deposit(q2 - (edge[aa[0]] + edge[aa[2]]), -sign);
        }
    }
};

// Runs the accumulation, splitting the first variable's range across threads.
template <class C>
std::vector<C> run_accum(const NahmData& nd, const EnumPlan& plan, const AccumParams& P,
                         const std::vector<int>& ub, const EnumOptions& opts, long long& points) {
    int first_hi = INT_MAX;
    for (auto& pa : plan.arcs_at[0]) first_hi = std::min(first_hi, ub[pa.arc]);
    const int nt = std::max(1, std::min(opts.threads, first_hi + 1));
    if (nt == 1) {
        Accumulator<C> a(nd, plan, P, ub, opts.max_points);
        a.run(0, first_hi);
        points = a.points;
        return std::move(a.acc);
    }
    std::vector<std::vector<C>> parts(nt);
    std::vector<long long> counts(nt, 0);
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            try {
                Accumulator<C> a(nd, plan, P, ub, opts.max_points);
                // Interleaved ranges balance the work: worker w takes the
                // first-variable values congruent to w mod nt, one at a time.
                for (int t = w; t <= first_hi; t += nt) a.run(t, t);
                counts[w] = a.points;
                parts[w] = std::move(a.acc);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    std::vector<C> acc = std::move(parts[0]);
    points = counts[0];
    for (int w = 1; w < nt; ++w) {
        for (std::size_t i = 0; i < acc.size(); ++i) Ops<C>::add(acc[i], parts[w][i]);
        points += counts[w];
    }
    if (points > opts.max_points) throw BoundTooLarge("admissible point cap exceeded");
    return acc;
}

std::vector<Int> run_accum_big(const NahmData& nd, const EnumPlan& plan, const AccumParams& P,
                               const std::vector<int>& ub, const EnumOptions& opts,
                               long long& points, bool& used_bigint) {
    try {
        auto acc = run_accum<__int128>(nd, plan, P, ub, opts, points);
        std::vector<Int> out(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = to_big(acc[i]);
        return out;
    } catch (const Overflow&) {
        used_bigint = true;
        return run_accum<Int>(nd, plan, P, ub, opts, points);
    }
}

// Dense integer-grid coefficients -> quarter-grid series truncated at q^{N+1}.
QSeries to_series(const std::vector<Int>& coeffs, long long first_order, long long N) {
    std::vector<Int> co(static_cast<std::size_t>(4 * (N + 1) - 4 * first_order), 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        long long ord = first_order + static_cast<long long>(i);
        if (ord > N) break;
        co[static_cast<std::size_t>(4 * (ord - first_order))] = coeffs[i];
    }
    return QSeries::make(4 * first_order, std::move(co), 4 * (N + 1));
}

QSeries series_pow(const QSeries& base, int e) {
    QSeries r = QSeries::one();
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
}

} // namespace

void enumerate_adm(const NahmData& nd, long long N,
                   const std::function<void(const ConePoint&)>& emit, const EnumOptions& opts) {
    if (N < 0) throw OutOfRange("negative truncation order");
    EnumPlan plan = make_plan(nd);
    Enumerator en(nd, plan, N, effective_ub(nd, N, opts), emit, opts.max_points);
    en.run();
}

std::vector<ConePoint> enumerate_adm_collect(const NahmData& nd, long long N,
                                             const EnumOptions& opts) {
    std::vector<ConePoint> out;
    enumerate_adm(nd, N, [&](const ConePoint& p) { out.push_back(p); }, opts);
    return out;
}

QSeries phi0(const NahmData& nd, long long N, const EnumOptions& opts, NahmRunStats& stats) {
    if (N < 0) throw OutOfRange("negative truncation order");
    EnumPlan plan = make_plan(nd);
    AccumParams P;
    P.N = N;
    P.q2cut = N;
    P.off = 0;
    stats = {};
    auto acc = run_accum_big(nd, plan, P, effective_ub(nd, N, opts), opts, stats.points,
                             stats.used_bigint);
    QSeries tail = to_series(acc, 0, N);
    // Unknot-normalized tail: (1-q) (q;q)_inf^c times the cone sum.
    const expq_t T = 4 * (N + 1);
    return tail * series_pow(euler_function(T), nd.c) * pochhammer(4, 1, T);
}

QSeries phi0(const NahmData& nd, long long N, const EnumOptions& opts) {
    NahmRunStats st;
    return phi0(nd, N, opts, st);
}

QSeries phi1(const NahmData& nd, long long N, const EnumOptions& opts, NahmRunStats& stats) {
    if (N < 0) throw OutOfRange("negative truncation order");
    EnumPlan plan = make_plan(nd);
    stats = {};

    // Truncation bounds for the weighted sum.  Split states by flatness:
    // (1) if Q2 > (4/3)|s| (|s| = largest quadrilateral value) then every
    //     weight term lands at order Q2 - shift >= Q2 - |s| > Q2/4, so states
    //     with Q2 > 4N only contribute above N;
    // (2) otherwise the state is |s| times a flat polygon direction plus a
    //     remainder s' vanishing near the polygon, with Q2 = |s| + Q2(s').
    //     The q^{-|s|} weight contributions of the polygon's edges and
    //     vertices cancel pairwise, every surviving shift is at most
    //     max(|s'|, an s'-edge value) <= |s|, and Q2(s') >= |s'|, so the
    //     order is at least |s|.  The polygon decomposition needs
    //     |s| > 36c, hence near-flat states matter only while
    //     |s| <= max(36c, N), i.e. Q2 <= max(48c, 4N)/ up to the 4/3 factor.
    const long long edge_cap = std::max<long long>(36LL * nd.c, N);
    const long long q2cut = std::max<long long>(4 * N, 48LL * nd.c);

    AccumParams PM;
    PM.N = N;
    PM.q2cut = q2cut;
    PM.off = edge_cap; // room for the inverse-power shifts
    PM.weighted = true;
    PM.shrink = false;
    EnumOptions main_opts = opts;
    long long pts = 0;
    bool big = false;
    auto main_acc = run_accum_big(nd, plan, PM, effective_ub(nd, edge_cap, main_opts), main_opts,
                                  pts, big);
    stats.points += pts;
    stats.used_bigint = stats.used_bigint || big;

    const expq_t T = 4 * (N + 1);
    QSeries qinf = euler_function(T);
    QSeries qinf_inv = qinf.inverse_unit();

    // Shift the weighted accumulator down by its offset; anything below order
    // zero must have cancelled.
    for (long long i = 0; i < PM.off; ++i)
        if (main_acc[static_cast<std::size_t>(i)] != 0)
            throw Error("internal: weighted sum produced a negative-order term");
    std::vector<Int> shifted(main_acc.begin() + static_cast<std::ptrdiff_t>(PM.off),
                             main_acc.end());
    QSeries bracket = to_series(shifted, 0, N);

    // Subtract, for every bounded B-face v, the subsum over colorings whose
    // quadrilaterals at v all vanish, weighted by 1/(q;q)_inf^{deg v}.
    for (int vi = 0; vi < nd.n_vars; ++vi) {
        if (nd.var_color[vi] != 'B') continue;
        EnumOptions copts = opts;
        copts.edge_upper.assign(nd.edge_rows.size(), INT_MAX);
        // The quadrilateral at x vanishes iff all four arcs there are zero.
        for (int x : nd.crossings_at_var[vi])
            for (int idx : nd.angle_arcs[x]) copts.edge_upper[idx] = 0;
        AccumParams PC;
        PC.N = N;
        PC.q2cut = N;
        PC.off = 0;
        long long cpts = 0;
        bool cbig = false;
        auto cacc = run_accum_big(nd, plan, PC, effective_ub(nd, N, copts), copts, cpts, cbig);
        stats.points += cpts;
        stats.used_bigint = stats.used_bigint || cbig;
        QSeries corr = to_series(cacc, 0, N);
        bracket = bracket - corr * series_pow(qinf_inv, nd.var_deg[vi]);
    }

    // Unknot-normalized 1-limit: the reduced colored Jones polynomial is the
    // unreduced one times (1-q)/(1-q^{n+1}), which turns the limit pair
    // (P0, P1) into ((1-q)P0, (1-q)(P0+P1)).  With P0 = (q)_inf^c S and
    // P1 = (q)_inf^c/(1-q) * bracket this is phi0 + (q)_inf^c * bracket.
    return phi0(nd, N, opts) + bracket * series_pow(qinf, nd.c);
}

QSeries phi1(const NahmData& nd, long long N, const EnumOptions& opts) {
    NahmRunStats st;
    return phi1(nd, N, opts, st);
}

// ---- generalized evaluator ----------------------------------------------

QSeries generic_nahm(const GenericNahmSpec& spec, const EnumOptions& opts) {
    const int r = spec.r;
    const long long N = spec.N;
    if (r <= 0 || N < 0) throw OutOfRange("generic sum needs r > 0 and N >= 0");
    if (static_cast<int>(spec.A2.size()) != r || static_cast<int>(spec.b2.size()) != r ||
        static_cast<int>(spec.a.size()) != r)
        throw OutOfRange("generic spec dimensions disagree");
    for (auto& row : spec.A2)
        if (static_cast<int>(row.size()) != r) throw OutOfRange("A2 is not square");
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (spec.A2[i][j] != spec.A2[j][i]) throw OutOfRange("A2 is not symmetric");

    // Box [0, N+1]^r.  Completeness rests on the growth property
    // degree >= sup-norm on the cone, which is checked rather than assumed:
    // a cone point on the box boundary with degree <= N raises
    // RegularityViolation, as does any nonzero point of nonpositive degree.
    const long long U = N + 1;
    std::vector<long long> n(r, 0);
    // Exponents may be half- or quarter-integral, so the accumulator runs on
    // the quarter grid: acc[d4] is the coefficient of q^(d4/4), where
    // d4 = n^T A2 n + 2 b2.n is four times the exponent.
    std::vector<Int> acc(static_cast<std::size_t>(4 * N + 1), 0);

    // inverse Pochhammer table to order N
    std::vector<std::vector<Int>> invp(static_cast<std::size_t>(N + 2));
    invp[0].assign(static_cast<std::size_t>(N + 1), 0);
    invp[0][0] = 1;
    for (long long k = 1; k <= N + 1; ++k) {
        invp[k] = invp[k - 1];
        for (long long j = k; j <= N; ++j) invp[k][j] += invp[k][j - k];
    }

    // Cone rows prune as soon as their last referenced coordinate is set.
    std::vector<std::vector<int>> rows_done_at(r);
    for (std::size_t ri = 0; ri < spec.cone.size(); ++ri) {
        if (static_cast<int>(spec.cone[ri].size()) != r)
            throw OutOfRange("cone row length disagrees with r");
        int last = -1;
        for (int i = 0; i < r; ++i)
            if (spec.cone[ri][i] != 0) last = i;
        if (last >= 0) rows_done_at[last].push_back(static_cast<int>(ri));
    }

    long long points = 0;
    // deg4 = quadrupled degree of the assigned prefix
    auto rec = [&](auto&& self, int k, long long deg4) -> void {
        if (k == r) {
            bool zero = std::all_of(n.begin(), n.end(), [](long long x) { return x == 0; });
            if (!zero && deg4 <= 0)
                throw RegularityViolation("nonpositive exponent at a nonzero cone point");
            if (deg4 > 4 * N) return;
            if (std::any_of(n.begin(), n.end(), [&](long long x) { return x == U; }))
                throw RegularityViolation(
                    "cone point on the enumeration boundary still contributes; growth too slow");
            if (++points > opts.max_points) throw BoundTooLarge("cone point cap exceeded");
            int sgn = 0;
            for (int i = 0; i < r; ++i) sgn ^= static_cast<int>((spec.a[i] & 1) & (n[i] & 1));
            std::vector<Int> term(static_cast<std::size_t>((4 * N - deg4) / 4) + 1, 0);
            term[0] = 1;
            std::vector<Int> tmp;
            for (int i = 0; i < r; ++i) {
                tmp.assign(term.size(), 0);
                const auto& g = invp[static_cast<std::size_t>(std::min<long long>(n[i], N + 1))];
                for (std::size_t x = 0; x < term.size(); ++x) {
                    if (term[x] == 0) continue;
                    for (std::size_t y = 0; x + y < term.size(); ++y) tmp[x + y] += term[x] * g[y];
                }
                term.swap(tmp);
            }
            for (std::size_t j = 0; j < term.size(); ++j) {
                if (sgn)
                    acc[static_cast<std::size_t>(deg4) + 4 * j] -= term[j];
                else
                    acc[static_cast<std::size_t>(deg4) + 4 * j] += term[j];
            }
            return;
        }
        for (long long t = 0; t <= U; ++t) {
            n[k] = t;
            bool feasible = true;
            for (int ri : rows_done_at[k]) {
                long long dot = 0;
                for (int i = 0; i <= k; ++i) dot += spec.cone[ri][i] * n[i];
                if (dot < 0) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
            long long d4 = deg4 + spec.A2[k][k] * t * t + 2 * spec.b2[k] * t;
            for (int i = 0; i < k; ++i) d4 += 2 * spec.A2[i][k] * n[i] * t;
            // Interval lower bound over the unassigned coordinates: for each
            // free j minimize its own quadratic (with the cross terms against
            // assigned coordinates folded into the linear part) over [0, U];
            // cross terms among free coordinates are bounded below pairwise.
            long long lb4 = d4;
            for (int j = k + 1; j < r; ++j) {
                long long cj = spec.b2[j];
                for (int i = 0; i <= k; ++i) cj += spec.A2[i][j] * n[i];
                auto phi = [&](long long t) { return spec.A2[j][j] * t * t + 2 * cj * t; };
                long long best = std::min(phi(0), phi(U));
                if (spec.A2[j][j] > 0) {
                    long long ts = std::clamp(-cj / spec.A2[j][j], 0LL, U);
                    for (long long t : {ts, ts + 1})
                        if (t >= 0 && t <= U) best = std::min(best, phi(t));
                }
                lb4 += best;
                for (int l = j + 1; l < r; ++l)
                    if (spec.A2[j][l] < 0) lb4 += 2 * spec.A2[j][l] * U * U;
            }
            if (lb4 <= 4 * N) self(self, k + 1, d4);
        }
        n[k] = 0;
    };
    rec(rec, 0, 0);

    // acc already lives on the quarter grid.
    std::vector<Int> co(static_cast<std::size_t>(4 * (N + 1)), 0);
    for (std::size_t d4 = 0; d4 < acc.size(); ++d4) co[d4] = acc[d4];
    return QSeries::make(0, std::move(co), 4 * (N + 1));
}

GenericNahmSpec nahm_to_generic(const NahmData& nd, long long N) {
    GenericNahmSpec g;
    const int m = static_cast<int>(nd.edge_rows.size());
    g.r = m;
    g.N = N;
    g.A2.assign(m, std::vector<long long>(m, 0));
    // Degree quadratic in edge coordinates: twice the A-angle pair counts.
    for (auto& aa : nd.angle_arcs)
        for (int half = 0; half < 2; ++half) {
            int e = aa[2 * half], f = aa[2 * half + 1];
            g.A2[e][f] += 1;
            g.A2[f][e] += 1;
        }

    // Express each region variable as a signed sum of edge coordinates by
    // solving along a spanning tree of the dual graph rooted at v_inf.
    std::vector<std::vector<long long>> coef(nd.n_vars, std::vector<long long>(m, 0));
    std::vector<char> known(nd.n_vars, 0);
    std::deque<int> queue;
    auto reach = [&](int from, int arc) {
        auto [u, v] = nd.edge_rows[arc];
        int w = (u == from) ? v : u;
        if (w < 0 || known[w]) return;
        known[w] = 1;
        if (from >= 0)
            for (int e = 0; e < m; ++e) coef[w][e] = -coef[from][e];
        coef[w][arc] += 1;
        queue.push_back(w);
    };
    for (int a = 0; a < m; ++a) {
        auto [u, v] = nd.edge_rows[a];
        if (u < 0) reach(-1, a);
        if (v < 0) reach(-1, a);
    }
    while (!queue.empty()) {
        int w = queue.front();
        queue.pop_front();
        for (int a = 0; a < m; ++a) {
            auto [u, v] = nd.edge_rows[a];
            if (u == w || v == w) reach(w, a);
        }
    }

    g.b2.assign(m, 0);
    g.a.assign(m, 0);
    for (int vi = 0; vi < nd.n_vars; ++vi) {
        for (int e = 0; e < m; ++e) g.b2[e] += nd.L2[vi] * coef[vi][e];
        if (nd.sign_odd[vi])
            for (int e = 0; e < m; ++e) g.a[e] = static_cast<int>((g.a[e] + coef[vi][e]) & 1);
    }

    // Centering: at each crossing the two opposite arc pairs balance.
    for (auto& aa : nd.angle_arcs) {
        std::vector<long long> row(m, 0);
        row[aa[0]] += 1;
        row[aa[2]] += 1;
        row[aa[1]] -= 1;
        row[aa[3]] -= 1;
        g.cone.push_back(row);
        for (auto& x : row) x = -x;
        g.cone.push_back(row);
    }
    return g;
}

std::vector<std::vector<int>> centered_state_oracle(const NahmData& nd, int N) {
    const int m = static_cast<int>(nd.edge_rows.size());
    std::vector<int> s(m, 0);
    std::vector<std::vector<int>> out;

    // Solve the tree system for lambda and verify every arc.
    auto pull_back = [&]() -> bool {
        std::vector<int> lambda(nd.n_vars, 0);
        std::vector<char> known(nd.n_vars, 0);
        std::deque<int> queue;
        auto settle = [&](int from, long long from_val, int arc) {
            auto [u, v] = nd.edge_rows[arc];
            int w = (u == from) ? v : u;
            if (w < 0 || known[w]) return;
            known[w] = 1;
            lambda[w] = static_cast<int>(s[arc] - from_val);
            queue.push_back(w);
        };
        for (int a = 0; a < m; ++a) {
            auto [u, v] = nd.edge_rows[a];
            if (u < 0) settle(-1, 0, a);
            else if (v < 0) settle(-1, 0, a);
        }
        while (!queue.empty()) {
            int w = queue.front();
            queue.pop_front();
            for (int a = 0; a < m; ++a) {
                auto [u, v] = nd.edge_rows[a];
                if (u == w || v == w) settle(w, lambda[w], a);
            }
        }
        for (int a = 0; a < m; ++a)
            if (nd.edge_value(a, lambda) != s[a]) return false;
        out.push_back(std::move(lambda));
        return true;
    };

    // Backtracking over the box [0, N]^m with unit propagation on the
    // crossing balance s[e1] + s[e2] = s[f1] + s[f2]: once three of the four
    // arcs are known the fourth is forced, which prunes the search to the
    // solution set without changing it.
    std::vector<char> known(m, 0);
    auto rec = [&](auto&& self) -> void {
        // propagate forced arcs
        std::vector<int> forced;
        for (;;) {
            int arc = -1, value = 0;
            for (auto& aa : nd.angle_arcs) {
                int unknown = -1, cnt = 0;
                long long bal = 0;
                for (int j = 0; j < 4; ++j) {
                    int a = aa[static_cast<std::size_t>(j)];
                    long long sgn = (j % 2 == 0) ? 1 : -1;
                    if (known[a]) bal += sgn * s[a];
                    else { unknown = j; ++cnt; }
                }
                if (cnt == 0) {
                    if (bal != 0) { // contradiction
                        for (int f : forced) known[f] = 0;
                        return;
                    }
                } else if (cnt == 1 && arc < 0) {
                    arc = aa[static_cast<std::size_t>(unknown)];
                    long long sgn = (unknown % 2 == 0) ? -1 : 1;
                    long long v = sgn * bal;
                    if (v < 0 || v > N) { // out of the box
                        for (int f : forced) known[f] = 0;
                        return;
                    }
                    value = static_cast<int>(v);
                }
            }
            if (arc < 0) break;
            s[arc] = value;
            known[arc] = 1;
            forced.push_back(arc);
        }
        int pick = -1;
        for (int a = 0; a < m; ++a)
            if (!known[a]) { pick = a; break; }
        if (pick < 0) {
            bool ok = true;
            for (auto& aa : nd.angle_arcs)
                if (s[aa[0]] + s[aa[2]] != s[aa[1]] + s[aa[3]]) ok = false;
            if (ok) pull_back();
        } else {
            known[pick] = 1;
            for (int t = 0; t <= N; ++t) {
                s[pick] = t;
                self(self);
            }
            known[pick] = 0;
        }
        for (int f : forced) known[f] = 0;
    };
    rec(rec);
    std::sort(out.begin(), out.end());
    return out;
}

RegularityReport regularity_guard(const std::vector<ConePoint>& points) {
    RegularityReport rep;
    long long best_f = 0, best_n2 = 0;
    bool have = false;
    for (auto& p : points) {
        long long n2 = 0;
        for (int e : p.edge_values) n2 += 1LL * e * e;
        if (n2 == 0) continue;
        long long f = p.q2_value;
        bool smaller;
        if (!have) smaller = true;
        else if ((f < 0) != (best_f < 0)) smaller = f < 0;
        else if (f >= 0) smaller = f * f * best_n2 < best_f * best_f * n2;
        else smaller = f * f * best_n2 > best_f * best_f * n2;
        if (smaller) {
            best_f = f;
            best_n2 = n2;
            have = true;
        }
    }
    if (!have) {
        rep.c_squared = "none";
        return rep;
    }
    rep.worst_degree = best_f;
    rep.flagged = best_f <= 0;
    long long num = best_f * best_f, den = best_n2;
    long long g = std::gcd(num, den);
    if (g > 0) {
        num /= g;
        den /= g;
    }
    std::ostringstream os;
    if (best_f < 0) os << "-";
    os << num << "/" << den;
    rep.c_squared = os.str();
    return rep;
}

} // namespace qtails
