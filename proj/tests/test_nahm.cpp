#include <algorithm>
#include <map>
#include <vector>

#include "doctest.h"
#include "qtails/nahm.hpp"

using namespace qtails;

namespace {

const char* TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const char* FIG8 = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";

NahmData data_for(const char* pd, bool mirrored) {
    return nahm_data(faces(parse_pd(pd), mirrored));
}

// Exhaustive box scan: every integer point with nonnegative edge values and
// degree <= N.  The box [-2N, 2N]^v is wide enough for the small diagrams
// used here because every variable is within two arcs of the pinned face.
std::vector<std::vector<int>> brute_points(const NahmData& nd, int N) {
    std::vector<std::vector<int>> out;
    std::vector<int> lambda(nd.n_vars, 0);
    auto rec = [&](auto&& self, int k) -> void {
        if (k == nd.n_vars) {
            for (std::size_t a = 0; a < nd.edge_rows.size(); ++a)
                if (nd.edge_value(static_cast<int>(a), lambda) < 0) return;
            long long two = nd.q_plus_l_2x(lambda);
            if (two % 2 != 0 || two / 2 > N) return;
            out.push_back(lambda);
            return;
        }
        for (int t = -2 * N; t <= 2 * N; ++t) {
            lambda[k] = t;
            self(self, k + 1);
        }
        lambda[k] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> lambdas_of(const std::vector<ConePoint>& pts) {
    std::vector<std::vector<int>> out;
    for (auto& p : pts) out.push_back(p.lambda);
    std::sort(out.begin(), out.end());
    return out;
}

// Direct series evaluation of the admissible-point sum times (q;q)_inf^c.
QSeries slow_phi0(const NahmData& nd, int N) {
    const expq_t T = 4 * (N + 1);
    std::map<int, QSeries> inv_poch_cache;
    auto inv_poch = [&](int k) -> const QSeries& {
        auto it = inv_poch_cache.find(k);
        if (it == inv_poch_cache.end())
            it = inv_poch_cache.emplace(k, pochhammer(4, k, T).inverse_unit()).first;
        return it->second;
    };
    QSeries total = QSeries::zero(T);
    for (auto& p : enumerate_adm_collect(nd, N)) {
        QSeries term = QSeries::monomial(p.sign, 4 * p.q2_value, T);
        for (int e : p.edge_values) term = term * inv_poch(e);
        total = total + term;
    }
    QSeries euler = euler_function(T);
    for (int i = 0; i < nd.c; ++i) total = total * euler;
    return total * pochhammer(4, 1, T);
}

} // namespace

TEST_CASE("cone enumeration agrees with an exhaustive box scan") {
    for (const char* pd : {TREFOIL, FIG8}) {
        for (bool mir : {false, true}) {
            NahmData nd = data_for(pd, mir);
            const int N = pd == FIG8 ? 4 : 6;
            auto pts = enumerate_adm_collect(nd, N);
            CHECK(lambdas_of(pts) == brute_points(nd, N));
            // reported degrees, edges and signs are consistent
            for (auto& p : pts) {
                CHECK(nd.q_plus_l_2x(p.lambda) == 2 * p.q2_value);
                CHECK(p.sign == nd.sign_of(p.lambda));
                for (std::size_t a = 0; a < p.edge_values.size(); ++a)
                    CHECK(p.edge_values[a] == nd.edge_value(static_cast<int>(a), p.lambda));
            }
        }
    }
}

TEST_CASE("only the origin sits at degree zero") {
    NahmData nd = data_for(FIG8, false);
    auto pts = enumerate_adm_collect(nd, 0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].lambda == std::vector<int>(nd.n_vars, 0));
    CHECK(pts[0].sign == 1);
}

TEST_CASE("point cap raises an error") {
    NahmData nd = data_for(FIG8, false);
    EnumOptions opts;
    opts.max_points = 3;
    CHECK_THROWS_AS(enumerate_adm_collect(nd, 10, opts), BoundTooLarge);
}

TEST_CASE("fast tail evaluation matches the direct series sum") {
    for (const char* pd : {TREFOIL, FIG8}) {
        for (bool mir : {false, true}) {
            NahmData nd = data_for(pd, mir);
            CHECK(phi0(nd, 12) == slow_phi0(nd, 12));
        }
    }
}

TEST_CASE("figure-eight tail is the euler function") {
    LinkDiagram d = parse_pd(FIG8);
    const long long N = 30;
    for (bool mir : {false, true}) {
        QSeries tail = phi0(nahm_data(faces(d, mir)), N);
        CHECK(tail == euler_function(4 * (N + 1)));
    }
}

TEST_CASE("trefoil tails: trivial on one side, euler on the other") {
    LinkDiagram d = parse_pd(TREFOIL);
    const long long N = 25;
    QSeries t_plain = phi0(nahm_data(faces(d, false)), N);
    QSeries t_mirror = phi0(nahm_data(faces(d, true)), N);
    QSeries one = QSeries::one();
    QSeries euler = euler_function(4 * (N + 1));
    bool plain_trivial = t_plain.agrees_with(one, t_plain.trunc_q()) && t_mirror == euler;
    bool mirror_trivial = t_mirror.agrees_with(one, t_mirror.trunc_q()) && t_plain == euler;
    CHECK(plain_trivial != mirror_trivial);
    // pin the orientation convention: the diagram with writhe -3 carries the
    // euler-function tail on the default coloring
    CHECK(mirror_trivial);
}

TEST_CASE("threaded evaluation is identical") {
    NahmData nd = data_for(FIG8, false);
    EnumOptions two;
    two.threads = 2;
    CHECK(phi0(nd, 20) == phi0(nd, 20, two));
}

TEST_CASE("centered edge states biject with admissible colorings") {
    for (const char* pd : {TREFOIL, FIG8}) {
        NahmData nd = data_for(pd, false);
        auto centered = centered_state_oracle(nd, 2);
        // every centered state pulls back to a distinct coloring
        CHECK(std::adjacent_find(centered.begin(), centered.end()) == centered.end());
        // colorings with degree <= 2 all have edge values <= 2, so they must
        // appear among the pulled-back states
        auto pts = enumerate_adm_collect(nd, 2);
        for (auto& p : pts) {
            for (int e : p.edge_values) CHECK(e <= 2);
            CHECK(std::binary_search(centered.begin(), centered.end(), p.lambda));
        }
        // and conversely the pulled-back states of low degree are admissible
        auto adm = lambdas_of(enumerate_adm_collect(nd, 40));
        for (auto& lam : centered)
            CHECK(std::binary_search(adm.begin(), adm.end(), lam));
    }
}

TEST_CASE("regularity guard reports a positive constant for knot data") {
    NahmData nd = data_for(FIG8, false);
    auto rep = regularity_guard(enumerate_adm_collect(nd, 10));
    CHECK_FALSE(rep.flagged);
    CHECK(rep.worst_degree >= 1);
    CHECK(rep.c_squared.find('/') != std::string::npos);
}

TEST_CASE("generic evaluator reproduces classical single-variable sums") {
    const long long N = 40;
    const expq_t T = 4 * (N + 1);

    // sum q^{n^2} / (q;q)_n
    GenericNahmSpec rr;
    rr.r = 1;
    rr.A2 = {{4}};
    rr.b2 = {0};
    rr.a = {0};
    rr.N = N;
    QSeries lhs = generic_nahm(rr);
    QSeries rhs = QSeries::zero(T);
    for (long long n = 0; n * n <= N; ++n)
        rhs = rhs + QSeries::monomial(1, 4 * n * n, T) * pochhammer(4, n, T).inverse_unit();
    CHECK(lhs == rhs.truncated(lhs.trunc_q()));

    // sum q^n / (q;q)_n = 1 / (q;q)_inf
    GenericNahmSpec eul;
    eul.r = 1;
    eul.A2 = {{0}};
    eul.b2 = {2};
    eul.a = {0};
    eul.N = N;
    CHECK(generic_nahm(eul) == euler_function(T).inverse_unit());
}

TEST_CASE("generic evaluator flags nonpositive growth") {
    GenericNahmSpec bad;
    bad.r = 1;
    bad.A2 = {{-4}};
    bad.b2 = {0};
    bad.a = {0};
    bad.N = 10;
    CHECK_THROWS_AS(generic_nahm(bad), RegularityViolation);
}

TEST_CASE("edge-state change of variables reproduces the tail sum") {
    const long long N = 16;
    for (const char* pd : {TREFOIL, FIG8}) {
        NahmData nd = data_for(pd, false);
        GenericNahmSpec g = nahm_to_generic(nd, N);
        QSeries bare = generic_nahm(g);
        QSeries withe = bare * pochhammer(4, 1, 4 * (N + 1));
        QSeries euler = euler_function(4 * (N + 1));
        for (int i = 0; i < nd.c; ++i) withe = withe * euler;
        CHECK(withe == phi0(nd, N));
    }
}
