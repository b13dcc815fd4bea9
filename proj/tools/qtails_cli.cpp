#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtails/identities.hpp"
#include "qtails/jones.hpp"
#include "qtails/knot_table.hpp"
#include "qtails/nahm.hpp"
#include "qtails/stability.hpp"

using namespace qtails;
using nlohmann::json;

namespace {

constexpr int EXIT_VERIFY_FAIL = 1;
constexpr int EXIT_INPUT_ERROR = 2;

struct Options {
    std::string knot, pd, braid, spec_path;
    long long order = 50;
    long long n = 1;
    long long n_max = 8;
    int k = 0;
    std::string format = "text";
    std::string mirror = "auto";
    int threads = 1;
};

void require_one_input(const std::vector<const std::string*>& given) {
    int count = 0;
    for (const auto* s : given) count += !s->empty();
    if (count != 1) throw ParseError("exactly one input source is required");
}

LinkDiagram diagram_from(const Options& o) {
    require_one_input({&o.knot, &o.pd});
    return parse_pd(o.knot.empty() ? o.pd : knot_lookup(o.knot).pd);
}

BraidWord braid_from(const Options& o) {
    require_one_input({&o.knot, &o.braid});
    if (!o.braid.empty()) return parse_braid(o.braid);
    const auto& rec = knot_lookup(o.knot);
    if (rec.braid.empty()) throw ParseError("no braid word on file for " + o.knot);
    return parse_braid(rec.braid);
}

bool use_mirrored(const Options& o) {
    if (o.mirror == "auto" || o.mirror == "plus") return false;
    if (o.mirror == "minus") return true;
    throw ParseError("--mirror must be auto, plus or minus");
}

void print_series(const QSeries& s, const Options& o) {
    if (o.format == "json")
        std::cout << s.to_json() << "\n";
    else
        std::cout << s.to_string() << "\n";
}

int cmd_jones(const Options& o) {
    print_series(jones_braid(braid_from(o), static_cast<int>(o.n)), o);
    return 0;
}

int cmd_tail(const Options& o, bool first_correction) {
    NahmData nd = nahm_data(faces(diagram_from(o), use_mirrored(o)));
    EnumOptions opts;
    opts.threads = o.threads;
    QSeries s = first_correction ? phi1(nd, o.order, opts) : phi0(nd, o.order, opts);
    print_series(s.truncated(4 * (o.order + 1)), o);
    return 0;
}

int cmd_verify(const Options& o) {
    if (o.k < 0 || o.k > 1)
        throw OutOfRange("verification supports k = 0 or 1 (exact limit series)");
    BraidWord b = braid_from(o);
    LinkDiagram d = diagram_from(o); // same --knot selects both
    long long order = std::max(o.order, o.n_max + 1);
    expq_t T = 4 * (order + 1);
    auto seq = hat_jones_sequence(b, o.n_max, T);
    NahmData nd = nahm_data(faces(d, use_mirrored(o)));
    EnumOptions opts;
    opts.threads = o.threads;
    std::vector<QSeries> phis = {phi0(nd, order, opts).truncated(T)};
    if (o.k == 1) phis.push_back(phi1(nd, order, opts).truncated(T));
    StabilityReport rep = verify_kstability(phis, seq, o.n_max, o.k);
    if (o.format == "json") {
        std::cout << rep.to_json() << "\n";
    } else {
        std::cout << (rep.pass ? "pass" : "FAIL") << " (k=" << rep.k << ", n<=" << o.n_max
                  << ", residual valuations:";
        for (long long v : rep.residual_valuations) std::cout << " " << v;
        std::cout << ")\n";
    }
    return rep.pass ? 0 : EXIT_VERIFY_FAIL;
}

int cmd_identities(const Options& o) {
    bool micro = true;
    micro = micro && h_series(1, false, 4 * 61).is_zero();
    micro = micro && h_series(2, true, 4 * 61).agrees_with(QSeries::one(), 4 * 61);
    micro = micro && (h_series(3, false, 4 * 61) == euler_function(4 * 61));
    for (long long b : {2, 3, 4}) micro = micro && theta_factorization_check(b, 4 * 61);
    for (long long b1 : {0, 1, 3})
        for (long long b2 : {0, 1, 3})
            micro = micro && durfee_factor(b1, b2, 4 * 61).agrees_with(QSeries::one(), 4 * 61);
    TableReport rep = knot_table_suite(o.order);
    bool pass = micro && rep.all_pass;
    if (o.format == "json") {
        std::cout << "{\"micro_pass\":" << (micro ? "true" : "false")
                  << ",\"table\":" << rep.to_json() << "}\n";
    } else {
        std::cout << "micro-suite: " << (micro ? "pass" : "FAIL") << "\n" << rep.to_text();
    }
    return pass ? 0 : EXIT_VERIFY_FAIL;
}

int cmd_nahm_generic(const Options& o) {
    require_one_input({&o.spec_path});
    json j;
    if (o.spec_path == "-") {
        j = json::parse(std::cin, nullptr, true, true);
    } else {
        std::ifstream in(o.spec_path);
        if (!in) throw ParseError("cannot open " + o.spec_path);
        j = json::parse(in, nullptr, true, true);
    }
    GenericNahmSpec spec;
    try {
        spec.r = j.at("r").get<int>();
        spec.A2 = j.at("A2").get<std::vector<std::vector<long long>>>();
        spec.b2 = j.at("b2").get<std::vector<long long>>();
        spec.a = j.value("a", std::vector<int>(static_cast<std::size_t>(spec.r), 0));
        spec.cone = j.value("cone", std::vector<std::vector<long long>>{});
        spec.N = j.value("N", o.order);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad generic spec: ") + e.what());
    }
    EnumOptions opts;
    opts.threads = o.threads;
    print_series(generic_nahm(spec, opts), o);
    return 0;
}

int cmd_info(const Options& o) {
    auto row_json = [](const KnotRecord& r) {
        json j;
        j["name"] = r.name;
        j["construction"] = r.construction;
        j["pd"] = r.pd;
        j["braid"] = r.braid;
        j["c_minus"] = r.c_minus;
        j["c_plus"] = r.c_plus;
        j["signature"] = r.signature;
        j["tail"] = r.tail_expr;
        j["head"] = r.head_expr;
        j["status"] = r.proven ? "proven" : "conjectural";
        return j;
    };
    if (!o.knot.empty()) {
        const auto& r = knot_lookup(o.knot);
        if (o.format == "json") {
            std::cout << row_json(r).dump() << "\n";
        } else {
            std::cout << r.name << "  c-=" << r.c_minus << " c+=" << r.c_plus
                      << " sigma=" << r.signature << "  tail=" << (r.tail_expr.empty() ? "?" : r.tail_expr)
                      << " head=" << (r.head_expr.empty() ? "?" : r.head_expr) << "  "
                      << (r.proven ? "proven" : "conjectural") << "\n"
                      << "  pd: " << r.pd << "\n"
                      << "  braid: " << (r.braid.empty() ? "(none)" : r.braid) << "\n";
        }
        return 0;
    }
    if (o.format == "json") {
        json all = json::array();
        for (const auto& r : knot_table()) all.push_back(row_json(r));
        std::cout << all.dump() << "\n";
    } else {
        for (const auto& r : knot_table())
            std::cout << r.name << (r.braid.empty() ? "" : " *") << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-series tails of alternating knots"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c, bool with_input) {
        c->add_option("--format", o.format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        c->add_option("--threads", o.threads, "internal parallelism (semantics unchanged)")
            ->check(CLI::PositiveNumber);
        if (with_input) {
            c->add_option("--knot", o.knot, "built-in knot name (see the info verb)");
            c->add_option("--pd", o.pd, "inline PD code");
            c->add_option("--braid", o.braid, "inline braid word \"w:<k> i1 i2 ...\"");
        }
    };

    auto* jones = app.add_subcommand("jones", "colored Jones polynomial of a braid closure");
    add_common(jones, true);
    jones->add_option("--n", o.n, "color (0 = trivial)")->capture_default_str();

    auto* tail = app.add_subcommand("tail", "stable tail series of an alternating diagram");
    add_common(tail, true);
    tail->add_option("--order", o.order, "truncation order in q")->capture_default_str();
    tail->add_option("--mirror", o.mirror, "coloring choice: auto, plus or minus")
        ->capture_default_str();

    auto* phi1v = app.add_subcommand("phi1", "tail plus the first stable correction");
    add_common(phi1v, true);
    phi1v->add_option("--order", o.order, "truncation order in q")->capture_default_str();
    phi1v->add_option("--mirror", o.mirror, "coloring choice: auto, plus or minus")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "stability congruences of the state sum");
    add_common(verify, true);
    verify->add_option("--k", o.k, "stability order (0 or 1)")->capture_default_str();
    verify->add_option("--nmax", o.n_max, "largest color")->capture_default_str();
    verify->add_option("--order", o.order, "series order (raised to nmax+1 if lower)")
        ->capture_default_str();
    verify->add_option("--mirror", o.mirror, "coloring choice: auto, plus or minus")
        ->capture_default_str();

    auto* ident = app.add_subcommand("identities", "closed-form identity suite");
    add_common(ident, false);
    ident->add_option("--order", o.order, "comparison order for the knot table suite")
        ->default_val(30);

    auto* generic = app.add_subcommand("nahm-generic", "evaluate a generalized Nahm sum");
    add_common(generic, false);
    generic->add_option("--spec", o.spec_path, "JSON spec file, or - for stdin")->required();
    generic->add_option("--order", o.order, "default order when the spec has none")
        ->capture_default_str();

    auto* info = app.add_subcommand("info", "built-in knot table");
    add_common(info, false);
    info->add_option("--knot", o.knot, "show one record instead of the list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(jones)) return cmd_jones(o);
        if (app.got_subcommand(tail)) return cmd_tail(o, false);
        if (app.got_subcommand(phi1v)) return cmd_tail(o, true);
        if (app.got_subcommand(verify)) return cmd_verify(o);
        if (app.got_subcommand(ident)) {
            if (o.order < 1 || o.order > 100) throw OutOfRange("suite order must be 1..100");
            return cmd_identities(o);
        }
        if (app.got_subcommand(generic)) return cmd_nahm_generic(o);
        if (app.got_subcommand(info)) return cmd_info(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }
    return EXIT_INPUT_ERROR;
}
