#include <doctest.h>

#include <minkowski/minkowski.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "criterion.hpp"
#include "dataset_io.hpp"
#include "fixtures.hpp"
#include "fusion_ring.hpp"
#include "search.hpp"

namespace {

struct StringOut {
    char* s = nullptr;
    ~StringOut() { mk_string_free(s); }
};

std::string demo_text() {
    mink::Dataset ds;
    ds.rings.push_back({fixtures::fibonacci(), ""});
    ds.rings.push_back({fixtures::excluded_rank4(), ""});
    ds.rings.push_back({fixtures::z_n(3), ""});
    std::ostringstream out;
    mink::serialize_dataset_text(ds, out);
    return out.str();
}

mk_dataset* parse_demo() {
    mk_dataset* ds = nullptr;
    REQUIRE(mk_dataset_parse(demo_text().c_str(), &ds) == MK_OK);
    REQUIRE(ds != nullptr);
    return ds;
}

constexpr double kInvP4 = 0.661975038859587;
const std::vector<double> kA4{0.778280214647139, 0.006040665900893,
                              0.698943990142325, 0.856127138742457};
constexpr double kRatio4 = 0.923133094619114;

} // namespace

TEST_CASE("version and error state") {
    REQUIRE(mk_version() != nullptr);
    CHECK(std::string(mk_version()) == "0.1.0");
    mk_dataset* ds = nullptr;
    CHECK(mk_dataset_parse(nullptr, &ds) == MK_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(mk_last_error()).size() > 0);
    CHECK(mk_dataset_parse("not a dataset", &ds) == MK_ERROR_PARSE);
    CHECK(mk_dataset_parse("# ok\n1", nullptr) == MK_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("datasets expose rings and round-trip through json") {
    mk_dataset* ds = parse_demo();
    CHECK(mk_dataset_size(ds) == 3);
    CHECK(mk_dataset_certificate_count(ds) == 0);

    const mk_ring* fib = mk_dataset_find(ds, "fibonacci");
    REQUIRE(fib != nullptr);
    CHECK(mk_dataset_find(ds, "missing") == nullptr);
    CHECK(mk_dataset_ring(ds, 0) == fib);
    CHECK(mk_dataset_ring(ds, 9) == nullptr);
    CHECK(std::string(mk_ring_label(fib)) == "fibonacci");
    CHECK(mk_ring_rank(fib) == 2);
    CHECK(mk_ring_max_multiplicity(fib) == 1);

    long long n = -1;
    REQUIRE(mk_ring_structure_constant(fib, 2, 2, 1, &n) == MK_OK);
    CHECK(n == 1); // x*x contains the unit
    REQUIRE(mk_ring_structure_constant(fib, 2, 2, 2, &n) == MK_OK);
    CHECK(n == 1);
    CHECK(mk_ring_structure_constant(fib, 0, 1, 1, &n) ==
          MK_ERROR_INVALID_ARGUMENT);
    CHECK(mk_ring_structure_constant(fib, 3, 1, 1, &n) ==
          MK_ERROR_INVALID_ARGUMENT);

    StringOut js;
    REQUIRE(mk_dataset_to_json(ds, &js.s) == MK_OK);
    mk_dataset* ds2 = nullptr;
    REQUIRE(mk_dataset_parse(js.s, &ds2) == MK_OK);
    CHECK(mk_dataset_size(ds2) == 3);
    mk_dataset_free(ds2);
    mk_dataset_free(ds);
}

TEST_CASE("dataset files open from disk") {
    const std::string path = "/tmp/mk_capi_demo.txt";
    {
        std::ofstream f(path);
        f << demo_text();
    }
    mk_dataset* ds = nullptr;
    REQUIRE(mk_dataset_open(path.c_str(), &ds) == MK_OK);
    CHECK(mk_dataset_size(ds) == 3);
    mk_dataset_free(ds);
    CHECK(mk_dataset_open("/tmp/mk_capi_does_not_exist.txt", &ds) ==
          MK_ERROR_IO);
}

TEST_CASE("validation and dimensions cross the boundary 1-based") {
    mk_dataset* ds = parse_demo();
    const mk_ring* fib = mk_dataset_find(ds, "fibonacci");
    int valid = 0;
    char* why = reinterpret_cast<char*>(1);
    REQUIRE(mk_ring_validate(fib, &valid, &why) == MK_OK);
    CHECK(valid == 1);
    CHECK(why == nullptr);

    double dims[2] = {0, 0};
    double residual = -1;
    REQUIRE(mk_ring_dimensions(fib, dims, &residual) == MK_OK);
    CHECK(dims[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dims[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(residual >= 0.0);
    CHECK(residual < 1e-9);

    const mk_ring* z3 = mk_dataset_find(ds, "z3");
    int dual[3] = {0, 0, 0};
    REQUIRE(mk_ring_dual(z3, dual) == MK_OK);
    CHECK(dual[0] == 1);
    CHECK(dual[1] == 3);
    CHECK(dual[2] == 2);
    mk_dataset_free(ds);

    // an invalid ring reports its first broken axiom
    mink::Dataset badset;
    badset.rings.push_back({fixtures::bad_associativity(), ""});
    std::ostringstream badtext;
    mink::serialize_dataset_text(badset, badtext);
    mk_dataset* bad = nullptr;
    REQUIRE(mk_dataset_parse(badtext.str().c_str(), &bad) == MK_OK);
    const mk_ring* r = mk_dataset_ring(bad, 0);
    StringOut msg;
    REQUIRE(mk_ring_validate(r, &valid, &msg.s) == MK_OK);
    CHECK(valid == 0);
    REQUIRE(msg.s != nullptr);
    CHECK(std::string(msg.s).find("associativity") != std::string::npos);
    mk_dataset_free(bad);
}

TEST_CASE("side evaluation matches the frozen reference point") {
    mk_dataset* ds = parse_demo();
    const mk_ring* r = mk_dataset_find(ds, "excluded-rank4");
    REQUIRE(r != nullptr);
    double lhs = 0, rhs = 0, ratio = 0;
    REQUIRE(mk_cat_sides(r, 2, 2, 2, kA4.data(), 1.0 / kInvP4, &lhs, &rhs,
                         &ratio) == MK_OK);
    CHECK(std::abs(ratio - kRatio4) < 1e-9);
    CHECK(ratio == doctest::Approx(rhs / lhs).epsilon(1e-15));
    REQUIRE(mk_cat_sides(r, 2, 2, 2, kA4.data(), 1.0 / kInvP4, nullptr, nullptr,
                         &ratio) == MK_OK);
    CHECK(mk_cat_sides(r, 0, 2, 2, kA4.data(), 2.0, &lhs, &rhs, &ratio) ==
          MK_ERROR_INVALID_ARGUMENT);
    CHECK(mk_cat_sides(r, 2, 2, 2, kA4.data(), 0.5, &lhs, &rhs, &ratio) ==
          MK_ERROR_INVALID_ARGUMENT);
    CHECK(mk_cat_sides(r, 2, 2, 2, nullptr, 2.0, &lhs, &rhs, &ratio) ==
          MK_ERROR_INVALID_ARGUMENT);
    mk_dataset_free(ds);
}

TEST_CASE("scans certify through the boundary and render reports") {
    mk_dataset* ds = parse_demo();
    const mk_ring* r = mk_dataset_find(ds, "excluded-rank4");
    mk_search_config cfg;
    mk_search_config_init(&cfg);
    CHECK(cfg.restarts == 20);
    CHECK(cfg.iterations == 1000);
    CHECK(cfg.threads == 1);
    cfg.seed = 1; // default budgets certify this ring at this seed

    mk_scan_report* rep = nullptr;
    REQUIRE(mk_scan_ring(r, &cfg, &rep) == MK_OK);
    REQUIRE(mk_scan_report_size(rep) == 1);
    CHECK(mk_scan_report_excluded(rep) == 1);
    CHECK(std::string(mk_scan_report_status(rep, 0)) == "excluded");
    CHECK(std::string(mk_scan_report_ring(rep, 0)) == "excluded-rank4");
    CHECK(mk_scan_report_best_ratio(rep, 0) < 1.0 - 1e-9);

    const mk_certificate* cert = mk_scan_report_certificate(rep, 0);
    REQUIRE(cert != nullptr);
    CHECK(std::string(mk_certificate_ring(cert)) == "excluded-rank4");
    CHECK(mk_certificate_rank(cert) == 4);
    int i = 0, j = 0, k = 0;
    mk_certificate_triple(cert, &i, &j, &k);
    CHECK(i >= 1);
    CHECK(j >= 1);
    CHECK(k >= 1);
    CHECK(i <= 4);
    double inv_p = mk_certificate_inv_p(cert);
    CHECK(inv_p > 0.0);
    CHECK(inv_p <= 1.0);
    CHECK(mk_certificate_ratio(cert) ==
          doctest::Approx(mk_certificate_rhs(cert) / mk_certificate_lhs(cert))
              .epsilon(1e-15));
    double a[4];
    REQUIRE(mk_certificate_weights(cert, a, 4) == MK_OK);
    CHECK(mk_certificate_weights(cert, a, 3) == MK_ERROR_INVALID_ARGUMENT);

    // round-trip the certificate and re-verify it on the ring
    StringOut cjson;
    REQUIRE(mk_certificate_to_json(cert, &cjson.s) == MK_OK);
    mk_certificate* parsed = nullptr;
    REQUIRE(mk_certificate_parse(cjson.s, &parsed) == MK_OK);
    int verified = 0;
    REQUIRE(mk_certificate_verify(r, parsed, 1e-9, &verified) == MK_OK);
    CHECK(verified == 1);
    REQUIRE(mk_certificate_verify(r, parsed, 0.5, &verified) == MK_OK);
    CHECK(verified == 0); // no point on this ring goes below ratio 0.5
    mk_certificate_free(parsed);
    CHECK(mk_certificate_parse("{}", &parsed) == MK_ERROR_PARSE);

    StringOut table, csv, js;
    REQUIRE(mk_scan_report_render(rep, "table", &table.s) == MK_OK);
    CHECK(std::string(table.s).find("excluded-rank4: excluded") !=
          std::string::npos);
    REQUIRE(mk_scan_report_render(rep, "csv", &csv.s) == MK_OK);
    CHECK(std::string(csv.s).find("label,rank,max_mult,status") !=
          std::string::npos);
    REQUIRE(mk_scan_report_render(rep, "json", &js.s) == MK_OK);
    CHECK(std::string(js.s).find("\"status\": \"excluded\"") !=
          std::string::npos);
    char* bad = nullptr;
    CHECK(mk_scan_report_render(rep, "yaml", &bad) == MK_ERROR_INVALID_ARGUMENT);

    mk_scan_report_free(rep);
    mk_dataset_free(ds);
}

TEST_CASE("scan output is identical across thread counts") {
    mk_dataset* ds = parse_demo();
    mk_search_config cfg;
    mk_search_config_init(&cfg);
    cfg.seed = 7;
    cfg.restarts = 3;
    cfg.iterations = 200;

    std::string renders[2];
    for (int pass = 0; pass < 2; ++pass) {
        cfg.threads = pass == 0 ? 1 : 4;
        mk_scan_report* rep = nullptr;
        REQUIRE(mk_scan_dataset(ds, &cfg, &rep) == MK_OK);
        CHECK(mk_scan_report_size(rep) == 3);
        StringOut out;
        REQUIRE(mk_scan_report_render(rep, "json", &out.s) == MK_OK);
        renders[pass] = out.s;
        mk_scan_report_free(rep);
    }
    CHECK(renders[0] == renders[1]);
    mk_dataset_free(ds);
}

TEST_CASE("triple restrictions pass through the config") {
    mk_dataset* ds = parse_demo();
    const mk_ring* r = mk_dataset_find(ds, "excluded-rank4");
    mk_search_config cfg;
    mk_search_config_init(&cfg);
    cfg.seed = 1;
    cfg.restarts = 6;
    const int triples[] = {2, 2, 2};
    cfg.triples = triples;
    cfg.triple_count = 1;

    mk_scan_report* rep = nullptr;
    REQUIRE(mk_scan_ring(r, &cfg, &rep) == MK_OK);
    REQUIRE(std::string(mk_scan_report_status(rep, 0)) == "excluded");
    const mk_certificate* cert = mk_scan_report_certificate(rep, 0);
    REQUIRE(cert != nullptr);
    int i = 0, j = 0, k = 0;
    mk_certificate_triple(cert, &i, &j, &k);
    CHECK(i == 2);
    CHECK(j == 2);
    CHECK(k == 2);
    mk_scan_report_free(rep);

    const int bad[] = {0, 1, 1};
    cfg.triples = bad;
    CHECK(mk_scan_ring(r, &cfg, &rep) == MK_ERROR_INVALID_ARGUMENT);
    mk_dataset_free(ds);
}

TEST_CASE("squares parse, evaluate, and produce variants") {
    mink::FusionRing ring = fixtures::excluded_rank4();
    mink::DimVector dims = mink::pf_dimensions(ring);
    mink::CommutingSquareSpec spec =
        mink::square_from_triple(ring, dims, 1, 1, 1);
    std::string json = mink::serialize_square_json(spec);

    mk_square* sq = nullptr;
    REQUIRE(mk_square_parse(json.c_str(), &sq) == MK_OK);
    CHECK(std::string(mk_square_label(sq)) == "excluded-rank4:(2,2,2)");
    int n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    mk_square_shape(sq, &n00, &n01, &n10, &n11);
    CHECK(n00 == 1);
    CHECK(n01 == 4);
    CHECK(n10 == 4);
    CHECK(n11 == 4);

    std::vector<double> v00(1), v11(4);
    REQUIRE(mk_square_traces(sq, v00.data(), nullptr, nullptr, v11.data()) ==
            MK_OK);
    CHECK(v00[0] > 0.0);
    for (double v : v11) CHECK(v > 0.0);

    double lhs = 0, rhs = 0, ratio = 0;
    REQUIRE(mk_cs_sides(sq, 1, kA4.data(), 1.0 / kInvP4, &lhs, &rhs, &ratio) ==
            MK_OK);
    CHECK(std::abs(ratio - kRatio4) < 1e-9); // same point, square coordinates
    CHECK(mk_cs_sides(sq, 0, kA4.data(), 2.0, &lhs, &rhs, &ratio) ==
          MK_ERROR_INVALID_ARGUMENT);
    CHECK(mk_cs_sides(sq, 2, kA4.data(), 2.0, &lhs, &rhs, &ratio) ==
          MK_ERROR_INVALID_ARGUMENT); // only one row here

    StringOut sjson;
    REQUIRE(mk_square_to_json(sq, &sjson.s) == MK_OK);
    mk_square* sq2 = nullptr;
    REQUIRE(mk_square_parse(sjson.s, &sq2) == MK_OK);
    mk_square_free(sq2);

    for (int idx : {0, 3}) {
        mk_square* var = nullptr;
        int applicable = 0;
        StringOut note;
        REQUIRE(mk_square_variant(sq, idx, &var, &applicable, &note.s) == MK_OK);
        CHECK(applicable == 1);
        REQUIRE(var != nullptr);
        mk_square_free(var);
    }
    for (int idx : {1, 2}) {
        mk_square* var = reinterpret_cast<mk_square*>(1);
        int applicable = 1;
        StringOut note;
        REQUIRE(mk_square_variant(sq, idx, &var, &applicable, &note.s) == MK_OK);
        CHECK(applicable == 0);
        CHECK(var == nullptr);
        REQUIRE(note.s != nullptr);
        CHECK(std::string(note.s).size() > 0);
    }
    mk_square* var = nullptr;
    int applicable = 0;
    CHECK(mk_square_variant(sq, 4, &var, &applicable, nullptr) ==
          MK_ERROR_INVALID_ARGUMENT);
    mk_square_free(sq);

    CHECK(mk_square_parse("{\"t00_01\": []}", &sq2) == MK_ERROR_PARSE);
}

TEST_CASE("datasets carry certificates") {
    mink::Dataset ds;
    ds.rings.push_back({fixtures::excluded_rank4(), "screening demo"});
    mink::Certificate cert;
    cert.ring_label = "excluded-rank4";
    cert.triple = {1, 1, 1};
    cert.a = kA4;
    cert.inv_p = kInvP4;
    cert.lhs = 1.0206568367251287;
    cert.rhs = 0.94220210423022432;
    cert.ratio = kRatio4;
    cert.verified = true;
    ds.certificates.push_back(cert);
    std::string json = mink::serialize_dataset_json(ds);

    mk_dataset* handle = nullptr;
    REQUIRE(mk_dataset_parse(json.c_str(), &handle) == MK_OK);
    CHECK(mk_dataset_size(handle) == 1);
    REQUIRE(mk_dataset_certificate_count(handle) == 1);
    const mk_certificate* c = mk_dataset_certificate(handle, 0);
    REQUIRE(c != nullptr);
    CHECK(std::string(mk_certificate_ring(c)) == "excluded-rank4");
    int verified = 0;
    REQUIRE(mk_certificate_verify(mk_dataset_ring(handle, 0), c, 1e-9,
                                  &verified) == MK_OK);
    CHECK(verified == 1);
    mk_dataset_free(handle);
}

TEST_CASE("the operator suites run through the C surface") {
    StringOut summary;
    long long failures = -1;
    REQUIRE(mk_oracle_verify(20, 3, &summary.s, &failures) == MK_OK);
    CHECK(failures == 0);
    REQUIRE(summary.s != nullptr);
    CHECK(std::string(summary.s).find("total failures: 0") != std::string::npos);
    CHECK(mk_oracle_verify(0, 3, nullptr, &failures) ==
          MK_ERROR_INVALID_ARGUMENT);
}
