#include "minkowski/minkowski.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "criterion.hpp"
#include "dataset_io.hpp"
#include "errors.hpp"
#include "fusion_ring.hpp"
#include "oracle.hpp"
#include "search.hpp"

struct mk_ring {
    const mink::FusionRing* ring;
};

struct mk_certificate {
    mink::Certificate cert;
};

struct mk_dataset {
    mink::Dataset data;
    std::vector<mk_ring> ring_handles;
    std::vector<mk_certificate> cert_handles;
};

struct mk_scan_report {
    mink::ScanReport report;
    std::vector<mk_certificate> cert_handles;          // one per certified outcome
    std::vector<const mk_certificate*> cert_by_index;  // parallel to outcomes
};

struct mk_square {
    mink::CommutingSquareSpec spec;
};

namespace {

thread_local std::string t_last_error;

mk_status to_status(mink::errc c) {
    switch (c) {
        case mink::errc::invalid_argument: return MK_ERROR_INVALID_ARGUMENT;
        case mink::errc::parse: return MK_ERROR_PARSE;
        case mink::errc::validation: return MK_ERROR_VALIDATION;
        case mink::errc::numeric: return MK_ERROR_NUMERIC;
        case mink::errc::io: return MK_ERROR_IO;
        case mink::errc::internal: return MK_ERROR_INTERNAL;
    }
    return MK_ERROR_INTERNAL;
}

mk_status fail(mk_status s, const std::string& msg) {
    t_last_error = msg;
    return s;
}

template <typename F>
mk_status guard(F&& f) {
    try {
        f();
        t_last_error.clear();
        return MK_OK;
    } catch (const mink::Error& e) {
        t_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return MK_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return MK_ERROR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) return nullptr;
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::string read_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw mink::Error(mink::errc::io,
                          std::string("cannot open ") + (path ? path : "(null)"));
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad())
        throw mink::Error(mink::errc::io, std::string("read failed on ") + path);
    return os.str();
}

mk_dataset* wrap_dataset(mink::Dataset&& data) {
    auto* ds = new mk_dataset{std::move(data), {}, {}};
    ds->ring_handles.reserve(ds->data.rings.size());
    for (const auto& rec : ds->data.rings)
        ds->ring_handles.push_back(mk_ring{&rec.ring});
    ds->cert_handles.reserve(ds->data.certificates.size());
    for (const auto& c : ds->data.certificates)
        ds->cert_handles.push_back(mk_certificate{c});
    return ds;
}

mk_scan_report* wrap_report(mink::ScanReport&& rep) {
    auto* h = new mk_scan_report{std::move(rep), {}, {}};
    std::size_t certified = 0;
    for (const auto& o : h->report.outcomes)
        if (o.certificate) ++certified;
    h->cert_handles.reserve(certified); // no reallocation after this
    h->cert_by_index.reserve(h->report.outcomes.size());
    for (const auto& o : h->report.outcomes) {
        if (o.certificate) {
            h->cert_handles.push_back(mk_certificate{*o.certificate});
            h->cert_by_index.push_back(&h->cert_handles.back());
        } else {
            h->cert_by_index.push_back(nullptr);
        }
    }
    return h;
}

mink::SearchConfig to_config(const mk_search_config* c, int* threads) {
    mink::SearchConfig cfg;
    *threads = 1;
    if (!c) return cfg;
    cfg.seed = c->seed;
    cfg.restarts = c->restarts;
    cfg.iterations = c->iterations;
    cfg.step = c->step;
    cfg.delta = c->delta;
    cfg.invp_min = c->invp_min;
    cfg.violation_margin = c->margin;
    cfg.grid_fallback = c->grid_fallback != 0;
    *threads = c->threads > 1 ? c->threads : 1;
    if (c->triple_count > 0 && !c->triples)
        throw mink::Error(mink::errc::invalid_argument,
                          "triple_count > 0 with null triples");
    for (std::size_t t = 0; t < c->triple_count; ++t) {
        const int i = c->triples[3 * t], j = c->triples[3 * t + 1],
                  k = c->triples[3 * t + 2];
        if (i < 1 || j < 1 || k < 1)
            throw mink::Error(mink::errc::invalid_argument,
                              "triple indices are 1-based");
        cfg.triples.push_back({static_cast<std::size_t>(i - 1),
                               static_cast<std::size_t>(j - 1),
                               static_cast<std::size_t>(k - 1)});
    }
    return cfg;
}

} // namespace

extern "C" {

const char* mk_version(void) { return "0.1.0"; }

const char* mk_last_error(void) { return t_last_error.c_str(); }

void mk_string_free(char* s) { std::free(s); }

/* ---------- datasets and rings ---------- */

mk_status mk_dataset_open(const char* path, mk_dataset** out) {
    if (!path || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = wrap_dataset(mink::parse_dataset(read_file(path))); });
}

mk_status mk_dataset_parse(const char* text, mk_dataset** out) {
    if (!text || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = wrap_dataset(mink::parse_dataset(text)); });
}

void mk_dataset_free(mk_dataset* ds) { delete ds; }

size_t mk_dataset_size(const mk_dataset* ds) {
    return ds ? ds->data.rings.size() : 0;
}

size_t mk_dataset_certificate_count(const mk_dataset* ds) {
    return ds ? ds->cert_handles.size() : 0;
}

const mk_certificate* mk_dataset_certificate(const mk_dataset* ds, size_t index) {
    if (!ds || index >= ds->cert_handles.size()) return nullptr;
    return &ds->cert_handles[index];
}

const mk_ring* mk_dataset_ring(const mk_dataset* ds, size_t index) {
    if (!ds || index >= ds->ring_handles.size()) return nullptr;
    return &ds->ring_handles[index];
}

const mk_ring* mk_dataset_find(const mk_dataset* ds, const char* label) {
    if (!ds || !label) return nullptr;
    for (std::size_t i = 0; i < ds->ring_handles.size(); ++i)
        if (ds->ring_handles[i].ring->label() == label)
            return &ds->ring_handles[i];
    return nullptr;
}

mk_status mk_dataset_to_json(const mk_dataset* ds, char** out) {
    if (!ds || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = dup_string(mink::serialize_dataset_json(ds->data)); });
}

const char* mk_ring_label(const mk_ring* r) {
    return r ? r->ring->label().c_str() : "";
}

int mk_ring_rank(const mk_ring* r) {
    return r ? static_cast<int>(r->ring->rank()) : 0;
}

int mk_ring_max_multiplicity(const mk_ring* r) {
    return r ? r->ring->max_multiplicity() : 0;
}

mk_status mk_ring_structure_constant(const mk_ring* r, int i, int j, int k,
                                     long long* out) {
    if (!r || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    const int s = static_cast<int>(r->ring->rank());
    if (i < 1 || j < 1 || k < 1 || i > s || j > s || k > s)
        return fail(MK_ERROR_INVALID_ARGUMENT, "index out of range (1-based)");
    *out = r->ring->mult(static_cast<std::size_t>(i - 1),
                         static_cast<std::size_t>(j - 1),
                         static_cast<std::size_t>(k - 1));
    t_last_error.clear();
    return MK_OK;
}

mk_status mk_ring_validate(const mk_ring* r, int* valid,
                           char** first_violation) {
    if (!r || !valid) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    if (first_violation) *first_violation = nullptr;
    return guard([&] {
        mink::ValidationReport rep = mink::validate(*r->ring);
        *valid = rep.ok() ? 1 : 0;
        if (!rep.ok() && first_violation)
            *first_violation = dup_string(rep.violations.front().message);
    });
}

mk_status mk_ring_dimensions(const mk_ring* r, double* dims, double* residual) {
    if (!r || !dims) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mink::DimVector dv = mink::pf_dimensions(*r->ring);
        for (std::size_t i = 0; i < dv.dims.size(); ++i) dims[i] = dv.dims[i];
        if (residual) *residual = dv.residual;
    });
}

mk_status mk_ring_dual(const mk_ring* r, int* dual) {
    if (!r || !dual) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        for (std::size_t i = 0; i < r->ring->rank(); ++i)
            dual[i] = static_cast<int>(mink::dual_of(*r->ring, i)) + 1;
    });
}

mk_status mk_cat_sides(const mk_ring* r, int i, int j, int k, const double* a,
                       double p, double* lhs, double* rhs, double* ratio) {
    if (!r || !a) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    const int s = static_cast<int>(r->ring->rank());
    if (i < 1 || j < 1 || k < 1 || i > s || j > s || k > s)
        return fail(MK_ERROR_INVALID_ARGUMENT, "index out of range (1-based)");
    return guard([&] {
        mink::DimVector dv = mink::pf_dimensions(*r->ring);
        mink::TripleEvaluation ev = mink::cat_sides(
            *r->ring, dv, static_cast<std::size_t>(i - 1),
            static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1),
            std::span<const double>(a, static_cast<std::size_t>(s)), p);
        if (lhs) *lhs = ev.lhs;
        if (rhs) *rhs = ev.rhs;
        if (ratio) *ratio = ev.ratio;
    });
}

/* ---------- search ---------- */

void mk_search_config_init(mk_search_config* cfg) {
    if (!cfg) return;
    mink::SearchConfig d;
    cfg->seed = d.seed;
    cfg->restarts = d.restarts;
    cfg->iterations = d.iterations;
    cfg->step = d.step;
    cfg->delta = d.delta;
    cfg->invp_min = d.invp_min;
    cfg->margin = d.violation_margin;
    cfg->grid_fallback = d.grid_fallback ? 1 : 0;
    cfg->threads = 1;
    cfg->triples = nullptr;
    cfg->triple_count = 0;
}

mk_status mk_scan_ring(const mk_ring* r, const mk_search_config* cfg,
                       mk_scan_report** out) {
    if (!r || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        int threads = 1;
        mink::SearchConfig c = to_config(cfg, &threads);
        std::vector<mink::FusionRing> rings{*r->ring};
        *out = wrap_report(mink::scan_dataset(rings, c, threads));
    });
}

mk_status mk_scan_dataset(const mk_dataset* ds, const mk_search_config* cfg,
                          mk_scan_report** out) {
    if (!ds || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        int threads = 1;
        mink::SearchConfig c = to_config(cfg, &threads);
        std::vector<mink::FusionRing> rings;
        rings.reserve(ds->data.rings.size());
        for (const auto& rec : ds->data.rings) rings.push_back(rec.ring);
        *out = wrap_report(mink::scan_dataset(rings, c, threads));
    });
}

void mk_scan_report_free(mk_scan_report* rep) { delete rep; }

size_t mk_scan_report_size(const mk_scan_report* rep) {
    return rep ? rep->report.outcomes.size() : 0;
}

long long mk_scan_report_excluded(const mk_scan_report* rep) {
    return rep ? mink::total_excluded(rep->report) : 0;
}

const char* mk_scan_report_status(const mk_scan_report* rep, size_t index) {
    if (!rep || index >= rep->report.outcomes.size()) return "";
    return mink::ring_status_name(rep->report.outcomes[index].status);
}

const char* mk_scan_report_ring(const mk_scan_report* rep, size_t index) {
    if (!rep || index >= rep->report.outcomes.size()) return "";
    return rep->report.outcomes[index].label.c_str();
}

double mk_scan_report_best_ratio(const mk_scan_report* rep, size_t index) {
    if (!rep || index >= rep->report.outcomes.size())
        return std::numeric_limits<double>::quiet_NaN();
    return rep->report.outcomes[index].best_ratio;
}

const char* mk_scan_report_detail(const mk_scan_report* rep, size_t index) {
    if (!rep || index >= rep->report.outcomes.size()) return "";
    return rep->report.outcomes[index].detail.c_str();
}

const mk_certificate* mk_scan_report_certificate(const mk_scan_report* rep,
                                                 size_t index) {
    if (!rep || index >= rep->cert_by_index.size()) return nullptr;
    return rep->cert_by_index[index];
}

mk_status mk_scan_report_render(const mk_scan_report* rep, const char* format,
                                char** out) {
    if (!rep || !format || !out)
        return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        mink::ReportFormat f = mink::report_format_from_name(format);
        *out = dup_string(mink::render_report(rep->report, f));
    });
}

/* ---------- certificates ---------- */

mk_status mk_certificate_parse(const char* json, mk_certificate** out) {
    if (!json || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new mk_certificate{mink::certificate_from_json(json)};
    });
}

void mk_certificate_free(mk_certificate* c) { delete c; }

const char* mk_certificate_ring(const mk_certificate* c) {
    return c ? c->cert.ring_label.c_str() : "";
}

size_t mk_certificate_rank(const mk_certificate* c) {
    return c ? c->cert.a.size() : 0;
}

void mk_certificate_triple(const mk_certificate* c, int* i, int* j, int* k) {
    if (!c) return;
    if (i) *i = static_cast<int>(c->cert.triple[0]) + 1;
    if (j) *j = static_cast<int>(c->cert.triple[1]) + 1;
    if (k) *k = static_cast<int>(c->cert.triple[2]) + 1;
}

double mk_certificate_inv_p(const mk_certificate* c) {
    return c ? c->cert.inv_p : 0.0;
}

double mk_certificate_lhs(const mk_certificate* c) {
    return c ? c->cert.lhs : 0.0;
}

double mk_certificate_rhs(const mk_certificate* c) {
    return c ? c->cert.rhs : 0.0;
}

double mk_certificate_ratio(const mk_certificate* c) {
    return c ? c->cert.ratio : 0.0;
}

mk_status mk_certificate_weights(const mk_certificate* c, double* a, size_t len) {
    if (!c || !a) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    if (len < c->cert.a.size())
        return fail(MK_ERROR_INVALID_ARGUMENT, "weight buffer too small");
    for (std::size_t n = 0; n < c->cert.a.size(); ++n) a[n] = c->cert.a[n];
    t_last_error.clear();
    return MK_OK;
}

mk_status mk_certificate_to_json(const mk_certificate* c, char** out) {
    if (!c || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = dup_string(mink::certificate_to_json(c->cert)); });
}

mk_status mk_certificate_verify(const mk_ring* r, const mk_certificate* c,
                                double margin, int* verified) {
    if (!r || !c || !verified)
        return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        const mink::Certificate& cert = c->cert;
        const std::size_t s = r->ring->rank();
        if (cert.a.size() != s)
            throw mink::Error(mink::errc::invalid_argument,
                              "certificate weight count does not match ring rank");
        for (std::size_t t = 0; t < 3; ++t)
            if (cert.triple[t] >= s)
                throw mink::Error(mink::errc::invalid_argument,
                                  "certificate triple out of range for ring");
        if (!(cert.inv_p > 0.0 && cert.inv_p <= 1.0))
            throw mink::Error(mink::errc::invalid_argument,
                              "certificate 1/p must lie in (0, 1]");
        mink::DimVector dv = mink::pf_dimensions(*r->ring);
        mink::TripleEvaluation ev =
            mink::cat_sides(*r->ring, dv, cert.triple[0], cert.triple[1],
                            cert.triple[2], cert.a, 1.0 / cert.inv_p);
        auto close = [](double got, double want) {
            return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want));
        };
        *verified = (ev.ratio < 1.0 - margin && close(ev.lhs, cert.lhs) &&
                     close(ev.rhs, cert.rhs))
                        ? 1
                        : 0;
    });
}

/* ---------- commuting-square data ---------- */

mk_status mk_square_open(const char* path, mk_square** out) {
    if (!path || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        mink::CommutingSquareSpec spec = mink::parse_square_json(read_file(path));
        mink::validate_square(spec);
        *out = new mk_square{std::move(spec)};
    });
}

mk_status mk_square_parse(const char* text, mk_square** out) {
    if (!text || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        mink::CommutingSquareSpec spec = mink::parse_square_json(text);
        mink::validate_square(spec);
        *out = new mk_square{std::move(spec)};
    });
}

void mk_square_free(mk_square* sq) { delete sq; }

const char* mk_square_label(const mk_square* sq) {
    return sq ? sq->spec.label.c_str() : "";
}

void mk_square_shape(const mk_square* sq, int* n00, int* n01, int* n10,
                     int* n11) {
    if (!sq) return;
    if (n00) *n00 = static_cast<int>(sq->spec.t00_01.rows());
    if (n01) *n01 = static_cast<int>(sq->spec.t00_01.cols());
    if (n10) *n10 = static_cast<int>(sq->spec.t00_10.cols());
    if (n11) *n11 = static_cast<int>(sq->spec.t10_11.cols());
}

mk_status mk_square_traces(const mk_square* sq, double* v00, double* v01,
                           double* v10, double* v11) {
    if (!sq) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mink::InducedTraces tr = mink::induced_traces(sq->spec);
        auto copy = [](double* dst, const Eigen::VectorXd& src) {
            if (dst)
                for (Eigen::Index i = 0; i < src.size(); ++i) dst[i] = src(i);
        };
        copy(v00, tr.v00);
        copy(v01, tr.v01);
        copy(v10, tr.v10);
        copy(v11, sq->spec.v11);
    });
}

mk_status mk_square_to_json(const mk_square* sq, char** out) {
    if (!sq || !out) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = dup_string(mink::serialize_square_json(sq->spec)); });
}

mk_status mk_cs_sides(const mk_square* sq, int row, const double* a, double p,
                      double* lhs, double* rhs, double* ratio) {
    if (!sq || !a) return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    const int n00 = static_cast<int>(sq->spec.t00_01.rows());
    if (row < 1 || row > n00)
        return fail(MK_ERROR_INVALID_ARGUMENT, "row out of range (1-based)");
    return guard([&] {
        mink::TripleEvaluation ev = mink::cs_sides(
            sq->spec, static_cast<std::size_t>(row - 1),
            std::span<const double>(
                a, static_cast<std::size_t>(sq->spec.t10_11.cols())),
            p);
        if (lhs) *lhs = ev.lhs;
        if (rhs) *rhs = ev.rhs;
        if (ratio) *ratio = ev.ratio;
    });
}

mk_status mk_square_variant(const mk_square* sq, int index, mk_square** out,
                            int* applicable, char** note) {
    if (!sq || !out || !applicable)
        return fail(MK_ERROR_INVALID_ARGUMENT, "null argument");
    if (index < 0 || index > 3)
        return fail(MK_ERROR_INVALID_ARGUMENT, "variant index must be 0..3");
    *out = nullptr;
    *applicable = 0;
    if (note) *note = nullptr;
    return guard([&] {
        std::vector<mink::SquareVariant> vs = mink::transpose_variants(sq->spec);
        mink::SquareVariant& v = vs[static_cast<std::size_t>(index)];
        if (note) *note = dup_string(v.note);
        if (v.applicable) {
            *applicable = 1;
            *out = new mk_square{std::move(v.spec)};
        }
    });
}

/* ---------- operator-level verification ---------- */

mk_status mk_oracle_verify(long long trials, uint64_t seed, char** summary,
                           long long* failures) {
    if (summary) *summary = nullptr;
    return guard([&] {
        std::vector<mink::SuiteResult> res = mink::run_oracle_suites(trials, seed);
        if (summary) *summary = dup_string(mink::oracle_summary(res));
        if (failures) *failures = mink::total_failures(res);
    });
}

} // extern "C"
