/* C interface to the Minkowski screening library.
 *
 * Conventions:
 *   - Every index crossing this boundary (basis elements, triples, rows)
 *     is 1-based.
 *   - Functions returning mk_status set a thread-local error message on
 *     failure, readable via mk_last_error().
 *   - char** outputs are heap strings owned by the caller; release them
 *     with mk_string_free().  const char* returns are borrowed and live
 *     as long as the object they came from.
 *   - Objects returned through mk_*_free-able handles are owned by the
 *     caller; pointers obtained from a container (mk_dataset_ring,
 *     mk_scan_report_certificate, ...) are borrowed and must not be
 *     freed or used after the container is released.
 */
#ifndef MINKOWSKI_H
#define MINKOWSKI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mk_status {
    MK_OK = 0,
    MK_ERROR_INVALID_ARGUMENT = 1,
    MK_ERROR_PARSE = 2,
    MK_ERROR_VALIDATION = 3,
    MK_ERROR_NUMERIC = 4,
    MK_ERROR_IO = 5,
    MK_ERROR_INTERNAL = 6
} mk_status;

typedef struct mk_dataset mk_dataset;
typedef struct mk_ring mk_ring;
typedef struct mk_certificate mk_certificate;
typedef struct mk_scan_report mk_scan_report;
typedef struct mk_square mk_square;

const char* mk_version(void);
/* Message of the most recent failure on this thread ("" if none). */
const char* mk_last_error(void);
void mk_string_free(char* s);

/* ---------- datasets and rings ---------- */

mk_status mk_dataset_open(const char* path, mk_dataset** out);
mk_status mk_dataset_parse(const char* text, mk_dataset** out);
void mk_dataset_free(mk_dataset* ds);
size_t mk_dataset_size(const mk_dataset* ds);
size_t mk_dataset_certificate_count(const mk_dataset* ds);
const mk_certificate* mk_dataset_certificate(const mk_dataset* ds, size_t index);
const mk_ring* mk_dataset_ring(const mk_dataset* ds, size_t index);
/* NULL when no ring carries the label. */
const mk_ring* mk_dataset_find(const mk_dataset* ds, const char* label);
mk_status mk_dataset_to_json(const mk_dataset* ds, char** out);

const char* mk_ring_label(const mk_ring* r);
int mk_ring_rank(const mk_ring* r);
int mk_ring_max_multiplicity(const mk_ring* r);
/* Structure constant N_{ij}^k, all indices 1-based. */
mk_status mk_ring_structure_constant(const mk_ring* r, int i, int j, int k,
                                     long long* out);
/* *valid = 1 and *first_violation = NULL when every axiom holds;
 * otherwise *valid = 0 and *first_violation describes the first failure. */
mk_status mk_ring_validate(const mk_ring* r, int* valid,
                           char** first_violation);
/* dims must hold rank doubles.  residual may be NULL. */
mk_status mk_ring_dimensions(const mk_ring* r, double* dims, double* residual);
/* dual must hold rank ints; entries are 1-based. */
mk_status mk_ring_dual(const mk_ring* r, int* dual);

/* Evaluate both sides of the screening inequality at basis triple
 * (i, j, k) (1-based) with weight vector a (rank entries, >= 0) and
 * exponent p >= 1.  Any of lhs/rhs/ratio may be NULL. */
mk_status mk_cat_sides(const mk_ring* r, int i, int j, int k, const double* a,
                       double p, double* lhs, double* rhs, double* ratio);

/* ---------- search ---------- */

typedef struct mk_search_config {
    uint64_t seed;
    int restarts;         /* random restarts per triple */
    int iterations;       /* descent iterations per restart */
    double step;          /* gradient step size */
    double delta;         /* finite-difference probe */
    double invp_min;      /* initial 1/p drawn from (invp_min, 1] */
    double margin;        /* certify only ratio < 1 - margin */
    int grid_fallback;    /* nonzero: coarse grid pass when descent finds nothing */
    int threads;          /* worker threads; never changes any output byte */
    /* Optional triple restriction: 3 * triple_count ints (i,j,k, 1-based);
     * NULL means every triple. */
    const int* triples;
    size_t triple_count;
} mk_search_config;

void mk_search_config_init(mk_search_config* cfg);

mk_status mk_scan_ring(const mk_ring* r, const mk_search_config* cfg,
                       mk_scan_report** out);
mk_status mk_scan_dataset(const mk_dataset* ds, const mk_search_config* cfg,
                          mk_scan_report** out);
void mk_scan_report_free(mk_scan_report* rep);
size_t mk_scan_report_size(const mk_scan_report* rep);
long long mk_scan_report_excluded(const mk_scan_report* rep);
/* Outcome fields for entry index (input order): status is one of
 * "excluded", "not-excluded", "marginal", "invalid", "dim-failure". */
const char* mk_scan_report_status(const mk_scan_report* rep, size_t index);
const char* mk_scan_report_ring(const mk_scan_report* rep, size_t index);
double mk_scan_report_best_ratio(const mk_scan_report* rep, size_t index);
const char* mk_scan_report_detail(const mk_scan_report* rep, size_t index);
/* NULL when the entry produced no certificate. */
const mk_certificate* mk_scan_report_certificate(const mk_scan_report* rep,
                                                 size_t index);
/* format: "table", "csv", or "json". */
mk_status mk_scan_report_render(const mk_scan_report* rep, const char* format,
                                char** out);

/* ---------- certificates ---------- */

mk_status mk_certificate_parse(const char* json, mk_certificate** out);
void mk_certificate_free(mk_certificate* c);
const char* mk_certificate_ring(const mk_certificate* c);
size_t mk_certificate_rank(const mk_certificate* c);
void mk_certificate_triple(const mk_certificate* c, int* i, int* j, int* k);
double mk_certificate_inv_p(const mk_certificate* c);
double mk_certificate_lhs(const mk_certificate* c);
double mk_certificate_rhs(const mk_certificate* c);
double mk_certificate_ratio(const mk_certificate* c);
/* a must hold mk_certificate_rank(c) doubles. */
mk_status mk_certificate_weights(const mk_certificate* c, double* a, size_t len);
mk_status mk_certificate_to_json(const mk_certificate* c, char** out);
/* Recompute both sides on the ring from the stored point; *verified = 1
 * when the recomputed ratio stays below 1 - margin and matches the
 * stored sides to 1e-9 relative. */
mk_status mk_certificate_verify(const mk_ring* r, const mk_certificate* c,
                                double margin, int* verified);

/* ---------- commuting-square data ---------- */

mk_status mk_square_open(const char* path, mk_square** out);
mk_status mk_square_parse(const char* text, mk_square** out);
void mk_square_free(mk_square* sq);
const char* mk_square_label(const mk_square* sq);
void mk_square_shape(const mk_square* sq, int* n00, int* n01, int* n10,
                     int* n11);
/* Induced trace vectors; any argument may be NULL, otherwise it must
 * hold the matching shape entry's worth of doubles. */
mk_status mk_square_traces(const mk_square* sq, double* v00, double* v01,
                           double* v10, double* v11);
mk_status mk_square_to_json(const mk_square* sq, char** out);
/* Sides of the screening inequality at 1-based row with weights a
 * (n11 entries) and exponent p >= 1. */
mk_status mk_cs_sides(const mk_square* sq, int row, const double* a, double p,
                      double* lhs, double* rhs, double* ratio);
/* Transpose-variant index 0..3 (0 = the datum itself).  When the variant
 * is structurally consistent, *applicable = 1 and *out receives a new
 * square (caller frees); otherwise *applicable = 0 and *out = NULL.
 * *note (optional) explains the outcome. */
mk_status mk_square_variant(const mk_square* sq, int index, mk_square** out,
                            int* applicable, char** note);

/* ---------- operator-level verification ---------- */

/* Run the randomized operator suites (conditional-expectation laws, the
 * operator inequality on tensor-product squares and central elements,
 * the two-exponent form, the projection-reduced Hoelder inequality with
 * constructed equality cases, and central expectation matrices).
 * summary (optional) receives a text table; *failures the total count. */
mk_status mk_oracle_verify(long long trials, uint64_t seed, char** summary,
                           long long* failures);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MINKOWSKI_H */
