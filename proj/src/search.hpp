#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "criterion.hpp"
#include "fusion_ring.hpp"

namespace mink {

/* Clamp floor for 1/p during descent; p may grow up to 1e6. */
inline constexpr double kInvpFloor = 1e-6;

struct SearchConfig {
    double delta = 1e-4;            // forward finite-difference probe step
    double step = 0.05;             // gradient step size
    int iterations = 1000;          // descent iterations per restart
    int restarts = 20;              // random restarts per triple
    double invp_min = 0.1;          // initial 1/p drawn uniformly from (invp_min, 1]
    double violation_margin = 1e-9; // certify only ratio < 1 - margin
    std::uint64_t seed = 0;
    bool grid_fallback = false;     // coarse grid pass when descent finds nothing
    /* Restrict the scan to these triples (0-based); empty means all rank^3.
       Out-of-range entries for a given ring are skipped. */
    std::vector<std::array<std::size_t, 3>> triples;
};

struct Certificate {
    std::string ring_label;
    std::array<std::size_t, 3> triple; // 0-based in memory; 1-based at every I/O surface
    std::vector<double> a;
    double inv_p = 0.0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    bool verified = false; // re-evaluated from the stored fields below 1 - margin
};

enum class RingStatus { excluded, not_excluded, marginal, invalid, dim_failure };

const char* ring_status_name(RingStatus s);

struct RingScan {
    RingStatus status = RingStatus::not_excluded;
    std::optional<Certificate> certificate;
    /* Certificate ratio when excluded; otherwise the minimum ratio seen
       across every restart (deterministic for any thread count). */
    double best_ratio = std::numeric_limits<double>::quiet_NaN();
    int aborted_restarts = 0; // restarts stopped on a non-finite objective
    std::string detail;       // validation / dimension diagnostics
};

struct RingOutcome {
    std::string label;
    std::size_t rank = 0;
    int max_mult = 0;
    RingStatus status = RingStatus::not_excluded;
    std::optional<Certificate> certificate;
    double best_ratio = std::numeric_limits<double>::quiet_NaN();
    int aborted_restarts = 0;
    std::string detail;
    double seconds = 0.0; // wall clock; kept in memory, never rendered
};

struct ScanTableCell {
    int excluded = 0;
    int total = 0;
};

/* Exclusion counts bucketed by (max multiplicity, rank); rows are the
   multiplicities present, columns the ranks present, both ascending. */
struct ScanTable {
    std::vector<int> mults;
    std::vector<std::size_t> ranks;
    std::vector<ScanTableCell> cells; // mults.size() x ranks.size(), row-major
    ScanTableCell& at(std::size_t mi, std::size_t ri) { return cells[mi * ranks.size() + ri]; }
    const ScanTableCell& at(std::size_t mi, std::size_t ri) const { return cells[mi * ranks.size() + ri]; }
};

struct ScanReport {
    SearchConfig config; // echo of the effective settings (threading excluded:
                         // rendered reports are identical for any thread count)
    std::vector<RingOutcome> outcomes; // in input order
    ScanTable table;
};

int total_excluded(const ScanReport& report);

/* Search objective: the side ratio at (a, 1/p), with +infinity when the
   left side vanishes so descent never settles on a degenerate point. */
double objective(const TripleKernel& kernel, const double* a, double inv_p);

struct Gradient {
    std::vector<double> a;
    double inv_p = 0.0;
    bool valid = false; // false when a probe produced a non-finite value
};

/* Forward finite differences of f(a, inv_p); a is probed in place and
   restored.  The inv_p probe is clamped into [kInvpFloor, 1], giving a
   one-sided zero derivative at the boundary.  f is any callable
   (const double* a, double inv_p) -> double, so tests can inject stubs. */
template <typename F>
Gradient finite_diff_gradient(F&& f, std::vector<double>& a, double inv_p,
                              double delta) {
    Gradient g;
    g.a.resize(a.size());
    const double f0 = f(a.data(), inv_p);
    if (!std::isfinite(f0)) return g;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double saved = a[n];
        a[n] = saved + delta;
        const double fn = f(a.data(), inv_p);
        a[n] = saved;
        if (!std::isfinite(fn)) return g;
        g.a[n] = (fn - f0) / delta;
    }
    double probe = inv_p + delta;
    if (probe > 1.0) probe = 1.0;
    if (probe < kInvpFloor) probe = kInvpFloor;
    const double fp = f(a.data(), probe);
    if (!std::isfinite(fp)) return g;
    g.inv_p = probe == inv_p ? 0.0 : (fp - f0) / (probe - inv_p);
    g.valid = true;
    return g;
}

struct DescentResult {
    std::vector<double> a;
    double inv_p = 0.0;
    double ratio = std::numeric_limits<double>::infinity(); // best seen
    bool aborted = false;
};

/* One random-restart descent on the given triple kernel, fully determined
   by stream_seed: draw a in [0,1)^rank and 1/p in (invp_min, 1], then
   projected gradient steps (a clamped to >= 0, 1/p to [kInvpFloor, 1]),
   tracking the best point and stopping early below 1 - margin. */
DescentResult descend(const TripleKernel& kernel, const SearchConfig& cfg,
                      std::uint64_t stream_seed);

/* Scan every triple of one ring (lexicographic order) with cfg.restarts
   descents per triple.  Returns the certificate of the first violating
   (triple, restart) pair in that order -- the same one for any thread
   count.  Per-restart seeds depend only on (cfg.seed, ring label, triple,
   restart index), so exclusions are monotone in restarts and iterations. */
RingScan scan_ring(const FusionRing& ring, const SearchConfig& cfg,
                   int threads = 1);

/* Validate, compute dimensions, and scan each ring of a dataset; invalid
   rings and dimension failures are reported in the outcome, never fatal.
   Threads parallelize the per-ring search; outputs are thread-count
   independent. */
ScanReport scan_dataset(const std::vector<FusionRing>& rings,
                        const SearchConfig& cfg, int threads = 1);

} // namespace mink
