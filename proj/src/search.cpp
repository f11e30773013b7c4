#include "search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"

namespace mink {

namespace {

void check_config(const SearchConfig& cfg) {
    auto bad = [](const char* msg) { throw Error(errc::invalid_argument, msg); };
    if (!(cfg.delta > 0.0)) bad("delta must be positive");
    if (!(cfg.step > 0.0)) bad("step must be positive");
    if (cfg.iterations < 1) bad("iterations must be at least 1");
    if (cfg.restarts < 1) bad("restarts must be at least 1");
    if (!(cfg.invp_min > 0.0) || !(cfg.invp_min < 1.0))
        bad("invp_min must lie in (0, 1)");
    if (!(cfg.violation_margin >= 0.0) || !(cfg.violation_margin < 1.0))
        bad("violation margin must lie in [0, 1)");
}

std::vector<std::array<std::size_t, 3>> triple_list(const SearchConfig& cfg,
                                                   std::size_t s) {
    std::vector<std::array<std::size_t, 3>> out;
    if (cfg.triples.empty()) {
        out.reserve(s * s * s);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t k = 0; k < s; ++k) out.push_back({i, j, k});
    } else {
        for (const auto& t : cfg.triples)
            if (t[0] < s && t[1] < s && t[2] < s) out.push_back(t);
    }
    return out;
}

std::uint64_t task_seed(std::uint64_t ring_seed, std::size_t triple_idx,
                        int restart) {
    /* Stable in (triple, restart) only, so growing cfg.restarts or
       filtering triples never reshuffles existing streams. */
    return derive_seed(derive_seed(ring_seed, triple_idx),
                       static_cast<std::uint64_t>(restart));
}

struct TaskResult {
    double ratio = std::numeric_limits<double>::infinity();
    bool aborted = false;
};

} // namespace

const char* ring_status_name(RingStatus s) {
    switch (s) {
        case RingStatus::excluded: return "excluded";
        case RingStatus::not_excluded: return "not-excluded";
        case RingStatus::marginal: return "marginal";
        case RingStatus::invalid: return "invalid";
        case RingStatus::dim_failure: return "dim-failure";
    }
    return "?";
}

int total_excluded(const ScanReport& report) {
    int n = 0;
    for (const auto& o : report.outcomes)
        if (o.status == RingStatus::excluded) ++n;
    return n;
}

double objective(const TripleKernel& kernel, const double* a, double inv_p) {
    TripleEvaluation ev = kernel.eval(a, 1.0 / inv_p);
    /* Overflowed side values (huge p) must read as failed evaluations, not as
       spectacular violations. */
    if (!(ev.lhs > 0.0) || !std::isfinite(ev.lhs) || !std::isfinite(ev.rhs))
        return std::numeric_limits<double>::infinity();
    return ev.rhs / ev.lhs;
}

DescentResult descend(const TripleKernel& kernel, const SearchConfig& cfg,
                      std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    const std::size_t s = kernel.rank();
    std::vector<double> a(s);
    for (double& v : a) v = rng.uniform();
    double inv_p = rng.uniform_left_open(cfg.invp_min, 1.0);

    auto f = [&kernel](const double* av, double ip) {
        return objective(kernel, av, ip);
    };

    DescentResult best;
    best.a = a;
    best.inv_p = inv_p;
    const double cur0 = f(a.data(), inv_p);
    if (!std::isfinite(cur0)) {
        best.aborted = true;
        return best;
    }
    best.ratio = cur0;
    const double target = 1.0 - cfg.violation_margin;
    for (int it = 0; it < cfg.iterations && best.ratio >= target; ++it) {
        Gradient g = finite_diff_gradient(f, a, inv_p, cfg.delta);
        if (!g.valid) {
            best.aborted = true;
            break;
        }
        for (std::size_t n = 0; n < s; ++n) {
            a[n] -= cfg.step * g.a[n];
            if (a[n] < 0.0) a[n] = 0.0;
        }
        inv_p -= cfg.step * g.inv_p;
        inv_p = std::clamp(inv_p, kInvpFloor, 1.0);
        const double cur = f(a.data(), inv_p);
        if (!std::isfinite(cur)) {
            best.aborted = true;
            break;
        }
        if (cur < best.ratio) {
            best.ratio = cur;
            best.a = a;
            best.inv_p = inv_p;
        }
    }
    return best;
}

namespace {

/* Re-evaluate a candidate point from scratch and build the certificate. */
std::optional<Certificate> verify_candidate(const FusionRing& ring,
                                            const DimVector& dims,
                                            const std::array<std::size_t, 3>& t,
                                            const std::vector<double>& a,
                                            double inv_p, double target) {
    TripleEvaluation ev =
        cat_sides(ring, dims, t[0], t[1], t[2], a, 1.0 / inv_p);
    if (!std::isfinite(ev.lhs) || !std::isfinite(ev.rhs)) return std::nullopt;
    if (!(ev.ratio < target)) return std::nullopt;
    Certificate cert;
    cert.ring_label = ring.label();
    cert.triple = t;
    cert.a = a;
    cert.inv_p = inv_p;
    cert.lhs = ev.lhs;
    cert.rhs = ev.rhs;
    cert.ratio = ev.ratio;
    cert.verified = true;
    return cert;
}

RingScan scan_with_dims(const FusionRing& ring, const DimVector& dims,
                        const SearchConfig& cfg, int threads) {
    check_config(cfg);
    const auto triples = triple_list(cfg, ring.rank());
    const double target = 1.0 - cfg.violation_margin;
    RingScan out;
    if (triples.empty()) {
        out.detail = "no triples to search";
        return out;
    }

    std::vector<TripleKernel> kernels;
    kernels.reserve(triples.size());
    for (const auto& t : triples)
        kernels.emplace_back(ring, dims, t[0], t[1], t[2]);

    const std::uint64_t ring_seed = hash_label(cfg.seed, ring.label());
    const long long restarts = cfg.restarts;
    const long long total = static_cast<long long>(triples.size()) * restarts;
    const long long kNone = std::numeric_limits<long long>::max();

    std::vector<TaskResult> results(static_cast<std::size_t>(total));
    std::atomic<long long> next{0};
    std::atomic<long long> winner{kNone};
    std::mutex cert_mutex;
    std::optional<Certificate> winning_cert;

    auto run_task = [&](long long idx) {
        const std::size_t ti = static_cast<std::size_t>(idx / restarts);
        const int r = static_cast<int>(idx % restarts);
        /* eval reuses per-object scratch, so concurrent restarts of the
           same triple must each descend on a private copy. */
        const TripleKernel kernel = kernels[ti];
        DescentResult res = descend(kernel, cfg, task_seed(ring_seed, ti, r));
        TaskResult& slot = results[static_cast<std::size_t>(idx)];
        slot.ratio = res.ratio;
        slot.aborted = res.aborted;
        if (res.ratio < target) {
            auto cert = verify_candidate(ring, dims, triples[ti], res.a,
                                         res.inv_p, target);
            if (cert) {
                std::lock_guard<std::mutex> lock(cert_mutex);
                long long cur = winner.load(std::memory_order_relaxed);
                if (idx < cur) {
                    winner.store(idx, std::memory_order_relaxed);
                    winning_cert = std::move(cert);
                }
            }
        }
    };

    auto worker = [&] {
        for (;;) {
            const long long idx = next.fetch_add(1, std::memory_order_relaxed);
            if (idx >= total) return;
            /* Tasks after the winning index cannot change the outcome. */
            if (idx > winner.load(std::memory_order_relaxed)) continue;
            run_task(idx);
        }
    };

    const int nthreads = static_cast<int>(
        std::min<long long>(std::max(threads, 1), total));
    if (nthreads <= 1) {
        for (long long idx = 0; idx < total; ++idx) {
            if (idx > winner.load(std::memory_order_relaxed)) break;
            run_task(idx);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const long long won = winner.load();
    if (won != kNone) {
        /* Aggregate diagnostics over the tasks a sequential scan would
           have executed, keeping outputs thread-count independent. */
        double best = winning_cert->ratio;
        int aborted = 0;
        for (long long idx = 0; idx < won; ++idx)
            if (results[static_cast<std::size_t>(idx)].aborted) ++aborted;
        out.status = RingStatus::excluded;
        out.certificate = std::move(winning_cert);
        out.best_ratio = best;
        out.aborted_restarts = aborted;
        return out;
    }

    double best = std::numeric_limits<double>::infinity();
    int aborted = 0;
    for (const TaskResult& r : results) {
        best = std::min(best, r.ratio);
        if (r.aborted) ++aborted;
    }
    out.aborted_restarts = aborted;

    if (cfg.grid_fallback) {
        /* Coarse deterministic sweep: a on {0, .25, .5, .75, 1}^rank and
           1/p on {0.1, ..., 1.0}.  Catches violations in regions the
           descent never visited; cost grows as 5^rank per triple. */
        static constexpr double kAValues[] = {0.0, 0.25, 0.5, 0.75, 1.0};
        const std::size_t s = ring.rank();
        std::vector<std::size_t> digit(s, 0);
        std::vector<double> a(s, 0.0);
        for (std::size_t ti = 0; ti < triples.size() && !out.certificate; ++ti) {
            std::fill(digit.begin(), digit.end(), 0);
            for (;;) {
                for (std::size_t n = 0; n < s; ++n) a[n] = kAValues[digit[n]];
                for (int ip = 1; ip <= 10; ++ip) {
                    const double inv_p = 0.1 * ip;
                    TripleEvaluation ev = kernels[ti].eval(a.data(), 1.0 / inv_p);
                    if (ev.lhs > 0.0) best = std::min(best, ev.ratio);
                    if (ev.ratio < target) {
                        auto cert = verify_candidate(ring, dims, triples[ti], a,
                                                     inv_p, target);
                        if (cert) {
                            out.certificate = std::move(cert);
                            break;
                        }
                    }
                }
                if (out.certificate) break;
                std::size_t pos = 0;
                while (pos < s && ++digit[pos] == std::size(kAValues)) {
                    digit[pos] = 0;
                    ++pos;
                }
                if (pos == s) break;
            }
        }
        if (out.certificate) {
            out.status = RingStatus::excluded;
            out.best_ratio = out.certificate->ratio;
            return out;
        }
    }

    out.best_ratio = best;
    out.status = (best < 1.0) ? RingStatus::marginal : RingStatus::not_excluded;
    return out;
}

} // namespace

RingScan scan_ring(const FusionRing& ring, const SearchConfig& cfg,
                   int threads) {
    DimVector dims;
    try {
        dims = pf_dimensions(ring);
    } catch (const Error& e) {
        RingScan out;
        out.status = RingStatus::dim_failure;
        out.detail = e.what();
        return out;
    }
    return scan_with_dims(ring, dims, cfg, threads);
}

ScanReport scan_dataset(const std::vector<FusionRing>& rings,
                        const SearchConfig& cfg, int threads) {
    check_config(cfg);
    ScanReport report;
    report.config = cfg;
    report.outcomes.reserve(rings.size());

    for (const FusionRing& ring : rings) {
        RingOutcome oc;
        oc.label = ring.label();
        oc.rank = ring.rank();
        oc.max_mult = ring.max_multiplicity();
        const auto t0 = std::chrono::steady_clock::now();

        ValidationReport vr = validate(ring);
        if (!vr.ok()) {
            oc.status = RingStatus::invalid;
            std::ostringstream os;
            os << vr.violations.size() << " axiom violation(s); first: "
               << vr.violations.front().message;
            oc.detail = os.str();
        } else {
            RingScan rs = scan_ring(ring, cfg, threads);
            oc.status = rs.status;
            oc.certificate = std::move(rs.certificate);
            oc.best_ratio = rs.best_ratio;
            oc.aborted_restarts = rs.aborted_restarts;
            oc.detail = std::move(rs.detail);
        }
        oc.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        report.outcomes.push_back(std::move(oc));
    }

    /* Bucket the outcomes by (max multiplicity, rank). */
    std::set<int> mults;
    std::set<std::size_t> ranks;
    for (const auto& o : report.outcomes) {
        mults.insert(o.max_mult);
        ranks.insert(o.rank);
    }
    report.table.mults.assign(mults.begin(), mults.end());
    report.table.ranks.assign(ranks.begin(), ranks.end());
    report.table.cells.assign(report.table.mults.size() * report.table.ranks.size(),
                              ScanTableCell{});
    for (const auto& o : report.outcomes) {
        const std::size_t mi = static_cast<std::size_t>(
            std::lower_bound(report.table.mults.begin(), report.table.mults.end(),
                             o.max_mult) -
            report.table.mults.begin());
        const std::size_t ri = static_cast<std::size_t>(
            std::lower_bound(report.table.ranks.begin(), report.table.ranks.end(),
                             o.rank) -
            report.table.ranks.begin());
        ScanTableCell& cell = report.table.at(mi, ri);
        ++cell.total;
        if (o.status == RingStatus::excluded) ++cell.excluded;
    }
    return report;
}

} // namespace mink
