#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include "criterion.hpp"
#include "rng.hpp"

namespace fixtures {

using mink::FusionRing;

FusionRing ring_from_display(
    std::string label, const std::vector<std::vector<std::vector<int>>>& mats) {
    const std::size_t s = mats.size();
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t l = 0; l < s; ++l)
        for (std::size_t n = 0; n < s; ++n)
            for (std::size_t m = 0; m < s; ++m)
                mult[(l * s + m) * s + n] = mats[l][n][m]; // N_{lm}^n
    return FusionRing(s, std::move(mult), std::move(label));
}

namespace {

/* Start from the unit laws and add products of non-unit generators. */
FusionRing from_products(
    std::string label, std::size_t s,
    const std::vector<std::array<std::size_t, 4>>& entries) {
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t i = 0; i < s; ++i) {
        mult[(0 * s + i) * s + i] = 1;
        if (i) mult[(i * s + 0) * s + i] = 1;
    }
    for (const auto& [i, j, k, v] : entries)
        mult[(i * s + j) * s + k] = static_cast<int>(v);
    return FusionRing(s, std::move(mult), std::move(label));
}

} // namespace

FusionRing excluded_rank4() {
    return ring_from_display(
        "excluded-rank4",
        {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
         {{0, 1, 0, 0}, {1, 1, 1, 1}, {0, 1, 0, 0}, {0, 1, 0, 0}},
         {{0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}},
         {{0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}});
}

FusionRing excluded_rank7() {
    return ring_from_display(
        "excluded-rank7",
        {{{1, 0, 0, 0, 0, 0, 0},
          {0, 1, 0, 0, 0, 0, 0},
          {0, 0, 1, 0, 0, 0, 0},
          {0, 0, 0, 1, 0, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 0, 1}},
         {{0, 1, 0, 0, 0, 0, 0},
          {1, 0, 0, 0, 0, 0, 0},
          {0, 0, 0, 1, 0, 0, 0},
          {0, 0, 1, 0, 0, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 0, 1}},
         {{0, 0, 1, 0, 0, 0, 0},
          {0, 0, 0, 1, 0, 0, 0},
          {1, 0, 0, 0, 0, 0, 0},
          {0, 1, 0, 0, 0, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 0, 1}},
         {{0, 0, 0, 1, 0, 0, 0},
          {0, 0, 1, 0, 0, 0, 0},
          {0, 1, 0, 0, 0, 0, 0},
          {1, 0, 0, 0, 0, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 0, 1}},
         {{0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {0, 0, 0, 0, 1, 0, 0},
          {1, 1, 1, 1, 0, 0, 0},
          {0, 0, 0, 0, 0, 2, 0},
          {0, 0, 0, 0, 0, 0, 2}},
         {{0, 0, 0, 0, 0, 0, 1},
          {0, 0, 0, 0, 0, 0, 1},
          {0, 0, 0, 0, 0, 0, 1},
          {0, 0, 0, 0, 0, 0, 1},
          {0, 0, 0, 0, 0, 0, 2},
          {1, 1, 1, 1, 2, 1, 1},
          {0, 0, 0, 0, 0, 3, 1}},
         {{0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 1, 0},
          {0, 0, 0, 0, 0, 2, 0},
          {0, 0, 0, 0, 0, 1, 3},
          {1, 1, 1, 1, 2, 1, 1}}});
}

FusionRing fibonacci() {
    return from_products("fibonacci", 2, {{1, 1, 0, 1}, {1, 1, 1, 1}});
}

FusionRing ising() {
    return from_products("ising", 3,
                         {{1, 1, 0, 1},
                          {1, 1, 2, 1},
                          {1, 2, 1, 1},
                          {2, 1, 1, 1},
                          {2, 2, 0, 1}});
}

FusionRing z_n(std::size_t n) {
    if (n < 1) throw std::invalid_argument("z_n needs n >= 1");
    std::vector<int> mult(n * n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mult[(i * n + j) * n + (i + j) % n] = 1;
    return FusionRing(n, std::move(mult), "z" + std::to_string(n));
}

FusionRing s3_rep() {
    return from_products("s3-rep", 3,
                         {{1, 1, 0, 1},
                          {1, 2, 2, 1},
                          {2, 1, 2, 1},
                          {2, 2, 0, 1},
                          {2, 2, 1, 1},
                          {2, 2, 2, 1}});
}

FusionRing rank2_family(int m) {
    if (m < 0) throw std::invalid_argument("rank2_family needs m >= 0");
    return from_products("rank2-m" + std::to_string(m), 2,
                         {{1, 1, 0, 1},
                          {1, 1, 1, static_cast<std::size_t>(m)}});
}

FusionRing tambara_yamagami(std::size_t n) {
    if (n < 1) throw std::invalid_argument("tambara_yamagami needs n >= 1");
    const std::size_t s = n + 1; // group elements 0..n-1, rho = n
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mult[(i * s + j) * s + (i + j) % n] = 1;
    for (std::size_t g = 0; g < n; ++g) {
        mult[(g * s + n) * s + n] = 1;  // g rho = rho
        mult[(n * s + g) * s + n] = 1;  // rho g = rho
        mult[(n * s + n) * s + g] = 1;  // rho^2 = sum_g g
    }
    return FusionRing(s, std::move(mult), "ty" + std::to_string(n));
}

FusionRing su2_level(std::size_t k) {
    const std::size_t s = k + 1;
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            const std::size_t lo = i > j ? i - j : j - i;
            const std::size_t hi = std::min(i + j, 2 * k - i - j);
            for (std::size_t l = lo; l <= hi; l += 2)
                mult[(i * s + j) * s + l] = 1;
        }
    return FusionRing(s, std::move(mult), "su2-k" + std::to_string(k));
}

FusionRing bad_associativity() {
    return from_products("bad-assoc", 3,
                         {{1, 1, 0, 1},
                          {1, 1, 2, 1},
                          {2, 2, 0, 1}});
}

FusionRing tensor_product(const FusionRing& r1, const FusionRing& r2) {
    const std::size_t s1 = r1.rank(), s2 = r2.rank(), s = s1 * s2;
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t i1 = 0; i1 < s1; ++i1)
        for (std::size_t i2 = 0; i2 < s2; ++i2)
            for (std::size_t j1 = 0; j1 < s1; ++j1)
                for (std::size_t j2 = 0; j2 < s2; ++j2)
                    for (std::size_t k1 = 0; k1 < s1; ++k1)
                        for (std::size_t k2 = 0; k2 < s2; ++k2) {
                            const int v = r1.mult(i1, j1, k1) * r2.mult(i2, j2, k2);
                            if (v)
                                mult[((i1 * s2 + i2) * s + (j1 * s2 + j2)) * s +
                                     (k1 * s2 + k2)] = v;
                        }
    return FusionRing(s, std::move(mult), r1.label() + "x" + r2.label());
}

FusionRing permuted(const FusionRing& ring, const std::vector<std::size_t>& perm) {
    const std::size_t s = ring.rank();
    if (perm.size() != s || perm[0] != 0)
        throw std::invalid_argument("perm must fix the unit");
    std::vector<int> mult(s * s * s, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < s; ++k)
                mult[(perm[i] * s + perm[j]) * s + perm[k]] = ring.mult(i, j, k);
    return FusionRing(s, std::move(mult), ring.label() + "-perm");
}

std::vector<mink::FusionRing> random_valid_rings(std::size_t count,
                                                 std::size_t max_rank,
                                                 std::uint64_t seed) {
    mink::Rng rng(seed);
    std::vector<FusionRing> out;
    out.reserve(count);
    auto random_perm_of = [&](const FusionRing& r) {
        std::vector<std::size_t> perm(r.rank());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        for (std::size_t i = perm.size() - 1; i > 1; --i)
            std::swap(perm[i], perm[1 + rng.uniform_index(i)]);
        return permuted(r, perm);
    };
    while (out.size() < count) {
        FusionRing ring = fibonacci();
        switch (rng.uniform_index(8)) {
            case 0: ring = z_n(2 + rng.uniform_index(5)); break;
            case 1: ring = rank2_family(static_cast<int>(rng.uniform_index(4))); break;
            case 2: ring = rng.uniform() < 0.5 ? ising() : s3_rep(); break;
            case 3: ring = tambara_yamagami(2 + rng.uniform_index(3)); break;
            case 4: ring = su2_level(1 + rng.uniform_index(5)); break;
            case 5: ring = tensor_product(fibonacci(),
                                          rng.uniform() < 0.5 ? fibonacci() : z_n(2));
                break;
            case 6: ring = tensor_product(z_n(2), z_n(2 + rng.uniform_index(2))); break;
            default: ring = random_perm_of(su2_level(2 + rng.uniform_index(3))); break;
        }
        if (ring.rank() > max_rank) continue;
        if (rng.uniform() < 0.25 && ring.rank() > 2) ring = random_perm_of(ring);
        ring.set_label("sample-" + std::to_string(out.size()) + "-" + ring.label());
        out.push_back(std::move(ring));
    }
    return out;
}

double grid_min_ratio(const mink::FusionRing& ring, double a_step,
                      double invp_step) {
    const mink::DimVector dims = mink::pf_dimensions(ring);
    const std::size_t s = ring.rank();
    const auto a_steps = static_cast<std::size_t>(1.0 / a_step + 0.5);
    const auto invp_steps = static_cast<std::size_t>(1.0 / invp_step + 0.5);

    std::vector<mink::TripleKernel> kernels;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = 0; k < s; ++k)
                kernels.emplace_back(ring, dims, i, j, k);

    std::vector<std::size_t> digits(s, 0);
    std::vector<double> a(s, 0.0);
    double best = std::numeric_limits<double>::infinity();
    bool done = false;
    while (!done) {
        for (std::size_t n = 0; n < s; ++n)
            a[n] = static_cast<double>(digits[n]) * a_step;
        for (std::size_t t = 1; t <= invp_steps; ++t) {
            const double p = 1.0 / (static_cast<double>(t) * invp_step);
            for (const auto& kern : kernels)
                best = std::min(best, kern.eval(a.data(), p).ratio);
        }
        std::size_t pos = 0;
        while (pos < s && ++digits[pos] > a_steps) digits[pos++] = 0;
        done = pos == s;
    }
    return best;
}

} // namespace fixtures
