#include "oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace mink {

namespace {

constexpr double kMinkTol = 1e-8;  // margin tolerance scale for operator checks
constexpr double kEqTol = 1e-10;   // tolerance scale for equality-type checks

using Eigen::Index;

CMatrix blockwise(const CMatrix& a, const CMatrix& b) { return a * b; }

Element mul(const Element& a, const Element& b) {
    Element out;
    out.blocks.reserve(a.blocks.size());
    for (std::size_t t = 0; t < a.blocks.size(); ++t)
        out.blocks.push_back(blockwise(a.blocks[t], b.blocks[t]));
    return out;
}

Element sub(const Element& a, const Element& b) {
    Element out;
    out.blocks.reserve(a.blocks.size());
    for (std::size_t t = 0; t < a.blocks.size(); ++t)
        out.blocks.push_back(a.blocks[t] - b.blocks[t]);
    return out;
}

double frobenius(const Element& x) {
    double acc = 0.0;
    for (const CMatrix& b : x.blocks) acc += b.squaredNorm();
    return std::sqrt(acc);
}

/* Frobenius inner product Re<a, b> = Re sum tr(a^* b). */
double fro_inner(const Element& a, const Element& b) {
    double acc = 0.0;
    for (std::size_t t = 0; t < a.blocks.size(); ++t)
        acc += (a.blocks[t].adjoint() * b.blocks[t]).trace().real();
    return acc;
}

double block_op_norm(const CMatrix& b) {
    if (b.rows() == 1) return std::abs(b(0, 0));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(b.adjoint() * b,
                                              Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

} // namespace

double op_norm(const Element& x) {
    double m = 0.0;
    for (const CMatrix& b : x.blocks) m = std::max(m, block_op_norm(b));
    return m;
}

bool is_hermitian(const Element& x, double tol) {
    for (const CMatrix& b : x.blocks)
        if ((b - b.adjoint()).norm() > tol * (1.0 + b.norm())) return false;
    return true;
}

Element hermitian_part(const Element& x) {
    Element out;
    out.blocks.reserve(x.blocks.size());
    for (const CMatrix& b : x.blocks)
        out.blocks.push_back(0.5 * (b + b.adjoint()));
    return out;
}

double min_eigenvalue(const Element& x) {
    double m = std::numeric_limits<double>::infinity();
    for (const CMatrix& b : x.blocks) {
        CMatrix h = 0.5 * (b + b.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
        m = std::min(m, es.eigenvalues().minCoeff());
    }
    return m;
}

Element matrix_power(const Element& x, double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw Error(errc::invalid_argument, "matrix power needs p > 0");
    if (p == 1.0) return x;
    Element out;
    out.blocks.reserve(x.blocks.size());
    for (const CMatrix& b : x.blocks) {
        if ((b - b.adjoint()).norm() > 1e-10 * (1.0 + b.norm()))
            throw Error(errc::invalid_argument,
                        "matrix power of a non-hermitian element");
        Eigen::SelfAdjointEigenSolver<CMatrix> es(b);
        if (es.info() != Eigen::Success)
            throw Error(errc::numeric, "eigendecomposition failed");
        Eigen::VectorXd ev = es.eigenvalues();
        const double top = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
        Eigen::VectorXd powed(ev.size());
        for (Index i = 0; i < ev.size(); ++i) {
            double v = ev(i);
            if (v < -kMinkTol * (1.0 + top))
                throw Error(errc::invalid_argument,
                            "matrix power of an element with a negative eigenvalue");
            /* Only rounding noise below zero is clamped; small positive
               eigenvalues carry real information through p-th roots. */
            if (v < 0.0) v = 0.0;
            powed(i) = v > 0.0 ? std::pow(v, p) : 0.0;
        }
        out.blocks.push_back(es.eigenvectors() * powed.asDiagonal() *
                             es.eigenvectors().adjoint());
    }
    return out;
}

SquareInstance SquareInstance::tensor_square(int a_dim, int b_dim) {
    if (a_dim < 1 || b_dim < 1)
        throw Error(errc::invalid_argument, "factor dimensions must be >= 1");
    SquareInstance sq;
    sq.factors_.emplace_back(a_dim, b_dim);
    sq.weights_.push_back(1.0 / (a_dim * b_dim));
    return sq;
}

SquareInstance SquareInstance::direct_sum(const SquareInstance& first,
                                          const SquareInstance& second,
                                          double weight) {
    if (!(weight > 0.0 && weight < 1.0))
        throw Error(errc::invalid_argument, "direct sum weight must lie in (0,1)");
    SquareInstance sq;
    sq.factors_ = first.factors_;
    sq.factors_.insert(sq.factors_.end(), second.factors_.begin(),
                       second.factors_.end());
    for (double w : first.weights_) sq.weights_.push_back(w * weight);
    for (double w : second.weights_) sq.weights_.push_back(w * (1.0 - weight));
    return sq;
}

void SquareInstance::require_element(const Element& x) const {
    if (x.blocks.size() != factors_.size())
        throw Error(errc::invalid_argument, "element has wrong number of blocks");
    for (std::size_t t = 0; t < factors_.size(); ++t) {
        const Index n = factors_[t].first * factors_[t].second;
        if (x.blocks[t].rows() != n || x.blocks[t].cols() != n)
            throw Error(errc::invalid_argument, "element block has wrong shape");
    }
}

std::complex<double> SquareInstance::trace(const Element& x) const {
    require_element(x);
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < factors_.size(); ++t)
        acc += weights_[t] * x.blocks[t].trace();
    return acc;
}

Element SquareInstance::expect_K(const Element& x) const {
    require_element(x);
    Element out;
    out.blocks.reserve(factors_.size());
    for (std::size_t t = 0; t < factors_.size(); ++t) {
        const int a = factors_[t].first, b = factors_[t].second;
        CMatrix ptr = CMatrix::Zero(a, a); // partial trace over the second factor
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) {
                std::complex<double> s = 0.0;
                for (int r = 0; r < b; ++r) s += x.blocks[t](i * b + r, j * b + r);
                ptr(i, j) = s / static_cast<double>(b);
            }
        CMatrix full = CMatrix::Zero(a * b, a * b); // ptr (x) identity
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j)
                for (int r = 0; r < b; ++r) full(i * b + r, j * b + r) = ptr(i, j);
        out.blocks.push_back(std::move(full));
    }
    return out;
}

Element SquareInstance::expect_L(const Element& x) const {
    require_element(x);
    Element out;
    out.blocks.reserve(factors_.size());
    for (std::size_t t = 0; t < factors_.size(); ++t) {
        const int a = factors_[t].first, b = factors_[t].second;
        CMatrix ptr = CMatrix::Zero(b, b); // partial trace over the first factor
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < b; ++c) {
                std::complex<double> s = 0.0;
                for (int i = 0; i < a; ++i) s += x.blocks[t](i * b + r, i * b + c);
                ptr(r, c) = s / static_cast<double>(a);
            }
        CMatrix full = CMatrix::Zero(a * b, a * b); // identity (x) ptr
        for (int i = 0; i < a; ++i)
            for (int r = 0; r < b; ++r)
                for (int c = 0; c < b; ++c) full(i * b + r, i * b + c) = ptr(r, c);
        out.blocks.push_back(std::move(full));
    }
    return out;
}

Element SquareInstance::expect_N(const Element& x) const {
    require_element(x);
    Element out;
    out.blocks.reserve(factors_.size());
    for (std::size_t t = 0; t < factors_.size(); ++t) {
        const Index n = factors_[t].first * factors_[t].second;
        const std::complex<double> c =
            x.blocks[t].trace() / static_cast<double>(n);
        out.blocks.push_back(c * CMatrix::Identity(n, n));
    }
    return out;
}

Element SquareInstance::identity() const {
    Element out;
    for (const auto& [a, b] : factors_)
        out.blocks.push_back(CMatrix::Identity(a * b, a * b));
    return out;
}

Element SquareInstance::zero() const {
    Element out;
    for (const auto& [a, b] : factors_)
        out.blocks.push_back(CMatrix::Zero(a * b, a * b));
    return out;
}

namespace {

CMatrix random_gaussian(Rng& rng, Index n) {
    CMatrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal()) *
                      0.7071067811865476;
    return g;
}

CMatrix random_unitary(Rng& rng, Index n) {
    Eigen::HouseholderQR<CMatrix> qr(random_gaussian(rng, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

} // namespace

Element SquareInstance::random_positive(Rng& rng) const {
    /* Random eigenbasis with spectrum in [0.1, 1].  Checks stack p-th
       powers and roots, so the condition number must stay bounded for the
       comparisons to be meaningful in double precision. */
    Element out;
    for (const auto& [a, b] : factors_) {
        const Index n = a * b;
        CMatrix u = random_unitary(rng, n);
        Eigen::VectorXd spec(n);
        for (Index i = 0; i < n; ++i) spec(i) = rng.uniform(0.1, 1.0);
        spec /= spec.maxCoeff(); // unit operator norm per block
        CMatrix x = u * spec.cast<std::complex<double>>().asDiagonal() *
                    u.adjoint();
        out.blocks.push_back(0.5 * (x + x.adjoint()));
    }
    return out;
}

Element SquareInstance::random_hermitian(Rng& rng) const {
    Element out;
    for (const auto& [a, b] : factors_) {
        const Index n = a * b;
        CMatrix g = random_gaussian(rng, n);
        out.blocks.push_back(0.5 * (g + g.adjoint()));
    }
    const double norm = op_norm(out);
    if (norm > 0.0)
        for (CMatrix& b : out.blocks) b /= norm;
    return out;
}

Element SquareInstance::random_central_positive(Rng& rng) const {
    Element out;
    for (const auto& [a, b] : factors_) {
        const Index n = a * b;
        out.blocks.push_back(rng.uniform(0.25, 2.0) * CMatrix::Identity(n, n));
    }
    return out;
}

Element SquareInstance::random_projection(Rng& rng) const {
    Element out;
    for (const auto& [a, b] : factors_) {
        const Index n = a * b;
        CMatrix u = random_unitary(rng, n);
        Eigen::VectorXd bits(n);
        for (Index i = 0; i < n; ++i) bits(i) = rng.uniform() < 0.5 ? 1.0 : 0.0;
        CMatrix q = u * bits.cast<std::complex<double>>().asDiagonal() * u.adjoint();
        out.blocks.push_back(0.5 * (q + q.adjoint()));
    }
    return out;
}

CommutingSquareSpec SquareInstance::to_square() const {
    const Index t = static_cast<Index>(factors_.size());
    CommutingSquareSpec spec;
    spec.t00_01 = Eigen::MatrixXi::Zero(t, t);
    spec.t01_11 = Eigen::MatrixXi::Zero(t, t);
    spec.t00_10 = Eigen::MatrixXi::Zero(t, t);
    spec.t10_11 = Eigen::MatrixXi::Zero(t, t);
    spec.v11.resize(t);
    for (Index i = 0; i < t; ++i) {
        const auto& [a, b] = factors_[static_cast<std::size_t>(i)];
        spec.t00_01(i, i) = b;
        spec.t01_11(i, i) = a;
        spec.t00_10(i, i) = a;
        spec.t10_11(i, i) = b;
        spec.v11(i) = weights_[static_cast<std::size_t>(i)];
    }
    spec.label = "operator-instance";
    return spec;
}

namespace {

void require_positive(const SquareInstance& sq, const Element& x,
                      const char* what) {
    sq.require_element(x);
    const double norm = op_norm(x);
    if (!is_hermitian(x, 1e-10) ||
        min_eigenvalue(x) < -kEqTol * (1.0 + norm)) {
        std::ostringstream os;
        os << what << " must be positive semidefinite";
        throw Error(errc::invalid_argument, os.str());
    }
}

/* Commutator sampling: a central element must commute with random
   hermitian probes of the ambient algebra. */
void require_central(const SquareInstance& sq, const Element& x) {
    Rng rng(0x6d696e6bULL); // fixed probe stream, deterministic
    const double nx = op_norm(x);
    for (int probe = 0; probe < 4; ++probe) {
        Element m = sq.random_hermitian(rng);
        Element comm = sub(mul(x, m), mul(m, x));
        if (op_norm(comm) > kMinkTol * (1.0 + nx))
            throw Error(errc::invalid_argument,
                        "central-element hypothesis violated: x does not "
                        "commute with the ambient algebra");
    }
}

} // namespace

MinkowskiCheck check_minkowski(const SquareInstance& sq, const Element& x,
                               double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw Error(errc::invalid_argument, "exponent p must satisfy p >= 1");
    require_positive(sq, x, "x");
    if (sq.hypothesis() == SquareInstance::Hypothesis::central_element)
        require_central(sq, x);

    Element ek = sq.expect_K(x);
    Element lhs = matrix_power(sq.expect_L(matrix_power(ek, p)), 1.0 / p);
    Element el = sq.expect_L(matrix_power(x, p));
    Element rhs = sq.expect_K(matrix_power(el, 1.0 / p));

    Element diff = sub(rhs, lhs);
    MinkowskiCheck out;
    out.margin = min_eigenvalue(diff);
    out.norm_gap = op_norm(diff);
    out.tolerance = kMinkTol * (1.0 + std::pow(op_norm(x), p));
    out.holds = out.margin >= -out.tolerance;
    return out;
}

MinkowskiCheck check_power_variant(const SquareInstance& sq, const Element& x,
                                   double p1, double p2) {
    if (!(p1 >= 1.0) || !(p2 >= p1) || !std::isfinite(p2))
        throw Error(errc::invalid_argument, "exponents must satisfy 1 <= p1 <= p2");
    require_positive(sq, x, "x");
    if (sq.hypothesis() == SquareInstance::Hypothesis::central_element)
        require_central(sq, x);

    Element lhs = matrix_power(
        sq.expect_L(matrix_power(sq.expect_K(matrix_power(x, p1)), p2 / p1)),
        1.0 / p2);
    Element rhs = matrix_power(
        sq.expect_K(matrix_power(sq.expect_L(matrix_power(x, p2)), p1 / p2)),
        1.0 / p1);

    Element diff = sub(rhs, lhs);
    MinkowskiCheck out;
    out.margin = min_eigenvalue(diff);
    out.norm_gap = op_norm(diff);
    out.tolerance = kMinkTol * (1.0 + std::pow(op_norm(x), p2));
    out.holds = out.margin >= -out.tolerance;
    return out;
}

HolderCheck check_reduced_holder(const SquareInstance& sq, const Element& x,
                                 const Element& y, const Element& q, double p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw Error(errc::invalid_argument, "reduced Hoelder needs p > 1");
    require_positive(sq, x, "x");
    require_positive(sq, y, "y");
    sq.require_element(q);
    Element q2 = mul(q, q);
    if (!is_hermitian(q, 1e-10) ||
        op_norm(sub(q2, q)) > kEqTol * (1.0 + op_norm(q)))
        throw Error(errc::invalid_argument, "q must be a projection");

    const double pp = p / (p - 1.0);
    HolderCheck out;
    out.lhs = sq.trace(mul(mul(q, x), mul(q, y))).real();
    const double tx = sq.trace(mul(mul(q, matrix_power(x, p)), q)).real();
    const double ty = sq.trace(mul(mul(q, matrix_power(y, pp)), q)).real();
    out.rhs = (tx > 0.0 ? std::pow(tx, 1.0 / p) : 0.0) *
              (ty > 0.0 ? std::pow(ty, 1.0 / pp) : 0.0);
    out.tolerance = kEqTol * std::max(1.0, out.rhs);
    out.holds = out.lhs <= out.rhs + out.tolerance;
    out.commutator_x = op_norm(sub(mul(q, x), mul(x, q)));
    out.commutator_y = op_norm(sub(mul(q, y), mul(y, q)));

    /* Equality diagnostics: distance of (qxq)^p from the ray through
       (qyq)^{p'}; on the commuting equality cases (xq)^p = (qxq)^p. */
    Element a = matrix_power(hermitian_part(mul(mul(q, x), q)), p);
    Element b = matrix_power(hermitian_part(mul(mul(q, y), q)), pp);
    const double bb = fro_inner(b, b);
    out.lambda = bb > 0.0 ? std::max(0.0, fro_inner(b, a) / bb) : 0.0;
    Element resid = a;
    for (std::size_t t = 0; t < resid.blocks.size(); ++t)
        resid.blocks[t] -= out.lambda * b.blocks[t];
    out.proportionality = frobenius(resid);
    return out;
}

HolderEqualityCase make_holder_equality_case(const SquareInstance& sq, Rng& rng,
                                             double p) {
    if (!(p > 1.0))
        throw Error(errc::invalid_argument, "reduced Hoelder needs p > 1");
    const double pp = p / (p - 1.0);
    HolderEqualityCase out;
    out.p = p;
    out.lambda = rng.uniform(0.5, 2.0);
    for (const auto& [a, b] : sq.factors()) {
        const Index n = a * b;
        CMatrix u = random_unitary(rng, n);
        Eigen::VectorXd bits(n), xi(n), eta(n);
        bool any = false;
        for (Index i = 0; i < n; ++i) {
            bits(i) = rng.uniform() < 0.6 ? 1.0 : 0.0;
            any = any || bits(i) > 0.0;
        }
        if (!any) bits(static_cast<Index>(rng.uniform_index(
                      static_cast<std::size_t>(n)))) = 1.0;
        for (Index i = 0; i < n; ++i) {
            xi(i) = rng.uniform(0.2, 2.0);
            /* On the support of q: eta^{p'} = xi^p / lambda, giving exact
               scalar Hoelder equality; off the support eta is arbitrary. */
            eta(i) = bits(i) > 0.0
                         ? std::pow(std::pow(xi(i), p) / out.lambda, 1.0 / pp)
                         : rng.uniform(0.2, 2.0);
        }
        auto conj = [&](const Eigen::VectorXd& d) {
            CMatrix m = u * d.cast<std::complex<double>>().asDiagonal() * u.adjoint();
            return CMatrix(0.5 * (m + m.adjoint()));
        };
        out.x.blocks.push_back(conj(xi));
        out.y.blocks.push_back(conj(eta));
        out.q.blocks.push_back(conj(bits));
    }
    return out;
}

Eigen::MatrixXd conditional_expectation_central(const Eigen::MatrixXi& T,
                                                const Eigen::VectorXd& v1) {
    if (T.cols() != v1.size())
        throw Error(errc::invalid_argument, "trace vector length mismatch");
    if ((T.array() < 0).any())
        throw Error(errc::invalid_argument, "inclusion matrix must be nonnegative");
    if ((v1.array() <= 0.0).any())
        throw Error(errc::invalid_argument, "trace vector must be positive");
    Eigen::VectorXd v0 = T.cast<double>() * v1;
    Eigen::MatrixXd out(T.rows(), T.cols());
    for (Index i = 0; i < T.rows(); ++i) {
        if (!(v0(i) > 0.0))
            throw Error(errc::numeric, "zero induced trace on a row");
        for (Index j = 0; j < T.cols(); ++j) out(i, j) = T(i, j) * v1(j) / v0(i);
    }
    return out;
}

/* ---------------- randomized property suites ---------------- */

namespace {

SquareInstance random_instance(Rng& rng, bool allow_sum) {
    auto dims = [&] {
        return SquareInstance::tensor_square(
            static_cast<int>(rng.uniform_index(4)) + 1,
            static_cast<int>(rng.uniform_index(4)) + 1);
    };
    if (allow_sum && rng.uniform() < 0.3)
        return SquareInstance::direct_sum(dims(), dims(), rng.uniform(0.2, 0.8));
    return dims();
}

double pick_p(long long trial) {
    static constexpr double kExponents[] = {1.0, 1.5, 2.0, 3.0, 7.3};
    return kExponents[static_cast<std::size_t>(trial % 5)];
}

} // namespace

SuiteResult run_expectation_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"expectation-invariants", trials, 0, 0.0, 0.0};
    Rng rng(derive_seed(seed, 101));
    for (long long t = 0; t < trials; ++t) {
        SquareInstance sq = random_instance(rng, true);
        Element x = sq.random_hermitian(rng);
        const double tol = kEqTol * (1.0 + op_norm(x));
        bool ok = true;
        auto gap = [&](double g) {
            res.worst_gap = std::max(res.worst_gap, g);
            if (g > tol) ok = false;
        };

        Element ek = sq.expect_K(x);
        Element el = sq.expect_L(x);
        gap(op_norm(sub(sq.expect_K(ek), ek)));                 // idempotent
        gap(op_norm(sub(sq.expect_L(el), el)));
        gap(std::abs((sq.trace(ek) - sq.trace(x)).real()) +
            std::abs((sq.trace(ek) - sq.trace(x)).imag()));     // trace-preserving
        Element en = sq.expect_N(x);
        gap(op_norm(sub(sq.expect_K(el), en)));                 // commuting square
        gap(op_norm(sub(sq.expect_L(ek), en)));

        /* Bimodularity over K: E_K(k1 x k2) = k1 E_K(x) k2. */
        Element k1 = sq.expect_K(sq.random_hermitian(rng));
        Element k2 = sq.expect_K(sq.random_hermitian(rng));
        gap(op_norm(sub(sq.expect_K(mul(mul(k1, x), k2)), mul(mul(k1, ek), k2))));

        /* Positivity. */
        Element pos = sq.random_positive(rng);
        if (min_eigenvalue(sq.expect_K(pos)) < -tol) ok = false;
        if (min_eigenvalue(sq.expect_L(pos)) < -tol) ok = false;

        if (!ok) ++res.failures;
    }
    return res;
}

SuiteResult run_minkowski_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"minkowski-tensor", trials, 0, 0.0, 0.0};
    Rng rng(derive_seed(seed, 202));
    for (long long t = 0; t < trials; ++t) {
        SquareInstance sq = SquareInstance::tensor_square(
            static_cast<int>(rng.uniform_index(4)) + 1,
            static_cast<int>(rng.uniform_index(4)) + 1);
        Element x = sq.random_positive(rng);
        const double scale = rng.uniform(0.5, 2.0);
        for (CMatrix& b : x.blocks) b *= scale;
        const double p = pick_p(t);
        MinkowskiCheck chk = check_minkowski(sq, x, p);
        res.worst_margin = std::min(res.worst_margin, chk.margin / chk.tolerance * kMinkTol);
        if (!chk.holds) ++res.failures;
        if (p == 1.0) {
            const double gap = chk.norm_gap / (1.0 + op_norm(x));
            res.worst_gap = std::max(res.worst_gap, gap);
            if (gap > kEqTol) ++res.failures;
        }
    }
    return res;
}

SuiteResult run_minkowski_central_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"minkowski-central", trials, 0, 0.0, 0.0};
    Rng rng(derive_seed(seed, 303));
    for (long long t = 0; t < trials; ++t) {
        SquareInstance sq = random_instance(rng, true);
        sq.set_hypothesis(SquareInstance::Hypothesis::central_element);
        Element x = sq.random_central_positive(rng);
        const double p = pick_p(t);
        MinkowskiCheck chk = check_minkowski(sq, x, p);
        res.worst_margin = std::min(res.worst_margin, chk.margin / chk.tolerance * kMinkTol);
        if (!chk.holds) ++res.failures;
        /* Central x lies in every corner algebra, so both sides equal x. */
        const double gap = chk.norm_gap / (1.0 + op_norm(x));
        res.worst_gap = std::max(res.worst_gap, gap);
        if (gap > kEqTol) ++res.failures;
    }
    return res;
}

SuiteResult run_power_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"power-monotone", trials, 0, 0.0, 0.0};
    Rng rng(derive_seed(seed, 404));
    for (long long t = 0; t < trials; ++t) {
        SquareInstance sq = random_instance(rng, false);
        Element x = sq.random_positive(rng);
        const double p1 = 1.0 + rng.uniform() * 3.0;
        const double p2 = p1 + rng.uniform() * 3.0;
        MinkowskiCheck chk = check_power_variant(sq, x, p1, p2);
        res.worst_margin = std::min(res.worst_margin, chk.margin / chk.tolerance * kMinkTol);
        if (!chk.holds) ++res.failures;
    }
    return res;
}

SuiteResult run_holder_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"reduced-holder", trials, 0,
                    -std::numeric_limits<double>::infinity(), 0.0};
    Rng rng(derive_seed(seed, 505));
    for (long long t = 0; t < trials; ++t) {
        const int n = static_cast<int>(rng.uniform_index(5)) + 2;
        SquareInstance sq = SquareInstance::tensor_square(n, 1);
        Element x = sq.random_positive(rng);
        Element y = sq.random_positive(rng);
        Element q = sq.random_projection(rng);
        const double p = 1.1 + rng.uniform() * 3.9;
        HolderCheck chk = check_reduced_holder(sq, x, y, q, p);
        /* worst_margin = closest approach of lhs - rhs to zero from below;
           anything above the tolerance would be a violation. */
        const double margin = (chk.lhs - chk.rhs) / std::max(1.0, chk.rhs);
        res.worst_margin = std::max(res.worst_margin, margin);
        if (!chk.holds) ++res.failures;
    }
    return res;
}

SuiteResult run_holder_equality_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"reduced-holder-equality", trials, 0, 0.0, 0.0};
    Rng rng(derive_seed(seed, 606));
    for (long long t = 0; t < trials; ++t) {
        const int n = static_cast<int>(rng.uniform_index(5)) + 2;
        SquareInstance sq = SquareInstance::tensor_square(n, 1);
        const double p = 1.25 + rng.uniform() * 2.75;
        HolderEqualityCase cs = make_holder_equality_case(sq, rng, p);
        HolderCheck chk = check_reduced_holder(sq, cs.x, cs.y, cs.q, p);
        const double gap = std::abs(chk.rhs - chk.lhs) / std::max(1.0, chk.rhs);
        res.worst_gap = std::max(res.worst_gap, gap);
        if (gap > kEqTol || !chk.holds) ++res.failures;
    }
    return res;
}

SuiteResult run_condexp_suite(long long trials, std::uint64_t seed) {
    SuiteResult res{"central-expectation", trials, 0, 0.0, 0.0};
    Rng rng(derive_seed(seed, 707));
    auto random_inclusion = [&](Index rows, Index cols) {
        Eigen::MatrixXi T(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            bool any = false;
            for (Index j = 0; j < cols; ++j) {
                T(i, j) = static_cast<int>(rng.uniform_index(3));
                any = any || T(i, j) > 0;
            }
            if (!any) T(i, static_cast<Index>(rng.uniform_index(
                          static_cast<std::size_t>(cols)))) = 1;
        }
        return T;
    };
    for (long long t = 0; t < trials; ++t) {
        const Index n0 = static_cast<Index>(rng.uniform_index(4)) + 1;
        const Index n1 = static_cast<Index>(rng.uniform_index(4)) + 1;
        const Index n2 = static_cast<Index>(rng.uniform_index(4)) + 1;
        Eigen::MatrixXi T = random_inclusion(n0, n1);
        Eigen::MatrixXi T2 = random_inclusion(n1, n2);
        Eigen::VectorXd v2(n2);
        for (Index i = 0; i < n2; ++i) v2(i) = rng.uniform(0.1, 2.0);
        Eigen::VectorXd v1 = T2.cast<double>() * v2;

        Eigen::MatrixXd m1 = conditional_expectation_central(T, v1);
        Eigen::MatrixXd m2 = conditional_expectation_central(T2, v2);
        Eigen::MatrixXd m12 = conditional_expectation_central(T * T2, v2);

        double gap = (m1 * m2 - m12).cwiseAbs().maxCoeff();
        gap = std::max(gap,
                       (m1.rowwise().sum().array() - 1.0).abs().maxCoeff());
        gap = std::max(gap,
                       (m2.rowwise().sum().array() - 1.0).abs().maxCoeff());
        res.worst_gap = std::max(res.worst_gap, gap);
        if (gap > kEqTol) ++res.failures;
    }
    return res;
}

std::vector<SuiteResult> run_oracle_suites(long long trials, std::uint64_t seed) {
    if (trials < 1)
        throw Error(errc::invalid_argument, "trial count must be positive");
    std::vector<SuiteResult> out;
    out.push_back(run_expectation_suite(trials, seed));
    out.push_back(run_minkowski_suite(trials, seed));
    out.push_back(run_minkowski_central_suite(trials, seed));
    out.push_back(run_power_suite(trials, seed));
    out.push_back(run_holder_suite(trials, seed));
    out.push_back(run_holder_equality_suite(std::max<long long>(trials / 10, 10), seed));
    out.push_back(run_condexp_suite(trials, seed));
    return out;
}

long long total_failures(const std::vector<SuiteResult>& results) {
    long long n = 0;
    for (const auto& r : results) n += r.failures;
    return n;
}

std::string oracle_summary(const std::vector<SuiteResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        char margin[32], gap[32];
        std::snprintf(margin, sizeof margin, "%.3e", r.worst_margin);
        std::snprintf(gap, sizeof gap, "%.3e", r.worst_gap);
        os << r.name << ": trials=" << r.trials << " failures=" << r.failures
           << " worst-margin=" << margin << " worst-gap=" << gap << '\n';
    }
    os << "total failures: " << total_failures(results) << '\n';
    return os.str();
}

} // namespace mink
