#include "fusion_ring.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace mink {

namespace {

/* Residual above this (relative) means the computed dimension vector does
   not satisfy d_i d_j = sum_l N_{ij}^l d_l and must not be used. */
constexpr double kResidualAccept = 1e-9;
constexpr std::size_t kDenseRankLimit = 64;
constexpr int kPowerIterLimit = 10000;

} // namespace

FusionRing::FusionRing(std::size_t rank, std::vector<int> mult, std::string label)
    : rank_(rank), mult_(std::move(mult)), label_(std::move(label)) {
    if (rank_ == 0)
        throw Error(errc::invalid_argument, "fusion ring rank must be positive");
    if (mult_.size() != rank_ * rank_ * rank_) {
        std::ostringstream os;
        os << "structure constant tensor has " << mult_.size()
           << " entries, expected rank^3 = " << rank_ * rank_ * rank_;
        throw Error(errc::invalid_argument, os.str());
    }
    for (int v : mult_)
        if (v < 0)
            throw Error(errc::invalid_argument,
                        "structure constants must be nonnegative integers");
}

int FusionRing::max_multiplicity() const {
    return *std::max_element(mult_.begin(), mult_.end());
}

const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::unit: return "unit";
        case Axiom::associativity: return "associativity";
        case Axiom::duality: return "duality";
        case Axiom::anti_isomorphism: return "anti-isomorphism";
    }
    return "?";
}

ValidationReport validate(const FusionRing& ring) {
    const std::size_t s = ring.rank();
    ValidationReport report;
    auto add = [&](Axiom ax, std::vector<std::size_t> where, std::string msg) {
        report.violations.push_back({ax, std::move(where), std::move(msg)});
    };

    /* Unit law: N_{0j}^k = delta_{jk} = N_{j0}^k. */
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t k = 0; k < s; ++k) {
            int want = j == k ? 1 : 0;
            if (ring.mult(0, j, k) != want) {
                std::ostringstream os;
                os << "unit law: N(1," << j + 1 << ";" << k + 1 << ") = "
                   << ring.mult(0, j, k) << ", expected " << want;
                add(Axiom::unit, {0, j, k}, os.str());
            }
            if (ring.mult(j, 0, k) != want) {
                std::ostringstream os;
                os << "unit law: N(" << j + 1 << ",1;" << k + 1 << ") = "
                   << ring.mult(j, 0, k) << ", expected " << want;
                add(Axiom::unit, {j, 0, k}, os.str());
            }
        }

    /* Associativity via left-multiplication matrices:
       L_i L_j = sum_l N_{ij}^l L_l, where (L_i)_{nk} = N_{ik}^n. */
    using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<IntMat> L(s, IntMat(s, s));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t n = 0; n < s; ++n)
            for (std::size_t k = 0; k < s; ++k)
                L[i](static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                    ring.mult(i, k, n);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            IntMat lhs = IntMat::Zero(s, s);
            for (std::size_t l = 0; l < s; ++l)
                if (ring.mult(i, j, l) != 0) lhs += ring.mult(i, j, l) * L[l];
            IntMat rhs = L[i] * L[j];
            if (lhs != rhs) {
                for (std::size_t k = 0; k < s; ++k)
                    for (std::size_t n = 0; n < s; ++n) {
                        long long a = lhs(static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(k));
                        long long b = rhs(static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(k));
                        if (a != b) {
                            std::ostringstream os;
                            os << "associativity: sum_l N(" << i + 1 << "," << j + 1
                               << ";l) N(l," << k + 1 << ";" << n + 1 << ") = " << a
                               << " but sum_m N(" << i + 1 << ",m;" << n + 1 << ") N("
                               << j + 1 << "," << k + 1 << ";m) = " << b << " at (i,j,k,n)=("
                               << i + 1 << "," << j + 1 << "," << k + 1 << "," << n + 1 << ")";
                            add(Axiom::associativity, {i, j, k, n}, os.str());
                        }
                    }
            }
        }

    /* Duality: for each i a unique j with N_{ij}^0 = 1, all other N_{ij}^0 = 0. */
    std::vector<std::size_t> dual(s, s);
    bool dual_ok = true;
    for (std::size_t i = 0; i < s; ++i) {
        std::vector<std::size_t> hits;
        for (std::size_t j = 0; j < s; ++j) {
            int v = ring.mult(i, j, 0);
            if (v > 1) {
                std::ostringstream os;
                os << "duality: N(" << i + 1 << "," << j + 1 << ";1) = " << v
                   << ", expected 0 or 1";
                add(Axiom::duality, {i, j}, os.str());
                dual_ok = false;
            }
            if (v >= 1) hits.push_back(j);
        }
        if (hits.size() != 1) {
            std::ostringstream os;
            os << "duality: basis element " << i + 1 << " has " << hits.size()
               << " dual candidates, expected exactly one";
            add(Axiom::duality, {i}, os.str());
            dual_ok = false;
        } else {
            dual[i] = hits[0];
        }
    }
    if (dual_ok) {
        for (std::size_t i = 0; i < s; ++i)
            if (dual[dual[i]] != i) {
                std::ostringstream os;
                os << "duality: dual map is not an involution at " << i + 1
                   << " (dual(dual(" << i + 1 << ")) = " << dual[dual[i]] + 1 << ")";
                add(Axiom::duality, {i}, os.str());
                dual_ok = false;
            }
    }

    /* Anti-isomorphism N_{ij}^k = N_{j* i*}^{k*}; needs the dual map. */
    if (dual_ok) {
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t k = 0; k < s; ++k) {
                    int a = ring.mult(i, j, k);
                    int b = ring.mult(dual[j], dual[i], dual[k]);
                    if (a != b) {
                        std::ostringstream os;
                        os << "anti-isomorphism: N(" << i + 1 << "," << j + 1 << ";"
                           << k + 1 << ") = " << a << " but N(" << dual[j] + 1 << ","
                           << dual[i] + 1 << ";" << dual[k] + 1 << ") = " << b;
                        add(Axiom::anti_isomorphism, {i, j, k}, os.str());
                    }
                }
    }

    return report;
}

std::size_t dual_of(const FusionRing& ring, std::size_t i) {
    const std::size_t s = ring.rank();
    if (i >= s) throw Error(errc::invalid_argument, "basis index out of range");
    std::size_t found = s;
    for (std::size_t j = 0; j < s; ++j) {
        int v = ring.mult(i, j, 0);
        if (v == 0) continue;
        if (v > 1 || found != s) {
            std::ostringstream os;
            os << "basis element " << i + 1 << " has no unique dual";
            throw Error(errc::validation, os.str());
        }
        found = j;
    }
    if (found == s) {
        std::ostringstream os;
        os << "basis element " << i + 1 << " has no dual";
        throw Error(errc::validation, os.str());
    }
    return found;
}

namespace {

/* Spectral radius of a nonnegative matrix via shifted power iteration.
   The +I shift makes the Perron root strictly dominant, so the iteration
   converges from the all-ones start vector. */
double power_radius(const Eigen::MatrixXd& M, double tol) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXd A = M + Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
    double lambda = 0.0;
    for (int it = 0; it < kPowerIterLimit; ++it) {
        Eigen::VectorXd y = A * x;
        double norm = y.norm();
        if (norm == 0.0)
            throw Error(errc::numeric, "power iteration collapsed to zero vector");
        lambda = x.dot(y); // Rayleigh-style estimate of the dominant eigenvalue
        if ((y - lambda * x).norm() <= tol * norm) return lambda - 1.0;
        x = y / norm;
    }
    throw Error(errc::numeric,
                "power iteration did not converge within iteration limit");
}

} // namespace

DimVector pf_dimensions(const FusionRing& ring, double tol, DimMethod method) {
    const std::size_t s = ring.rank();
    if (!(tol > 0))
        throw Error(errc::invalid_argument, "tolerance must be positive");
    DimMethod used = method;
    if (method == DimMethod::automatic)
        used = s <= kDenseRankLimit ? DimMethod::dense : DimMethod::power;

    DimVector out;
    out.dims.resize(s);
    out.method = used;
    for (std::size_t i = 0; i < s; ++i) {
        Eigen::MatrixXd L(s, s);
        for (std::size_t n = 0; n < s; ++n)
            for (std::size_t k = 0; k < s; ++k)
                L(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                    ring.mult(i, k, n);
        double d;
        if (used == DimMethod::dense) {
            Eigen::EigenSolver<Eigen::MatrixXd> es(L, /*computeEigenvectors=*/false);
            if (es.info() != Eigen::Success)
                throw Error(errc::numeric, "dense eigensolver failed");
            d = es.eigenvalues().cwiseAbs().maxCoeff();
        } else {
            d = power_radius(L, tol);
        }
        if (!(d > 0.0))
            throw Error(errc::numeric, "nonpositive computed dimension");
        out.dims[i] = d;
    }

    /* d_i d_j = sum_l N_{ij}^l d_l must hold for a valid ring; a large
       residual means the eigencomputation (or the input) is unusable. */
    double residual = 0.0;
    bool accept = true;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            double prod = out.dims[i] * out.dims[j];
            double sum = 0.0;
            for (std::size_t l = 0; l < s; ++l)
                if (int m = ring.mult(i, j, l); m != 0) sum += m * out.dims[l];
            double diff = std::abs(prod - sum);
            residual = std::max(residual, diff);
            if (diff > kResidualAccept * std::max(1.0, prod)) accept = false;
        }
    out.residual = residual;
    if (!accept) {
        std::ostringstream os;
        os << "dimension vector fails d_i d_j = sum_l N_{ij}^l d_l (residual "
           << residual << ")";
        throw Error(errc::numeric, os.str());
    }
    for (double d : out.dims)
        if (d < 1.0 - kResidualAccept)
            throw Error(errc::numeric, "computed dimension below 1");
    return out;
}

} // namespace mink
