#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "criterion.hpp"
#include "rng.hpp"

namespace mink {

using CMatrix = Eigen::MatrixXcd;

/* Block-diagonal element of a multi-matrix algebra (+)_t M_{k_t}. */
struct Element {
    std::vector<CMatrix> blocks;
};

double op_norm(const Element& x);
bool is_hermitian(const Element& x, double tol = 1e-10);
Element hermitian_part(const Element& x);
/* Smallest eigenvalue of the hermitian part across all blocks. */
double min_eigenvalue(const Element& x);

/* x^p for hermitian positive x via eigendecomposition; rounding noise
   below zero is clamped to zero, eigenvalues negative beyond tolerance
   raise Error(invalid_argument).  p = 1 returns x unchanged, keeping the
   p = 1 equality cases sharp. */
Element matrix_power(const Element& x, double p);

/* Concrete commuting square of multi-matrix algebras

       N = (+)_t C           subset  L = (+)_t 1 (x) M_{b_t}
       K = (+)_t M_{a_t} (x) 1  subset  M = (+)_t M_{a_t} (x) M_{b_t}

   with block trace weights w_t (sum_t a_t b_t w_t = 1).  The
   trace-preserving conditional expectations onto K, L, N are partial
   traces; E_K E_L = E_L E_K = E_N holds exactly.  K and L always
   commute here, so the commuting-subalgebras hypothesis is built in;
   the central-element hypothesis instead restricts admissible x. */
class SquareInstance {
public:
    enum class Hypothesis { commuting_subalgebras, central_element };

    static SquareInstance tensor_square(int a_dim, int b_dim);
    /* Weighted direct sum: traces scaled by weight and 1 - weight. */
    static SquareInstance direct_sum(const SquareInstance& first,
                                     const SquareInstance& second,
                                     double weight);

    const std::vector<std::pair<int, int>>& factors() const { return factors_; }
    const std::vector<double>& weights() const { return weights_; }
    Hypothesis hypothesis() const { return hypothesis_; }
    void set_hypothesis(Hypothesis h) { hypothesis_ = h; }

    std::complex<double> trace(const Element& x) const;
    Element expect_K(const Element& x) const;
    Element expect_L(const Element& x) const;
    Element expect_N(const Element& x) const;
    Element identity() const;
    Element zero() const;

    Element random_positive(Rng& rng) const;  // unit operator norm
    Element random_hermitian(Rng& rng) const;
    Element random_central_positive(Rng& rng) const;
    Element random_projection(Rng& rng) const;

    void require_element(const Element& x) const; // shape check

    /* The scalar datum of this square: diagonal inclusion matrices
       diag(b_t), diag(a_t), diag(a_t), diag(b_t) with v11 = w.  For
       central x these squares make both operator sides block-scalar,
       matching cs_sides componentwise. */
    CommutingSquareSpec to_square() const;

private:
    std::vector<std::pair<int, int>> factors_;
    std::vector<double> weights_;
    Hypothesis hypothesis_ = Hypothesis::commuting_subalgebras;
};

struct MinkowskiCheck {
    double margin;    // min eigenvalue of rhs - lhs
    double norm_gap;  // operator norm of rhs - lhs (p = 1 equality check)
    double tolerance; // threshold actually applied to margin
    bool holds;
};

/* E_L(E_K(x)^p)^{1/p} <= E_K(E_L(x^p)^{1/p}) for positive x, p >= 1.
   Under the central-element hypothesis, x must commute with the ambient
   algebra (checked by commutator sampling). */
MinkowskiCheck check_minkowski(const SquareInstance& sq, const Element& x,
                               double p);

/* Two-exponent form: E_L(E_K(x^{p1})^{p2/p1})^{1/p2}
   <= E_K(E_L(x^{p2})^{p1/p2})^{1/p1} for 1 <= p1 <= p2. */
MinkowskiCheck check_power_variant(const SquareInstance& sq, const Element& x,
                                   double p1, double p2);

struct HolderCheck {
    double lhs;             // tr(q x q y)
    double rhs;             // tr(q x^p q)^{1/p} tr(q y^{p'} q)^{1/p'}
    double tolerance;
    bool holds;
    double commutator_x;    // ||[q, x]||
    double commutator_y;    // ||[q, y]||
    double proportionality; // min_l ||(qxq)^p - l (qyq)^{p'}||_F
    double lambda;          // the minimizing l
};

/* Projection-reduced Hoelder inequality tr(qxqy) <= tr(qx^pq)^{1/p}
   tr(qy^{p'}q)^{1/p'} for positive x, y, a projection q, and p > 1;
   equality requires [q,x] = [q,y] = 0 and (xq)^p proportional to
   (yq)^{p'}, which the diagnostics fields quantify. */
HolderCheck check_reduced_holder(const SquareInstance& sq, const Element& x,
                                 const Element& y, const Element& q, double p);

struct HolderEqualityCase {
    Element x, y, q;
    double p;
    double lambda;
};

/* A constructed instance attaining Hoelder equality: x, y, q share an
   eigenbasis and (xq)^p = lambda (yq)^{p'} by design. */
HolderEqualityCase make_holder_equality_case(const SquareInstance& sq, Rng& rng,
                                             double p);

/* Central conditional-expectation matrix of an inclusion: entry (i,j) is
   T_ij v1_j / v0_i with v0 = T v1.  Maps coefficient vectors of central
   elements downward; rows sum to 1, and composing inclusions composes
   the matrices. */
Eigen::MatrixXd conditional_expectation_central(const Eigen::MatrixXi& T,
                                                const Eigen::VectorXd& v1);

struct SuiteResult {
    std::string name;
    long long trials = 0;
    long long failures = 0;
    double worst_margin = 0.0; // most negative normalized margin seen
    double worst_gap = 0.0;    // largest equality-type deviation seen
};

SuiteResult run_expectation_suite(long long trials, std::uint64_t seed);
SuiteResult run_minkowski_suite(long long trials, std::uint64_t seed);
SuiteResult run_minkowski_central_suite(long long trials, std::uint64_t seed);
SuiteResult run_power_suite(long long trials, std::uint64_t seed);
SuiteResult run_holder_suite(long long trials, std::uint64_t seed);
SuiteResult run_holder_equality_suite(long long trials, std::uint64_t seed);
SuiteResult run_condexp_suite(long long trials, std::uint64_t seed);

std::vector<SuiteResult> run_oracle_suites(long long trials, std::uint64_t seed);
std::string oracle_summary(const std::vector<SuiteResult>& results);
long long total_failures(const std::vector<SuiteResult>& results);

} // namespace mink
