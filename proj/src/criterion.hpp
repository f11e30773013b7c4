#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "fusion_ring.hpp"

namespace mink {

struct TripleEvaluation {
    double lhs;
    double rhs;
    double ratio; // rhs / lhs with the conventions of side_ratio()
};

/* rhs/lhs with degenerate cases pinned: 0/0 -> 1 (inequality holds with
   equality), 0 lhs against positive rhs -> +infinity.  For consistent
   inputs (fusion rings, path-consistent squares) lhs and rhs always
   vanish together, so the infinity branch is purely defensive. */
double side_ratio(double lhs, double rhs);

/* Both sides of the dimension-weighted Minkowski inequality at basis
   triple (i,j,k) with weight vector a >= 0 and exponent p >= 1:

     lhs = ( sum_l ( sum_n N_{lk}^n a_n d_n / d_l )^p N_{ij}^l d_l / d_j )^{1/p}
     rhs = sum_m ( sum_n N_{im}^n a_n^p d_n / d_m )^{1/p} N_{jk}^m d_m / d_j

   A ratio below 1 certifies that no unitary categorification of the ring
   exists.  At p = 1 both sides coincide by associativity. */
TripleEvaluation cat_sides(const FusionRing& ring, const DimVector& dims,
                           std::size_t i, std::size_t j, std::size_t k,
                           std::span<const double> a, double p);

/* Precomputed weights for one (ring, dims, triple); the search evaluates
   the same triple millions of times, so rows are flattened once and
   eval() performs no allocation. */
class TripleKernel {
public:
    TripleKernel(const FusionRing& ring, const DimVector& dims,
                 std::size_t i, std::size_t j, std::size_t k);

    std::size_t rank() const { return rank_; }
    TripleEvaluation eval(const double* a, double p) const;

private:
    struct Row {
        double weight;             // outer weight of this term
        std::vector<double> coeff; // dense coefficient row over the basis
    };
    std::size_t rank_;
    std::vector<Row> lhs_, rhs_;
    mutable std::vector<double> pow_buf_; // a_n^p scratch, reused across evals
};

/* Commuting-square datum: four nonnegative integer inclusion matrices

       A00 --t00_01--> A01
        |                |
     t00_10           t01_11
        v                v
       A10 --t10_11--> A11

   with a strictly positive trace vector v11 on A11.  Path consistency
   t00_01 * t01_11 = t00_10 * t10_11 makes the two induced traces on A00
   agree. */
struct CommutingSquareSpec {
    Eigen::MatrixXi t00_01; // n00 x n01
    Eigen::MatrixXi t01_11; // n01 x n11
    Eigen::MatrixXi t00_10; // n00 x n10
    Eigen::MatrixXi t10_11; // n10 x n11
    Eigen::VectorXd v11;    // length n11, entrywise positive
    std::string label;
};

struct InducedTraces {
    Eigen::VectorXd v10, v01, v00;
};

/* Shape, nonnegativity, positivity and path-consistency checks;
   throws Error(validation) with a description on the first failure. */
void validate_square(const CommutingSquareSpec& spec);

/* v10 = t10_11 v11, v01 = t01_11 v11, v00 = t00_01 v01; requires all
   induced entries strictly positive. */
InducedTraces induced_traces(const CommutingSquareSpec& spec);

/* Both sides of the inequality for a commuting square, at row i of A00
   (0-based), weights a on the A11 factors, exponent p >= 1.  The ratio
   is invariant under rescaling v11. */
TripleEvaluation cs_sides(const CommutingSquareSpec& spec, std::size_t row,
                          std::span<const double> a, double p);

/* The square attached to a fusion-ring triple (i,j,k):
   t10_11 = [N_{lk}^n], t00_10 = [N_{ij}^l], t01_11 = [N_{im}^n],
   t00_01 = [N_{jk}^m], v11 = d / (d_i d_j d_k).  cs_sides on row 0 of
   this square reproduces the cat_sides ratio exactly. */
CommutingSquareSpec square_from_triple(const FusionRing& ring,
                                       const DimVector& dims, std::size_t i,
                                       std::size_t j, std::size_t k);

struct SquareVariant {
    CommutingSquareSpec spec;
    bool applicable;  // false when the swapped tuple is not a valid square
    std::string note; // why a variant was rejected, or the v11 provenance
};

/* The four index-swapped inequality instances of a square: the original
   plus the three tuples obtained by exchanging the roles of the corner
   algebras via transposes.  The original keeps its trace vector; each
   swapped variant gets the Perron eigenvector of G^t G (G the composite
   inclusion A00 -> A11), sum-normalized -- the natural choice up to the
   scale invariance of the ratio.  Variants whose matrices fail path
   consistency or positivity are returned with applicable = false. */
std::vector<SquareVariant> transpose_variants(const CommutingSquareSpec& spec);

} // namespace mink
