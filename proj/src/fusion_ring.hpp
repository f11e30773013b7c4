#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mink {

/* Fusion ring on basis b_0..b_{s-1} with structure constants
   N_{ij}^k = mult(i,j,k), stored flat in row-major [i][j][k] order.
   Indices are 0-based everywhere in memory; 1-based only at I/O surfaces.
   b_0 is the unit.  The constructor enforces shape and nonnegativity
   (structural preconditions); ring axioms are checked by validate(). */
class FusionRing {
public:
    FusionRing(std::size_t rank, std::vector<int> mult, std::string label = {});

    std::size_t rank() const { return rank_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    int mult(std::size_t i, std::size_t j, std::size_t k) const {
        return mult_[(i * rank_ + j) * rank_ + k];
    }
    const std::vector<int>& flat() const { return mult_; }

    int max_multiplicity() const;

private:
    std::size_t rank_;
    std::vector<int> mult_;
    std::string label_;
};

enum class Axiom { unit, associativity, duality, anti_isomorphism };

const char* axiom_name(Axiom a);

struct Violation {
    Axiom axiom;
    std::vector<std::size_t> where; // witnessing index tuple, 0-based
    std::string message;            // human-readable, indices rendered 1-based
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/* Check unit law, associativity, unique two-sided duals, and the
   dual anti-isomorphism N_{ij}^k = N_{j* i*}^{k*}.  Every violated
   axiom is reported with witnessing tuples; nothing throws. */
ValidationReport validate(const FusionRing& ring);

/* Index of the unique dual of b_i (N_{i j}^0 = delta_{j,i*}).
   Throws Error(validation) when no unique dual exists. */
std::size_t dual_of(const FusionRing& ring, std::size_t i);

enum class DimMethod { automatic, dense, power };

struct DimVector {
    std::vector<double> dims;
    double residual;  // max_{i,j} |d_i d_j - sum_l N_{ij}^l d_l|
    DimMethod method; // method actually used
};

/* Perron-Frobenius dimensions: d_i is the spectral radius of the
   left-multiplication matrix (L_i)_{nk} = N_{ik}^n.  Dense eigensolve
   for rank <= 64, shifted power iteration beyond (or on request).
   Requires a valid ring for the postconditions (d_i >= 1, small
   residual) to be meaningful; failures raise Error(numeric). */
DimVector pf_dimensions(const FusionRing& ring, double tol = 1e-12,
                        DimMethod method = DimMethod::automatic);

} // namespace mink
