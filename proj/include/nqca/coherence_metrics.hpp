// coherence_metrics.hpp — relative-entropy and l1 coherence in the site basis
//
// All entropies are in nats.

#pragma once

#include "nqca/excitation_state.hpp"

#include <span>

namespace nqca {

// Eigenvalues in [-negative_tolerance, 0) are treated as zero; anything
// more negative raises InvalidStateError.
inline constexpr double negative_tolerance = 1e-10;

struct CoherenceRecord {
    double c_s = 0.0;
    double c_1 = 0.0;
};

struct Eigensystem {
    Eigen::VectorXd values; // ascending
    Matrix vectors;         // columns are eigenvectors
};

Eigensystem hermitian_eigensystem(const DensityMatrix& rho);

DensityMatrix diagonal_part(const DensityMatrix& rho);

// -sum p ln p with 0 ln 0 = 0. No renormalization is applied.
double entropy_of_spectrum(std::span<const double> eigenvalues);

double von_neumann_entropy(const DensityMatrix& rho);

// S(rho^D) - S(rho).
double coherence_rel_entropy(const DensityMatrix& rho);

// sum_{i != j} |rho_ij|
double coherence_l1(const DensityMatrix& rho);

// Both measures, sharing one eigendecomposition.
CoherenceRecord measure_coherence(const DensityMatrix& rho);
CoherenceRecord measure_coherence(const Matrix& rho);

} // namespace nqca
