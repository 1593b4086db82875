// excitation_state.hpp — single-excitation-sector states of an N-site chain
//
// Site labels are 1-based throughout the public interface: site n is the
// basis vector |n>, stored at row/column n-1.

#pragma once

#include "nqca/types.hpp"

#include <vector>

namespace nqca {

// Normalized amplitude vector sum_n c_n |n>.
class PureState {
public:
    // Throws DomainError if empty or | sum |c_n|^2 - 1 | > 1e-12.
    explicit PureState(Vector amplitudes);

    int dim() const { return static_cast<int>(amps_.size()); }
    cplx amplitude(int site) const;
    const Vector& amplitudes() const { return amps_; }

private:
    Vector amps_;
};

// N x N density matrix in the site basis. Immutable once built.
//
// Construction only checks shape; use validate_state() for the trace,
// Hermiticity, and positivity invariants.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);
    explicit DensityMatrix(const PureState& psi);

    int dim() const { return static_cast<int>(rho_.rows()); }
    cplx operator()(int row_site, int col_site) const;
    double population(int site) const;
    cplx trace() const { return rho_.trace(); }
    const Matrix& matrix() const { return rho_; }

private:
    Matrix rho_;
};

// |site><site| for a chain of n sites.
DensityMatrix single_excitation_state(int n, int site);

// sum_n rho_{n,n} * n, in site units.
double mean_position(const DensityMatrix& rho);

// Tr(rho^2).
double purity(const DensityMatrix& rho);

struct StateReport {
    double tolerance = 0.0;
    double hermiticity_deviation = 0.0; // max |rho_nm - conj(rho_mn)|
    double trace_deviation = 0.0;       // |Tr rho - 1|
    double min_eigenvalue = 0.0;
    bool hermitian = true;
    bool unit_trace = true;
    bool positive = true;

    bool ok() const { return hermitian && unit_trace && positive; }
};

StateReport validate_state(const Matrix& rho, double tol);
StateReport validate_state(const DensityMatrix& rho, double tol);

// Ascending eigenvalues of the Hermitian part of rho.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& rho);

} // namespace nqca
