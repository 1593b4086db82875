#include "nqca/excitation_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nqca {

namespace {

void check_site(int n, int site, const char* what) {
    if (site < 1 || site > n) {
        throw DomainError(std::string(what) + ": site index " + std::to_string(site) +
                          " outside 1.." + std::to_string(n));
    }
}

} // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw DomainError("PureState: empty amplitude vector");
    const double norm = amps_.squaredNorm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw DomainError("PureState: amplitudes not normalized (sum |c|^2 = " +
                          std::to_string(norm) + ")");
    }
}

cplx PureState::amplitude(int site) const {
    check_site(dim(), site, "PureState::amplitude");
    return amps_(site - 1);
}

DensityMatrix::DensityMatrix(Matrix entries) : rho_(std::move(entries)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw DomainError("DensityMatrix: entries must be a non-empty square matrix");
    }
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : rho_(psi.amplitudes() * psi.amplitudes().adjoint()) {
    // exact Hermiticity: the outer product can differ in the last bit
    for (Eigen::Index j = 0; j < rho_.cols(); ++j) {
        rho_(j, j) = rho_(j, j).real();
        for (Eigen::Index i = j + 1; i < rho_.rows(); ++i) rho_(j, i) = std::conj(rho_(i, j));
    }
}

cplx DensityMatrix::operator()(int row_site, int col_site) const {
    check_site(dim(), row_site, "DensityMatrix");
    check_site(dim(), col_site, "DensityMatrix");
    return rho_(row_site - 1, col_site - 1);
}

double DensityMatrix::population(int site) const {
    check_site(dim(), site, "DensityMatrix::population");
    return rho_(site - 1, site - 1).real();
}

DensityMatrix single_excitation_state(int n, int site) {
    if (n < 1) throw DomainError("single_excitation_state: chain length must be positive");
    check_site(n, site, "single_excitation_state");
    Matrix rho = Matrix::Zero(n, n);
    rho(site - 1, site - 1) = 1.0;
    return DensityMatrix(std::move(rho));
}

double mean_position(const DensityMatrix& rho) {
    const Matrix& m = rho.matrix();
    double x = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) x += m(k, k).real() * static_cast<double>(k + 1);
    return x;
}

double purity(const DensityMatrix& rho) {
    // Tr(rho^2) = sum |rho_nm|^2 for Hermitian rho
    return rho.matrix().squaredNorm();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& rho) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw InvalidStateError("hermitian_eigenvalues: eigensolver did not converge");
    }
    return solver.eigenvalues();
}

StateReport validate_state(const Matrix& rho, double tol) {
    StateReport r;
    r.tolerance = tol;
    if (rho.rows() == 0 || rho.rows() != rho.cols()) {
        r.hermitian = r.unit_trace = r.positive = false;
        r.hermiticity_deviation = r.trace_deviation = std::numeric_limits<double>::infinity();
        r.min_eigenvalue = -std::numeric_limits<double>::infinity();
        return r;
    }
    r.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    r.trace_deviation = std::abs(rho.trace() - cplx(1.0));
    r.min_eigenvalue = hermitian_eigenvalues(rho).minCoeff();
    r.hermitian = r.hermiticity_deviation <= tol;
    r.unit_trace = r.trace_deviation <= tol;
    r.positive = r.min_eigenvalue >= -tol;
    return r;
}

StateReport validate_state(const DensityMatrix& rho, double tol) {
    return validate_state(rho.matrix(), tol);
}

} // namespace nqca
