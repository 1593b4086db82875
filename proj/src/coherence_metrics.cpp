#include "nqca/coherence_metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace nqca {

namespace {

double diagonal_entropy(const Matrix& rho) {
    std::vector<double> pops(static_cast<std::size_t>(rho.rows()));
    for (Eigen::Index k = 0; k < rho.rows(); ++k) pops[static_cast<std::size_t>(k)] = rho(k, k).real();
    return entropy_of_spectrum(pops);
}

double spectral_entropy(const Matrix& rho) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
    return entropy_of_spectrum(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

double relative_entropy_coherence(const Matrix& rho) {
    const double cs = diagonal_entropy(rho) - spectral_entropy(rho);
    if (cs < -negative_tolerance) {
        throw InvalidStateError("coherence_rel_entropy: negative value " + std::to_string(cs));
    }
    return cs < 0.0 ? 0.0 : cs;
}

double l1_coherence(const Matrix& rho) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            if (i != j) sum += std::abs(rho(i, j));
        }
    }
    return sum;
}

} // namespace

Eigensystem hermitian_eigensystem(const DensityMatrix& rho) {
    const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw InvalidStateError("hermitian_eigensystem: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

DensityMatrix diagonal_part(const DensityMatrix& rho) {
    Matrix d = Matrix::Zero(rho.dim(), rho.dim());
    d.diagonal() = rho.matrix().diagonal().real().cast<cplx>();
    return DensityMatrix(std::move(d));
}

double entropy_of_spectrum(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (double p : eigenvalues) {
        if (p < -negative_tolerance) {
            throw InvalidStateError("entropy: eigenvalue " + std::to_string(p) +
                                    " below -1e-10, state is not positive");
        }
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return spectral_entropy(rho.matrix()); }

double coherence_rel_entropy(const DensityMatrix& rho) { return relative_entropy_coherence(rho.matrix()); }

double coherence_l1(const DensityMatrix& rho) { return l1_coherence(rho.matrix()); }

CoherenceRecord measure_coherence(const Matrix& rho) {
    return {relative_entropy_coherence(rho), l1_coherence(rho)};
}

CoherenceRecord measure_coherence(const DensityMatrix& rho) { return measure_coherence(rho.matrix()); }

} // namespace nqca
