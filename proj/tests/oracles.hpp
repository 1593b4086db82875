// oracles.hpp — test-only reference implementations.
//
// Everything here is written from the defining formulas and deliberately
// avoids the library's optimized code paths: Kraus operators are rebuilt
// from scratch, embedded as full N x N matrices, and applied by naive
// multiplication.

#pragma once

#include "nqca/types.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using nqca::cplx;
using nqca::Matrix;
using nqca::Matrix2;

inline Matrix2 unitary(double th, double p1, double p2) {
    Matrix2 u;
    u(0, 0) = std::cos(th);
    u(0, 1) = std::sin(th) * std::exp(cplx(0, p2));
    u(1, 0) = -std::sin(th) * std::exp(cplx(0, p1));
    u(1, 1) = std::cos(th) * std::exp(cplx(0, p1 + p2));
    return u;
}

// Full composed list L_j D_i U, k = 2i + j, no pruning.
inline std::vector<Matrix2> composed_kraus(double th, double p1, double p2, double xi, double eta) {
    const Matrix2 u = unitary(th, p1, p2);
    Matrix2 d0 = Matrix2::Identity() * std::sqrt(1 - xi);
    Matrix2 d1 = Matrix2::Zero();
    d1(0, 0) = std::sqrt(xi);
    Matrix2 d2 = Matrix2::Zero();
    d2(1, 1) = -std::sqrt(xi);
    const double a = std::abs(eta);
    Matrix2 l0 = Matrix2::Zero();
    Matrix2 l1 = Matrix2::Zero();
    if (eta >= 0) {
        l0(0, 0) = 1;
        l0(1, 1) = std::sqrt(1 - a);
        l1(0, 1) = std::sqrt(a);
    } else {
        l0(0, 0) = std::sqrt(1 - a);
        l0(1, 1) = 1;
        l1(1, 0) = std::sqrt(a);
    }
    std::vector<Matrix2> out;
    for (const Matrix2& d : {d0, d1, d2}) {
        for (const Matrix2& l : {l0, l1}) out.push_back(l * d * u);
    }
    return out;
}

// K (+) c * 1 on an N-site chain, pair given by 0-based (a, b).
inline Matrix embed(const Matrix2& k, double c, int n, int a, int b) {
    Matrix out = Matrix::Identity(n, n) * c;
    out(a, a) = k(0, 0);
    out(a, b) = k(0, 1);
    out(b, a) = k(1, 0);
    out(b, b) = k(1, 1);
    return out;
}

struct Params {
    int n = 3;
    double theta = 0, phi1 = 0, phi2 = 0, xi = 0, eta = 0;
    bool periodic = false;
    std::vector<double> weights{1.0};
};

inline Matrix apply_pair(const Matrix& rho, const std::vector<Matrix2>& kraus, const std::vector<double>& w, int n,
                         int a, int b) {
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < kraus.size(); ++k) {
        const double c = k < w.size() ? w[k] : 0.0;
        const Matrix e = embed(kraus[k], c, n, a, b);
        out += e * rho * e.adjoint();
    }
    return out;
}

inline Matrix step(const Matrix& rho, const Params& p) {
    const auto kraus = composed_kraus(p.theta, p.phi1, p.phi2, p.xi, p.eta);
    Matrix cur = rho;
    for (int a = 0; a + 1 < p.n; a += 2) cur = apply_pair(cur, kraus, p.weights, p.n, a, a + 1);
    for (int a = 1; a + 1 < p.n; a += 2) cur = apply_pair(cur, kraus, p.weights, p.n, a, a + 1);
    if (p.periodic && p.n % 2 == 0) cur = apply_pair(cur, kraus, p.weights, p.n, p.n - 1, 0);
    return cur;
}

// Closed-form channel actions on a 2x2 state, applied one after another.
inline Matrix2 sequential_channel(const Matrix2& rho, double th, double p1, double p2, double xi, double eta) {
    const Matrix2 u = unitary(th, p1, p2);
    Matrix2 r = u * rho * u.adjoint();
    r(0, 1) *= (1 - xi);
    r(1, 0) *= (1 - xi);
    const double a = std::abs(eta);
    Matrix2 s = r;
    if (eta >= 0) {
        s(0, 0) = r(0, 0) + a * r(1, 1);
        s(1, 1) = (1 - a) * r(1, 1);
    } else {
        s(1, 1) = r(1, 1) + a * r(0, 0);
        s(0, 0) = (1 - a) * r(0, 0);
    }
    s(0, 1) = std::sqrt(1 - a) * r(0, 1);
    s(1, 0) = std::sqrt(1 - a) * r(1, 0);
    return s;
}

inline std::vector<cplx> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0;
        for (std::size_t t = 0; t < n; ++t) {
            s += x[t] * std::exp(cplx(0, -2.0 * M_PI * double(k) * double(t) / double(n)));
        }
        out[k] = s;
    }
    return out;
}

inline Matrix random_density(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    // exact Hermiticity
    for (int j = 0; j < n; ++j) {
        rho(j, j) = rho(j, j).real();
        for (int i = j + 1; i < n; ++i) rho(j, i) = std::conj(rho(i, j));
    }
    return rho;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace oracle
