// local_maps.hpp — 2x2 building blocks of the automaton: the pair unitary,
// dephasing and amplitude-damping Kraus sets, and their composition.
//
// Basis convention for every 2x2 matrix: index 0 is the left site n of a
// pair, index 1 the right site n+1. Positive eta therefore moves population
// from the right site to the left site.

#pragma once

#include "nqca/types.hpp"

#include <string_view>
#include <vector>

namespace nqca {

inline constexpr std::string_view basis_convention =
    "pair basis (|n>, |n+1>); eta > 0 transfers population from site n+1 to site n";

class PairUnitary {
public:
    // Angles are reduced into [0, 2*pi).
    PairUnitary(double theta, double phi1, double phi2);

    double theta() const { return theta_; }
    double phi1() const { return phi1_; }
    double phi2() const { return phi2_; }
    const Matrix2& matrix() const { return u_; }

private:
    double theta_;
    double phi1_;
    double phi2_;
    Matrix2 u_;
};

// [[cos t, sin t e^{i phi2}], [-sin t e^{i phi1}, cos t e^{i(phi1+phi2)}]]
PairUnitary pair_unitary(double theta, double phi1, double phi2);

enum class ChannelKind { unitary, dephasing, damping, composed };

struct KrausSet {
    ChannelKind kind = ChannelKind::composed;
    std::vector<Matrix2> operators;
    double xi = 0.0;
    double eta = 0.0;

    // sum_i K_i rho K_i^dagger
    Matrix2 apply(const Matrix2& rho) const;
};

// {sqrt(1-xi) 1, sqrt(xi)(1+sz)/2, sqrt(xi)(sz-1)/2}, zero operators dropped.
// Off-diagonals of a 2x2 state shrink by exactly (1 - xi).
KrausSet dephasing_kraus(double xi);

// eta >= 0: {diag(1, sqrt(1-eta)), sqrt(eta) |0><1|}.
// eta < 0: both operators conjugated by sigma_x with strength |eta|.
KrausSet damping_kraus(double eta);

// Weights c_k with which the composed Kraus operators act on the part of
// the chain outside the pair: K_k is embedded as K_k (+) c_k * 1.
//
// Weights index the full (unpruned) composed list, ordered
// k = 2*i + j for L_j D_i U with i over dephasing and j over damping
// operators. Missing trailing weights are zero.
class VacuumPolicy {
public:
    static constexpr int max_weights = 6;

    // c = (1, 0, ..., 0): the no-event operator L_0 D_0 U carries the complement.
    static VacuumPolicy first();
    // Throws DomainError unless 1 <= size <= 6 and | sum c_k^2 - 1 | <= 1e-12.
    static VacuumPolicy custom(std::vector<double> weights);

    const std::vector<double>& weights() const { return weights_; }
    bool is_first() const;

private:
    explicit VacuumPolicy(std::vector<double> w) : weights_(std::move(w)) {}
    std::vector<double> weights_;
};

struct PairMap {
    PairUnitary unitary;
    double xi = 0.0;
    double eta = 0.0;
    VacuumPolicy vacuum;
    // composed operators with zero matrices pruned
    KrausSet kraus;
    // sum_k c_k K_k: acts on pair rows of the pair/outside coherence block
    Matrix2 cross;
};

// Kraus set {L_j D_i U}: unitary first, then dephasing, then damping.
PairMap compose_pair_map(const PairUnitary& u, double xi, double eta,
                         const VacuumPolicy& vacuum = VacuumPolicy::first());

struct CptpReport {
    double tolerance = 0.0;
    double completeness_deviation = 0.0; // max-norm of sum K^dagger K - 1
    double choi_min_eigenvalue = 0.0;
    bool complete = false;
    bool completely_positive = false;

    bool passed() const { return complete && completely_positive; }
};

CptpReport verify_cptp(const KrausSet& kraus, double tol);

struct Reparametrization {
    double eta;
    double theta;
};

// eta = p - q, cos(2 theta) = (1 - p - q) / (1 - |eta|).
Reparametrization reparametrize(double p, double q);

namespace pauli {
Matrix2 identity();
Matrix2 x();
Matrix2 y();
Matrix2 z();
} // namespace pauli

} // namespace nqca
