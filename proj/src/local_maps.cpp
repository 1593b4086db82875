#include "nqca/local_maps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace nqca {

namespace pauli {
Matrix2 identity() { return Matrix2::Identity(); }
Matrix2 x() {
    Matrix2 m;
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}
Matrix2 y() {
    Matrix2 m;
    m << 0.0, cplx(0.0, -1.0),
         cplx(0.0, 1.0), 0.0;
    return m;
}
Matrix2 z() {
    Matrix2 m;
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}
} // namespace pauli

namespace {

constexpr double prune_threshold = 1e-15;

double reduce_angle(double a) {
    double r = std::fmod(a, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    return r;
}

void check_xi(double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("dephasing strength xi = " + std::to_string(xi) + " outside [0, 1]");
    }
}

void check_eta(double eta) {
    if (!(eta >= -1.0 && eta <= 1.0)) {
        throw DomainError("damping strength eta = " + std::to_string(eta) + " outside [-1, 1]");
    }
}

std::array<Matrix2, 3> dephasing_operators(double xi) {
    const Matrix2 id = pauli::identity();
    const Matrix2 sz = pauli::z();
    return {std::sqrt(1.0 - xi) * id,
            std::sqrt(xi) * (id + sz) / 2.0,
            std::sqrt(xi) * (sz - id) / 2.0};
}

std::array<Matrix2, 2> damping_operators(double eta) {
    const double s = std::abs(eta);
    const Matrix2 id = pauli::identity();
    const Matrix2 sz = pauli::z();
    // sigma^+ in this basis is |0><1|: (sx + i sy) / 2
    const Matrix2 raise = (pauli::x() + cplx(0.0, 1.0) * pauli::y()) / 2.0;
    std::array<Matrix2, 2> ops{(id + sz) / 2.0 + std::sqrt(1.0 - s) * (id - sz) / 2.0,
                               std::sqrt(s) * raise};
    if (eta < 0.0) {
        const Matrix2 sx = pauli::x();
        for (auto& op : ops) op = sx * op * sx;
    }
    return ops;
}

template <std::size_t K>
std::vector<Matrix2> pruned(const std::array<Matrix2, K>& ops) {
    std::vector<Matrix2> out;
    for (const auto& op : ops) {
        if (op.cwiseAbs().maxCoeff() >= prune_threshold) out.push_back(op);
    }
    return out;
}

} // namespace

PairUnitary::PairUnitary(double theta, double phi1, double phi2)
    : theta_(reduce_angle(theta)), phi1_(reduce_angle(phi1)), phi2_(reduce_angle(phi2)) {
    const double c = std::cos(theta_);
    const double s = std::sin(theta_);
    const cplx e1 = std::polar(1.0, phi1_);
    const cplx e2 = std::polar(1.0, phi2_);
    const cplx e12 = std::polar(1.0, phi1_ + phi2_);
    u_ << c, s * e2,
          -s * e1, c * e12;
}

PairUnitary pair_unitary(double theta, double phi1, double phi2) {
    return PairUnitary(theta, phi1, phi2);
}

Matrix2 KrausSet::apply(const Matrix2& rho) const {
    Matrix2 out = Matrix2::Zero();
    for (const auto& k : operators) out += k * rho * k.adjoint();
    return out;
}

KrausSet dephasing_kraus(double xi) {
    check_xi(xi);
    return KrausSet{ChannelKind::dephasing, pruned(dephasing_operators(xi)), xi, 0.0};
}

KrausSet damping_kraus(double eta) {
    check_eta(eta);
    return KrausSet{ChannelKind::damping, pruned(damping_operators(eta)), 0.0, eta};
}

VacuumPolicy VacuumPolicy::first() { return VacuumPolicy({1.0}); }

VacuumPolicy VacuumPolicy::custom(std::vector<double> weights) {
    if (weights.empty() || weights.size() > static_cast<std::size_t>(max_weights)) {
        throw DomainError("vacuum policy needs between 1 and " + std::to_string(max_weights) +
                          " weights, got " + std::to_string(weights.size()));
    }
    double norm = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w)) throw DomainError("vacuum policy weight is not finite");
        norm += w * w;
    }
    if (std::abs(norm - 1.0) > 1e-12) {
        throw DomainError("vacuum policy weights must have unit norm, sum c^2 = " +
                          std::to_string(norm));
    }
    return VacuumPolicy(std::move(weights));
}

bool VacuumPolicy::is_first() const {
    if (weights_.empty() || weights_[0] != 1.0) return false;
    for (std::size_t k = 1; k < weights_.size(); ++k) {
        if (weights_[k] != 0.0) return false;
    }
    return true;
}

PairMap compose_pair_map(const PairUnitary& u, double xi, double eta, const VacuumPolicy& vacuum) {
    check_xi(xi);
    check_eta(eta);
    const auto deph = dephasing_operators(xi);
    const auto damp = damping_operators(eta);

    std::array<Matrix2, 6> full;
    for (std::size_t i = 0; i < deph.size(); ++i) {
        for (std::size_t j = 0; j < damp.size(); ++j) full[2 * i + j] = damp[j] * deph[i] * u.matrix();
    }

    Matrix2 cross = Matrix2::Zero();
    const auto& w = vacuum.weights();
    for (std::size_t k = 0; k < w.size(); ++k) cross += w[k] * full[k];

    KrausSet set{ChannelKind::composed, pruned(full), xi, eta};
    if (xi == 0.0 && eta == 0.0) set.kind = ChannelKind::unitary;
    return PairMap{u, xi, eta, vacuum, std::move(set), cross};
}

CptpReport verify_cptp(const KrausSet& kraus, double tol) {
    CptpReport r;
    r.tolerance = tol;
    Matrix2 sum = Matrix2::Zero();
    // Choi matrix sum_k vec(K) vec(K)^dagger, column-stacked
    Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
    for (const auto& k : kraus.operators) {
        sum += k.adjoint() * k;
        const Eigen::Vector4cd v = k.reshaped();
        choi += v * v.adjoint();
    }
    r.completeness_deviation = (sum - Matrix2::Identity()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(choi, Eigen::EigenvaluesOnly);
    r.choi_min_eigenvalue = solver.eigenvalues().minCoeff();
    r.complete = r.completeness_deviation <= tol;
    r.completely_positive = r.choi_min_eigenvalue >= -tol;
    return r;
}

Reparametrization reparametrize(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
        throw DomainError("reparametrize: p and q must lie in [0, 1]");
    }
    const double eta = p - q;
    const double denom = 1.0 - std::abs(eta);
    if (denom <= 0.0) {
        throw SingularParameterError("reparametrize: |p - q| = 1 makes 1 - |eta| vanish");
    }
    double arg = (1.0 - p - q) / denom;
    if (std::abs(arg) > 1.0 + 1e-12) {
        throw DomainError("reparametrize: cos(2 theta) = " + std::to_string(arg) +
                          " has no real solution");
    }
    arg = std::clamp(arg, -1.0, 1.0);
    return {eta, 0.5 * std::acos(arg)};
}

} // namespace nqca
