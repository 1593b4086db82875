#include "nqca/automaton.hpp"

#include "nqca/coherence_metrics.hpp"

#include <cmath>
#include <string>

namespace nqca {

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw DomainError("boundary must be 'open' or 'periodic', got '" + s + "'");
}

std::vector<SitePair> partition(int n, int offset, Boundary boundary) {
    if (n < 2) throw DomainError("partition: chain length must be at least 2");
    if (offset != 0 && offset != 1) throw DomainError("partition: offset must be 0 or 1");
    std::vector<SitePair> pairs;
    for (int left = 1 + offset; left + 1 <= n; left += 2) pairs.push_back({left, left + 1});
    // offset 1 never covers site 1, so only site N decides the wrap pair
    if (boundary == Boundary::periodic && offset == 1 && (pairs.empty() || pairs.back().right != n)) {
        pairs.push_back({n, 1});
    }
    return pairs;
}

void AutomatonConfig::validate() const {
    if (n < 2) throw DomainError("config.n: chain length must be >= 2, got " + std::to_string(n));
    if (!std::isfinite(theta)) throw DomainError("config.theta: not finite");
    if (!std::isfinite(phi1)) throw DomainError("config.phi1: not finite");
    if (!std::isfinite(phi2)) throw DomainError("config.phi2: not finite");
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("config.xi: must lie in [0, 1], got " + std::to_string(xi));
    if (!(eta >= -1.0 && eta <= 1.0)) {
        throw DomainError("config.eta: must lie in [-1, 1], got " + std::to_string(eta));
    }
    if (const int* site = std::get_if<int>(&initial)) {
        if (*site < 1 || *site > n) {
            throw DomainError("config.initial: site " + std::to_string(*site) + " outside 1.." +
                              std::to_string(n));
        }
    } else {
        const auto& amps = std::get<std::vector<cplx>>(initial);
        if (static_cast<int>(amps.size()) != n) {
            throw DomainError("config.initial: amplitude vector has " + std::to_string(amps.size()) +
                              " entries, chain has " + std::to_string(n));
        }
    }
}

DensityMatrix AutomatonConfig::initial_state() const {
    validate();
    if (const int* site = std::get_if<int>(&initial)) return single_excitation_state(n, *site);
    const auto& amps = std::get<std::vector<cplx>>(initial);
    Vector v(n);
    for (int k = 0; k < n; ++k) v(k) = amps[static_cast<std::size_t>(k)];
    return DensityMatrix(PureState(std::move(v)));
}

PairMap AutomatonConfig::pair_map() const {
    return compose_pair_map(pair_unitary(theta, phi1, phi2), xi, eta, vacuum);
}

void apply_pair_map_inplace(Matrix& rho, const PairMap& map, SitePair pair) {
    const Eigen::Index a = pair.left - 1;
    const Eigen::Index b = pair.right - 1;
    const Eigen::Index n = rho.rows();

    Matrix2 block;
    block << rho(a, a), rho(a, b),
             rho(b, a), rho(b, b);
    const Matrix2 out = map.kraus.apply(block);

    // rho_QP -> rho_QP * cross^dagger on the columns; rows mirror by conjugation
    const Matrix2 cd = map.cross.adjoint();
    for (Eigen::Index x = 0; x < n; ++x) {
        if (x == a || x == b) continue;
        const cplx xa = rho(x, a);
        const cplx xb = rho(x, b);
        const cplx na = xa * cd(0, 0) + xb * cd(1, 0);
        const cplx nb = xa * cd(0, 1) + xb * cd(1, 1);
        rho(x, a) = na;
        rho(x, b) = nb;
        rho(a, x) = std::conj(na);
        rho(b, x) = std::conj(nb);
    }
    rho(a, a) = out(0, 0).real();
    rho(b, b) = out(1, 1).real();
    rho(a, b) = out(0, 1);
    rho(b, a) = std::conj(out(0, 1));
}

DensityMatrix apply_pair_map(const DensityMatrix& rho, const PairMap& map, SitePair pair, Boundary boundary) {
    const int n = rho.dim();
    const auto in_range = [n](int s) { return s >= 1 && s <= n; };
    if (!in_range(pair.left) || !in_range(pair.right)) {
        throw DomainError("apply_pair_map: pair (" + std::to_string(pair.left) + "," +
                          std::to_string(pair.right) + ") outside 1.." + std::to_string(n));
    }
    const bool adjacent = pair.right == pair.left + 1 ||
                          (boundary == Boundary::periodic && pair.left == n && pair.right == 1);
    if (!adjacent) {
        throw DomainError("apply_pair_map: sites " + std::to_string(pair.left) + " and " +
                          std::to_string(pair.right) + " are not neighbours");
    }
    Matrix out = rho.matrix();
    apply_pair_map_inplace(out, map, pair);
    return DensityMatrix(std::move(out));
}

Automaton::Automaton(AutomatonConfig config)
    : config_((config.validate(), std::move(config))),
      map_(config_.pair_map()),
      even_(partition(config_.n, 0, config_.boundary)),
      odd_(partition(config_.n, 1, config_.boundary)) {}

void Automaton::step_inplace(Matrix& rho) const {
    for (const auto& p : even_) apply_pair_map_inplace(rho, map_, p);
    for (const auto& p : odd_) apply_pair_map_inplace(rho, map_, p);
}

DensityMatrix Automaton::step(const DensityMatrix& rho) const {
    if (rho.dim() != config_.n) {
        throw DomainError("step: state has dimension " + std::to_string(rho.dim()) +
                          ", config expects " + std::to_string(config_.n));
    }
    Matrix out = rho.matrix();
    step_inplace(out);
    return DensityMatrix(std::move(out));
}

DensityMatrix step(const DensityMatrix& rho, const AutomatonConfig& config) {
    return Automaton(config).step(rho);
}

namespace {

template <class F>
std::vector<double> column(const std::vector<TrajectoryRecord>& records, F f) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(f(r));
    return out;
}

constexpr double trace_tolerance = 1e-10;

TrajectoryRecord observe(int t, const Matrix& m) {
    TrajectoryRecord r;
    r.step = t;
    r.trace_dev = std::abs(m.trace() - cplx(1.0));
    if (r.trace_dev > trace_tolerance) {
        throw InvalidStateError("evolve: trace deviation " + std::to_string(r.trace_dev) +
                                " at step " + std::to_string(t));
    }
    const CoherenceRecord c = measure_coherence(m);
    r.c_s = c.c_s;
    r.c_1 = c.c_1;
    for (Eigen::Index k = 0; k < m.rows(); ++k) r.mean_x += m(k, k).real() * static_cast<double>(k + 1);
    r.purity = m.squaredNorm();
    return r;
}

} // namespace

std::vector<double> Trajectory::c_s() const { return column(records, [](const auto& r) { return r.c_s; }); }
std::vector<double> Trajectory::c_1() const { return column(records, [](const auto& r) { return r.c_1; }); }
std::vector<double> Trajectory::mean_x() const { return column(records, [](const auto& r) { return r.mean_x; }); }
std::vector<double> Trajectory::purity() const { return column(records, [](const auto& r) { return r.purity; }); }

Trajectory evolve(const AutomatonConfig& config, int steps, int snapshot_every) {
    if (steps < 0) throw DomainError("evolve: steps must be >= 0");
    if (snapshot_every < 0) throw DomainError("evolve: snapshot interval must be >= 0");
    const Automaton automaton(config);
    Trajectory traj{automaton.config(), {}, {}};
    traj.records.reserve(static_cast<std::size_t>(steps) + 1);

    Matrix rho = automaton.config().initial_state().matrix();
    for (int t = 0;; ++t) {
        traj.records.push_back(observe(t, rho));
        if (snapshot_every > 0 && t % snapshot_every == 0) traj.snapshots.push_back({t, DensityMatrix(rho)});
        if (t == steps) break;
        automaton.step_inplace(rho);
    }
    return traj;
}

} // namespace nqca
