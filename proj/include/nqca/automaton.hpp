// automaton.hpp — two-phase partitioned evolution of the chain
//
// One time step applies the composed pair map to pairs (1,2),(3,4),...
// and then to pairs (2,3),(4,5),... . Each 2x2 Kraus operator K_k acts on
// span{|n>,|n+1>} and as c_k * identity on the rest of the chain (see
// VacuumPolicy), so a pair update only touches rows and columns n, n+1.

#pragma once

#include "nqca/excitation_state.hpp"
#include "nqca/local_maps.hpp"

#include <string>
#include <variant>
#include <vector>

namespace nqca {

enum class Boundary { open, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// 1-based site labels. For the periodic wrap pair, left = N and right = 1.
struct SitePair {
    int left;
    int right;

    friend bool operator==(const SitePair&, const SitePair&) = default;
};

// offset 0 -> (1,2),(3,4),...; offset 1 -> (2,3),(4,5),...
// Periodic chains additionally pair site N with site 1 at offset 1 when
// both are otherwise idle.
std::vector<SitePair> partition(int n, int offset, Boundary boundary);

struct AutomatonConfig {
    int n = 15;
    double theta = pi / 4.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    Boundary boundary = Boundary::open;
    VacuumPolicy vacuum = VacuumPolicy::first();
    // initial site (1-based) or explicit amplitude vector
    std::variant<int, std::vector<cplx>> initial = 1;

    // Throws DomainError naming the offending field.
    void validate() const;
    DensityMatrix initial_state() const;
    PairMap pair_map() const;
};

// Throws DomainError if the sites are out of range or not neighbours.
DensityMatrix apply_pair_map(const DensityMatrix& rho, const PairMap& map, SitePair pair,
                             Boundary boundary = Boundary::open);

// In-place variant used by the stepping loop. O(N) per call.
void apply_pair_map_inplace(Matrix& rho, const PairMap& map, SitePair pair);

// Precomputed pair map and partitions for repeated stepping.
class Automaton {
public:
    explicit Automaton(AutomatonConfig config);

    const AutomatonConfig& config() const { return config_; }
    const PairMap& pair_map() const { return map_; }
    const std::vector<SitePair>& pairs(int offset) const { return offset == 0 ? even_ : odd_; }

    DensityMatrix step(const DensityMatrix& rho) const;
    void step_inplace(Matrix& rho) const;

private:
    AutomatonConfig config_;
    PairMap map_;
    std::vector<SitePair> even_;
    std::vector<SitePair> odd_;
};

DensityMatrix step(const DensityMatrix& rho, const AutomatonConfig& config);

struct TrajectoryRecord {
    int step = 0;
    double c_s = 0.0;
    double c_1 = 0.0;
    double mean_x = 0.0;
    double purity = 0.0;
    double trace_dev = 0.0;
};

struct Snapshot {
    int step;
    DensityMatrix state;
};

struct Trajectory {
    AutomatonConfig config;
    std::vector<TrajectoryRecord> records;
    std::vector<Snapshot> snapshots;

    std::vector<double> c_s() const;
    std::vector<double> c_1() const;
    std::vector<double> mean_x() const;
    std::vector<double> purity() const;
};

// records.size() == steps + 1; record 0 is the initial state. With
// snapshot_every = k > 0 the state is stored at every step divisible by k.
// Throws InvalidStateError if the trace drifts by more than 1e-10 or the
// state loses positivity beyond 1e-10.
Trajectory evolve(const AutomatonConfig& config, int steps, int snapshot_every = 0);

} // namespace nqca
