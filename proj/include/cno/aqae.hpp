#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cno/clock_qubo.hpp"
#include "cno/hamiltonian.hpp"
#include "cno/witness.hpp"

namespace cno {

struct AqaeConfig {
    int bits = 1;                    // K
    int max_zoom = 40;
    int reads = 20;
    int sweeps = 200;
    std::optional<double> beta_start;
    std::optional<double> beta_end;
    std::uint64_t seed = 1;
    int convergence_window = 8;      // iterations
    double convergence_pct = 1.0;    // percent
    bool rewind_enabled = true;
    int max_rewinds = 4;
    bool reverse_enabled = true;     // alternate each zoom with the sign-flipped digitization
    bool freeze_initial = true;      // t = 0 register digits are constants, not variables
    double energy_tolerance = 1e-14; // clock energy regarded as converged
    int steps = 1;                   // clock time steps T
    std::optional<double> penalty_weight;
    std::size_t max_block_size = 0;  // 0 disables the cap
    bool track_overlap = false;      // record overlap with exact evolution per iteration

    void validate() const;
};

struct AqaeIteration {
    int zoom = 0;
    Direction direction = Direction::Forward;
    double clock_energy = 0.0;
    std::optional<double> overlap;
    bool rewound = false;            // first iteration after a rewind
};

struct AqaeResult {
    CVector final_state;             // normalized last register
    RVector estimate;                // full real-embedded clock vector
    std::vector<AqaeIteration> iterations;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    bool converged = false;
    int zoom_steps = 0;              // zoom levels processed
    int rewinds = 0;
    std::string status;

    // First zoom level after which the overlap reached `target`, if tracked.
    std::optional<int> zoom_reaching(double target) const;
};

// True iff the last `convergence_window` adjacent-pair percentage
// differences of the clock energies are all below `convergence_pct`.
bool converged(std::span<const double> energies, const AqaeConfig& cfg);

AqaeResult run_aqae(const CMatrix& h, const CVector& initial, double dt, const AqaeConfig& cfg);

struct BlockRun {
    std::size_t block = 0;
    std::vector<int> occupation;
    std::size_t size = 0;
    double weight = 0.0;             // norm of the initial sub-vector
    bool skipped = false;            // zero-weight block, left at zero
    bool converged = true;
    int zoom_steps = 0;
    int rewinds = 0;
    double final_energy = 0.0;
    std::optional<double> overlap;   // with exact block evolution
    std::vector<AqaeIteration> iterations;
    std::string status;
};

struct BlockedTimeResult {
    double time = 0.0;
    std::vector<BlockRun> blocks;
    StateVector state;               // reassembled, flavor basis
    WitnessReport witnesses;
};

// Per sampled time: mass basis, occupation blocks, AQAE on every block with
// nonzero weight, reassembly, back to flavor, witnesses. Dirac nu-nu only.
std::vector<BlockedTimeResult> run_aqae_blocked(const SystemSpec& spec, const StateVector& initial,
                                                std::span<const double> times,
                                                const AqaeConfig& cfg, bool oracle);

}  // namespace cno
