#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cno/clock_qubo.hpp"

namespace cno {

struct AnnealSchedule {
    int sweeps = 1000;  // 0 returns the random starting bitstrings unchanged
    int reads = 100;
    std::optional<double> beta_start;
    std::optional<double> beta_end;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AnnealResult {
    std::vector<std::uint8_t> best_bits;
    double best_energy = 0.0;           // includes the QUBO offset
    std::vector<double> read_energies;  // final energy of every read, in read order
    double beta_start = 0.0;
    double beta_end = 0.0;
};

// Default inverse temperatures: the hottest flip is accepted with
// probability 1/2 at the start, the gentlest uphill flip with at most 1e-4
// at the end.
std::pair<double, double> default_beta_range(const QuboProblem& q);

// Single-flip Metropolis annealing with a geometric beta schedule. Read r
// draws from its own stream seeded with seed + r, so results depend only on
// (q, schedule).
AnnealResult anneal(const QuboProblem& q, const AnnealSchedule& schedule);

}  // namespace cno
