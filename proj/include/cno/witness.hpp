#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cno/basis.hpp"

namespace cno {

CMatrix reduced_density_single(const StateVector& state, int mode);

// Two-mode reduced density matrix, row index = a_i * nf + a_j.
CMatrix reduced_density_pair(const StateVector& state, int mode_i, int mode_j);

// Von Neumann entropy in bits; eigenvalues in (-1e-12, 0) are floored to 0
// and the result is clamped to [0, log2(nf)].
double von_neumann_entropy(const CMatrix& rho);
double entanglement_entropy(const StateVector& state, int mode);

// log2 of the trace norm of rho_ij with the transpose taken on mode_j.
double negativity(const StateVector& state, int mode_i, int mode_j);

struct PairValue {
    int i;
    int j;
    double value;
};

struct WitnessReport {
    double time = 0.0;
    std::vector<double> entropies;       // per mode, bits
    std::vector<PairValue> negativities; // i < j, lexicographic
};

WitnessReport witness_report(const StateVector& state, double time);

// Frequency (1/time units) of the largest non-DC DFT bin after mean removal.
// Returns 0 when no bin rises above 1e-12. Needs >= 16 uniformly spaced samples.
double dominant_frequency(std::span<const double> times, std::span<const double> values);

}  // namespace cno
