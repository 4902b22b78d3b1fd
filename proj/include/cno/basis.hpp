#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cno/common.hpp"

namespace cno {

// Flavor index convention: e, mu, tau <-> 0, 1, 2.
// Mass eigenstates 1, 2, 3 <-> 0, 1, 2.
enum class Basis { Flavor, Mass };

const char* to_string(Basis b);

struct PmnsParams {
    double theta12 = 0.0;
    double theta13 = 0.0;
    double theta23 = 0.0;
    double delta_cp = 0.0;
};

// Largest many-body dimension the dense routines accept (3^10).
inline constexpr std::size_t kMaxHilbertDim = 59049;

std::size_t hilbert_dim(int nf, int n_modes);

// Amplitudes over nf^N product states. Mode 0 is the leftmost ket slot,
// so the basis index is sum_p f_p * nf^(N-1-p).
class StateVector {
public:
    StateVector(CVector amplitudes, Basis basis, int nf, int n_modes);

    static StateVector product(std::span<const int> labels, Basis basis, int nf);

    const CVector& amplitudes() const { return amplitudes_; }
    Basis basis() const { return basis_; }
    int nf() const { return nf_; }
    int n_modes() const { return n_modes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

    double norm() const { return amplitudes_.norm(); }

private:
    CVector amplitudes_;
    Basis basis_;
    int nf_;
    int n_modes_;
};

// Normalization slack accepted on inputs that must be unit vectors.
inline constexpr double kNormTolerance = 1e-10;

// Single-mode generators: Pauli (x, y, z) for nf=2, the eight Gell-Mann
// matrices for nf=3. Normalized to Tr(g_a g_b) = 2 delta_ab.
const std::vector<CMatrix>& generators(int nf);

// Product of the three rotation factors (23)(13)(12); for nf=2 the real
// rotation by theta12.
CMatrix pmns_matrix(const PmnsParams& params, int nf);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// op acting on `mode`, identity elsewhere.
CMatrix embed_single_mode(const CMatrix& op, int mode, int n_modes);

// In-place application of a single-mode operator to a many-body vector,
// without forming the full embedded matrix.
void apply_single_mode(CVector& psi, const CMatrix& op, int mode, int n_modes);

// Flavor -> mass applies U^dagger on every mode, mass -> flavor applies U.
StateVector change_basis(const StateVector& state, Basis to, const PmnsParams& params);

// Digits of a basis index, mode 0 first.
std::vector<int> basis_labels(std::size_t index, int nf, int n_modes);

struct OccupationBlock {
    std::vector<int> occupation;       // mode count per mass eigenstate
    std::vector<std::size_t> indices;  // ascending
};

// Mass-occupation sectors, ordered by descending occupation tuple.
std::vector<OccupationBlock> mass_blocks(int nf, int n_modes);

}  // namespace cno
