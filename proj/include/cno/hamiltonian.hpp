#pragma once

#include <optional>
#include <vector>

#include "cno/basis.hpp"

namespace cno {

enum class Species { Neutrino, Antineutrino };
enum class Statistics { Dirac, Majorana };

// Single-particle B-vector presets. AppendixA is the traceless
// ultrarelativistic result; the others are the alternatives used for the
// B-invariance experiment.
enum class BVectorChoice { AppendixA, Zero, Third, PdgReview };

const char* to_string(BVectorChoice c);
BVectorChoice parse_b_vector_choice(const std::string& name);

// Physical description of an N-mode system. Energies in eV, mass splittings
// in eV^2, times in eV^-1.
struct SystemSpec {
    int n_modes = 2;
    int nf = 3;
    std::vector<Species> species;     // per mode
    Statistics statistics = Statistics::Dirac;
    std::vector<double> energies;     // per mode, eV
    double delta_m2 = 7.42e-5;        // m2^2 - m1^2
    double big_delta_m2 = 2.44e-3;    // m3^2 - (m1^2 + m2^2)/2
    PmnsParams pmns;
    double coupling_k = 1.75e-12;
    RMatrix angles;                   // N x N trajectory angles, radians
    BVectorChoice b_choice = BVectorChoice::AppendixA;
    std::optional<RVector> b_override;  // used verbatim on every mode if set
    bool interaction_only = false;

    void validate() const;
    bool has_antineutrino() const;
};

// Table I parameters: E = 1e7 eV, PDG-like angles, k = 1.75e-12.
// For N == 2 the pair angle is pi/4, otherwise the xi = 0.9 anisotropic
// distribution.
SystemSpec table1_spec(int n_modes, int nf);

// theta_ij = arccos(xi) |i - j| / (N - 1).
RMatrix anisotropic_angles(double xi, int n_modes);

// (0, 0, -dm2/(4E), 0, 0, 0, 0, -Dm2/(2 sqrt(3) E)).
RVector b_vector_from_masses(double delta_m2, double big_delta_m2, double energy);

RVector b_vector_for(BVectorChoice choice, int nf, double delta_m2, double big_delta_m2,
                     double energy);

// B-vector used on `mode` after applying override/choice and that mode's energy.
RVector mode_b_vector(const SystemSpec& spec, int mode);

struct HamiltonianMatrix {
    CMatrix matrix;
    Basis basis;
};

struct HamiltonianTerms {
    CMatrix one_body;
    CMatrix two_body;
    Basis basis;
};

// Dirac nu-nu Hamiltonian in either basis. The two-body term is
// basis-invariant; the flavor form conjugates the one-body term by U per mode.
HamiltonianTerms dirac_terms(const SystemSpec& spec, Basis basis);
HamiltonianMatrix build_dirac_hamiltonian(const SystemSpec& spec, Basis basis);

// Mixed nu-nubar pairs pick up -2 and conjugate the lower-index generator.
// Flavor basis only.
HamiltonianTerms nu_antinu_terms(const SystemSpec& spec);
HamiltonianMatrix build_nu_antinu_hamiltonian(const SystemSpec& spec);

// Two-body term 2 k (1 - cos) Im(g_p) . Im(g_p'). Flavor basis only.
HamiltonianTerms majorana_terms(const SystemSpec& spec);
HamiltonianMatrix build_majorana_hamiltonian(const SystemSpec& spec);

// Dispatch on statistics and species.
HamiltonianMatrix build_hamiltonian(const SystemSpec& spec, Basis basis);

// Sub-matrix on a mass-occupation block. Rejects non-mass input and any
// Hamiltonian with an off-block coupling above 1e-10 in magnitude.
CMatrix restrict_to_block(const HamiltonianMatrix& h, const OccupationBlock& block);

double hermiticity_defect(const CMatrix& m);

}  // namespace cno
