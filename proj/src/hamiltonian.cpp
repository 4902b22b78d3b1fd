#include "cno/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cno {

namespace {

// a on mode p, b on mode q (p < q), identity elsewhere.
CMatrix embed_two_modes(const CMatrix& a, int p, const CMatrix& b, int q, int n_modes) {
    const auto nf = a.rows();
    CMatrix out = CMatrix::Identity(1, 1);
    Eigen::Index pending = 1;
    for (int m = 0; m < n_modes; ++m) {
        if (m == p || m == q) {
            out = kron(kron(out, CMatrix::Identity(pending, pending)), m == p ? a : b);
            pending = 1;
        } else {
            pending *= nf;
        }
    }
    return kron(out, CMatrix::Identity(pending, pending));
}

CMatrix sum_pairs(const SystemSpec& spec, const std::vector<CMatrix>& left,
                  const std::vector<CMatrix>& right, int p, int q) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(spec.nf, spec.n_modes));
    CMatrix out = CMatrix::Zero(dim, dim);
    for (std::size_t a = 0; a < left.size(); ++a) {
        if (left[a].isZero(0.0) || right[a].isZero(0.0)) {
            continue;
        }
        out += embed_two_modes(left[a], p, right[a], q, spec.n_modes);
    }
    return out;
}

double pair_strength(const SystemSpec& spec, int p, int q) {
    return spec.coupling_k * (1.0 - std::cos(spec.angles(p, q)));
}

CMatrix one_body(const SystemSpec& spec, Basis basis) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(spec.nf, spec.n_modes));
    CMatrix out = CMatrix::Zero(dim, dim);
    if (spec.interaction_only) {
        return out;
    }
    const auto& g = generators(spec.nf);
    const CMatrix u = pmns_matrix(spec.pmns, spec.nf);
    for (int p = 0; p < spec.n_modes; ++p) {
        const RVector b = mode_b_vector(spec, p);
        CMatrix h = CMatrix::Zero(spec.nf, spec.nf);
        for (std::size_t a = 0; a < g.size(); ++a) {
            h += b(static_cast<Eigen::Index>(a)) * g[a];
        }
        if (basis == Basis::Flavor) {
            h = u * h * u.adjoint();
        }
        out += embed_single_mode(h, p, spec.n_modes);
    }
    return out;
}

std::vector<CMatrix> conjugated(const std::vector<CMatrix>& g) {
    std::vector<CMatrix> out;
    out.reserve(g.size());
    for (const auto& m : g) {
        out.push_back(m.conjugate());
    }
    return out;
}

std::vector<CMatrix> imaginary_parts(const std::vector<CMatrix>& g) {
    std::vector<CMatrix> out;
    out.reserve(g.size());
    for (const auto& m : g) {
        out.push_back(m.imag().cast<Complex>());
    }
    return out;
}

}  // namespace

const char* to_string(BVectorChoice c) {
    switch (c) {
        case BVectorChoice::AppendixA: return "appendixA";
        case BVectorChoice::Zero: return "zero";
        case BVectorChoice::Third: return "third";
        case BVectorChoice::PdgReview: return "pdg_review";
    }
    return "?";
}

BVectorChoice parse_b_vector_choice(const std::string& name) {
    for (auto c : {BVectorChoice::AppendixA, BVectorChoice::Zero, BVectorChoice::Third,
                   BVectorChoice::PdgReview}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw InvalidArgument("unknown b_vector_choice '" + name +
                          "' (expected appendixA, zero, third, pdg_review)");
}

void SystemSpec::validate() const {
    hilbert_dim(nf, n_modes);
    const auto n = static_cast<std::size_t>(n_modes);
    if (species.size() != n) {
        throw InvalidArgument("species must list one entry per mode");
    }
    if (energies.size() != n) {
        throw InvalidArgument("energies must list one entry per mode");
    }
    for (double e : energies) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw InvalidArgument("mode energies must be positive and finite");
        }
    }
    if (!(coupling_k >= 0.0) || !std::isfinite(coupling_k)) {
        throw InvalidArgument("coupling_k must be a finite nonnegative number");
    }
    for (double v : {delta_m2, big_delta_m2, pmns.theta12, pmns.theta13, pmns.theta23,
                     pmns.delta_cp}) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("mass splittings and mixing angles must be finite");
        }
    }
    if (angles.rows() != n_modes || angles.cols() != n_modes) {
        throw InvalidArgument("angles must be an N x N matrix");
    }
    for (int i = 0; i < n_modes; ++i) {
        if (angles(i, i) != 0.0) {
            throw InvalidArgument("angles must have a zero diagonal");
        }
        for (int j = 0; j < i; ++j) {
            if (angles(i, j) != angles(j, i) || !std::isfinite(angles(i, j))) {
                throw InvalidArgument("angles must be finite and symmetric");
            }
        }
    }
    if (b_override && b_override->size() != static_cast<Eigen::Index>(generators(nf).size())) {
        throw InvalidArgument("b_vector override must have " +
                              std::to_string(generators(nf).size()) + " components for nf=" +
                              std::to_string(nf));
    }
    if (statistics == Statistics::Majorana && has_antineutrino()) {
        throw InvalidArgument("Majorana modes are self-conjugate; species must all be neutrino");
    }
}

bool SystemSpec::has_antineutrino() const {
    return std::any_of(species.begin(), species.end(),
                       [](Species s) { return s == Species::Antineutrino; });
}

SystemSpec table1_spec(int n_modes, int nf) {
    SystemSpec spec;
    spec.n_modes = n_modes;
    spec.nf = nf;
    spec.species.assign(static_cast<std::size_t>(n_modes), Species::Neutrino);
    spec.energies.assign(static_cast<std::size_t>(n_modes), 1e7);
    spec.pmns = {0.591667, 0.148702, 0.840027, 4.36681};
    if (n_modes == 2) {
        spec.angles = RMatrix::Zero(2, 2);
        spec.angles(0, 1) = spec.angles(1, 0) = std::numbers::pi / 4.0;
    } else if (n_modes > 2) {
        spec.angles = anisotropic_angles(0.9, n_modes);
    } else {
        spec.angles = RMatrix::Zero(1, 1);
    }
    return spec;
}

RMatrix anisotropic_angles(double xi, int n_modes) {
    if (!(std::abs(xi) <= 1.0)) {
        throw InvalidArgument("anisotropy xi must satisfy |xi| <= 1");
    }
    if (n_modes < 2) {
        throw InvalidArgument("anisotropic angles need at least two modes");
    }
    const double scale = std::acos(xi) / static_cast<double>(n_modes - 1);
    RMatrix out(n_modes, n_modes);
    for (int i = 0; i < n_modes; ++i) {
        for (int j = 0; j < n_modes; ++j) {
            out(i, j) = scale * std::abs(i - j);
        }
    }
    return out;
}

RVector b_vector_from_masses(double delta_m2, double big_delta_m2, double energy) {
    if (!(energy > 0.0)) {
        throw InvalidArgument("energy must be positive");
    }
    RVector b = RVector::Zero(8);
    b(2) = -delta_m2 / (4.0 * energy);
    b(7) = -big_delta_m2 / (2.0 * std::sqrt(3.0) * energy);
    return b;
}

RVector b_vector_for(BVectorChoice choice, int nf, double delta_m2, double big_delta_m2,
                     double energy) {
    if (!(energy > 0.0)) {
        throw InvalidArgument("energy must be positive");
    }
    if (nf == 2) {
        // Two-flavor studies use the large splitting and theta12 only.
        RVector b = RVector::Zero(3);
        switch (choice) {
            case BVectorChoice::Zero: break;
            case BVectorChoice::Third: b(2) = -big_delta_m2 / (12.0 * energy); break;
            default: b(2) = -big_delta_m2 / (4.0 * energy); break;
        }
        return b;
    }
    if (nf != 3) {
        throw InvalidArgument("nf must be 2 or 3");
    }
    RVector b = RVector::Zero(8);
    switch (choice) {
        case BVectorChoice::AppendixA:
            return b_vector_from_masses(delta_m2, big_delta_m2, energy);
        case BVectorChoice::Zero:
            return b;
        case BVectorChoice::Third:
            b(2) = -delta_m2 / (12.0 * energy);
            b(7) = -big_delta_m2 / (6.0 * std::sqrt(3.0) * energy);
            return b;
        case BVectorChoice::PdgReview:
            b(2) = -delta_m2 / (4.0 * energy);
            b(7) = -big_delta_m2 / (4.0 * energy);
            return b;
    }
    return b;
}

RVector mode_b_vector(const SystemSpec& spec, int mode) {
    if (spec.b_override) {
        return *spec.b_override;
    }
    return b_vector_for(spec.b_choice, spec.nf, spec.delta_m2, spec.big_delta_m2,
                        spec.energies.at(static_cast<std::size_t>(mode)));
}

HamiltonianTerms dirac_terms(const SystemSpec& spec, Basis basis) {
    spec.validate();
    if (spec.statistics != Statistics::Dirac || spec.has_antineutrino()) {
        throw InvalidArgument("Dirac nu-nu Hamiltonian needs Dirac statistics and neutrino modes only");
    }
    HamiltonianTerms t{one_body(spec, basis), CMatrix(), basis};
    const auto& g = generators(spec.nf);
    t.two_body = CMatrix::Zero(t.one_body.rows(), t.one_body.cols());
    for (int p = 0; p < spec.n_modes; ++p) {
        for (int q = p + 1; q < spec.n_modes; ++q) {
            const double s = pair_strength(spec, p, q);
            if (s != 0.0) {
                t.two_body += s * sum_pairs(spec, g, g, p, q);
            }
        }
    }
    return t;
}

HamiltonianMatrix build_dirac_hamiltonian(const SystemSpec& spec, Basis basis) {
    auto t = dirac_terms(spec, basis);
    return {t.one_body + t.two_body, basis};
}

HamiltonianTerms nu_antinu_terms(const SystemSpec& spec) {
    spec.validate();
    if (spec.statistics != Statistics::Dirac) {
        throw InvalidArgument("nu-nubar Hamiltonian needs Dirac statistics");
    }
    HamiltonianTerms t{one_body(spec, Basis::Flavor), CMatrix(), Basis::Flavor};
    const auto& g = generators(spec.nf);
    const auto g_conj = conjugated(g);
    t.two_body = CMatrix::Zero(t.one_body.rows(), t.one_body.cols());
    for (int p = 0; p < spec.n_modes; ++p) {
        for (int q = p + 1; q < spec.n_modes; ++q) {
            const double s = pair_strength(spec, p, q);
            if (s == 0.0) {
                continue;
            }
            const auto sp = spec.species[static_cast<std::size_t>(p)];
            const auto sq = spec.species[static_cast<std::size_t>(q)];
            if (sp == sq) {
                t.two_body += s * sum_pairs(spec, g, g, p, q);
            } else {
                t.two_body += -2.0 * s * sum_pairs(spec, g_conj, g, p, q);
            }
        }
    }
    return t;
}

HamiltonianMatrix build_nu_antinu_hamiltonian(const SystemSpec& spec) {
    auto t = nu_antinu_terms(spec);
    return {t.one_body + t.two_body, Basis::Flavor};
}

HamiltonianTerms majorana_terms(const SystemSpec& spec) {
    spec.validate();
    if (spec.statistics != Statistics::Majorana) {
        throw InvalidArgument("Majorana Hamiltonian needs Majorana statistics");
    }
    HamiltonianTerms t{one_body(spec, Basis::Flavor), CMatrix(), Basis::Flavor};
    const auto im = imaginary_parts(generators(spec.nf));
    t.two_body = CMatrix::Zero(t.one_body.rows(), t.one_body.cols());
    for (int p = 0; p < spec.n_modes; ++p) {
        for (int q = p + 1; q < spec.n_modes; ++q) {
            const double s = pair_strength(spec, p, q);
            if (s != 0.0) {
                t.two_body += 2.0 * s * sum_pairs(spec, im, im, p, q);
            }
        }
    }
    return t;
}

HamiltonianMatrix build_majorana_hamiltonian(const SystemSpec& spec) {
    auto t = majorana_terms(spec);
    return {t.one_body + t.two_body, Basis::Flavor};
}

HamiltonianMatrix build_hamiltonian(const SystemSpec& spec, Basis basis) {
    if (spec.statistics == Statistics::Majorana || spec.has_antineutrino()) {
        if (basis != Basis::Flavor) {
            throw InvalidArgument(
                "nu-nubar and Majorana Hamiltonians are basis-dependent and only built in the "
                "flavor basis");
        }
        return spec.statistics == Statistics::Majorana ? build_majorana_hamiltonian(spec)
                                                       : build_nu_antinu_hamiltonian(spec);
    }
    return build_dirac_hamiltonian(spec, basis);
}

CMatrix restrict_to_block(const HamiltonianMatrix& h, const OccupationBlock& block) {
    if (h.basis != Basis::Mass) {
        throw InvalidArgument("restrict_to_block needs a mass-basis Hamiltonian");
    }
    const Eigen::Index dim = h.matrix.rows();
    std::vector<char> inside(static_cast<std::size_t>(dim), 0);
    for (auto idx : block.indices) {
        if (static_cast<Eigen::Index>(idx) >= dim) {
            throw InvalidArgument("block index outside the Hamiltonian");
        }
        inside[idx] = 1;
    }
    // Relative to the largest entry: Hamiltonians here live at the 1e-12 eV scale.
    const double tol = 1e-10 * h.matrix.cwiseAbs().maxCoeff();
    for (auto r : block.indices) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (!inside[static_cast<std::size_t>(c)] &&
                (std::abs(h.matrix(static_cast<Eigen::Index>(r), c)) > tol ||
                 std::abs(h.matrix(c, static_cast<Eigen::Index>(r))) > tol)) {
                throw InvalidArgument(
                    "Hamiltonian couples the block to states outside it; it is not "
                    "block-diagonal in mass occupation (nu-nubar or Majorana terms?)");
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(block.indices.size());
    CMatrix sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            sub(i, j) = h.matrix(static_cast<Eigen::Index>(block.indices[static_cast<std::size_t>(i)]),
                                 static_cast<Eigen::Index>(block.indices[static_cast<std::size_t>(j)]));
        }
    }
    return sub;
}

double hermiticity_defect(const CMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace cno
