#include "cno/basis.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string>

namespace cno {

namespace {

void check_nf(int nf) {
    if (nf != 2 && nf != 3) {
        throw InvalidArgument("nf must be 2 or 3, got " + std::to_string(nf));
    }
}

std::vector<CMatrix> make_pauli() {
    const Complex i{0.0, 1.0};
    std::vector<CMatrix> s(3, CMatrix::Zero(2, 2));
    s[0](0, 1) = 1.0;
    s[0](1, 0) = 1.0;
    s[1](0, 1) = -i;
    s[1](1, 0) = i;
    s[2](0, 0) = 1.0;
    s[2](1, 1) = -1.0;
    return s;
}

std::vector<CMatrix> make_gell_mann() {
    const Complex i{0.0, 1.0};
    std::vector<CMatrix> l(8, CMatrix::Zero(3, 3));
    l[0](0, 1) = 1.0;
    l[0](1, 0) = 1.0;
    l[1](0, 1) = -i;
    l[1](1, 0) = i;
    l[2](0, 0) = 1.0;
    l[2](1, 1) = -1.0;
    l[3](0, 2) = 1.0;
    l[3](2, 0) = 1.0;
    l[4](0, 2) = -i;
    l[4](2, 0) = i;
    l[5](1, 2) = 1.0;
    l[5](2, 1) = 1.0;
    l[6](1, 2) = -i;
    l[6](2, 1) = i;
    const double r = 1.0 / std::sqrt(3.0);
    l[7](0, 0) = r;
    l[7](1, 1) = r;
    l[7](2, 2) = -2.0 * r;
    return l;
}

}  // namespace

const char* to_string(Basis b) { return b == Basis::Flavor ? "flavor" : "mass"; }

std::size_t hilbert_dim(int nf, int n_modes) {
    check_nf(nf);
    if (n_modes < 1) {
        throw InvalidArgument("n_modes must be positive");
    }
    std::size_t dim = 1;
    for (int p = 0; p < n_modes; ++p) {
        dim *= static_cast<std::size_t>(nf);
        if (dim > kMaxHilbertDim) {
            throw InvalidArgument("Hilbert space " + std::to_string(nf) + "^" +
                                  std::to_string(n_modes) + " exceeds the dense cap of " +
                                  std::to_string(kMaxHilbertDim));
        }
    }
    return dim;
}

StateVector::StateVector(CVector amplitudes, Basis basis, int nf, int n_modes)
    : amplitudes_(std::move(amplitudes)), basis_(basis), nf_(nf), n_modes_(n_modes) {
    const std::size_t dim = hilbert_dim(nf, n_modes);
    if (static_cast<std::size_t>(amplitudes_.size()) != dim) {
        throw InvalidArgument("state has " + std::to_string(amplitudes_.size()) +
                              " amplitudes, expected " + std::to_string(dim));
    }
}

StateVector StateVector::product(std::span<const int> labels, Basis basis, int nf) {
    const int n = static_cast<int>(labels.size());
    const std::size_t dim = hilbert_dim(nf, n);
    std::size_t index = 0;
    for (int f : labels) {
        if (f < 0 || f >= nf) {
            throw InvalidArgument("label " + std::to_string(f) + " out of range for nf=" +
                                  std::to_string(nf));
        }
        index = index * static_cast<std::size_t>(nf) + static_cast<std::size_t>(f);
    }
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(dim));
    psi(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(psi), basis, nf, n);
}

const std::vector<CMatrix>& generators(int nf) {
    check_nf(nf);
    static const std::vector<CMatrix> pauli = make_pauli();
    static const std::vector<CMatrix> gell_mann = make_gell_mann();
    return nf == 2 ? pauli : gell_mann;
}

CMatrix pmns_matrix(const PmnsParams& params, int nf) {
    check_nf(nf);
    const double c12 = std::cos(params.theta12), s12 = std::sin(params.theta12);
    if (nf == 2) {
        CMatrix u(2, 2);
        u << c12, s12, -s12, c12;
        return u;
    }
    const double c13 = std::cos(params.theta13), s13 = std::sin(params.theta13);
    const double c23 = std::cos(params.theta23), s23 = std::sin(params.theta23);
    const Complex phase = std::polar(1.0, params.delta_cp);

    CMatrix r23 = CMatrix::Identity(3, 3);
    r23(1, 1) = c23;
    r23(1, 2) = s23;
    r23(2, 1) = -s23;
    r23(2, 2) = c23;

    CMatrix r13 = CMatrix::Identity(3, 3);
    r13(0, 0) = c13;
    r13(0, 2) = s13 * std::conj(phase);
    r13(2, 0) = -s13 * phase;
    r13(2, 2) = c13;

    CMatrix r12 = CMatrix::Identity(3, 3);
    r12(0, 0) = c12;
    r12(0, 1) = s12;
    r12(1, 0) = -s12;
    r12(1, 1) = c12;

    return r23 * r13 * r12;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix embed_single_mode(const CMatrix& op, int mode, int n_modes) {
    if (op.rows() != op.cols() || (op.rows() != 2 && op.rows() != 3)) {
        throw InvalidArgument("single-mode operator must be 2x2 or 3x3");
    }
    if (mode < 0 || mode >= n_modes) {
        throw InvalidArgument("mode " + std::to_string(mode) + " out of range [0, " +
                              std::to_string(n_modes) + ")");
    }
    const int nf = static_cast<int>(op.rows());
    const auto left = static_cast<Eigen::Index>(hilbert_dim(nf, n_modes) /
                                                hilbert_dim(nf, n_modes - mode));
    const auto right = static_cast<Eigen::Index>(hilbert_dim(nf, n_modes - mode) / nf);
    return kron(kron(CMatrix::Identity(left, left), op), CMatrix::Identity(right, right));
}

void apply_single_mode(CVector& psi, const CMatrix& op, int mode, int n_modes) {
    const int nf = static_cast<int>(op.rows());
    if (op.cols() != nf || static_cast<std::size_t>(psi.size()) != hilbert_dim(nf, n_modes)) {
        throw InvalidArgument("apply_single_mode: dimension mismatch");
    }
    if (mode < 0 || mode >= n_modes) {
        throw InvalidArgument("apply_single_mode: mode out of range");
    }
    const auto stride = static_cast<Eigen::Index>(hilbert_dim(nf, n_modes - mode) / nf);
    const Eigen::Index block = stride * nf;
    CVector slice(nf);
    for (Eigen::Index base = 0; base < psi.size(); base += block) {
        for (Eigen::Index r = 0; r < stride; ++r) {
            for (int a = 0; a < nf; ++a) {
                slice(a) = psi(base + a * stride + r);
            }
            const CVector out = op * slice;
            for (int a = 0; a < nf; ++a) {
                psi(base + a * stride + r) = out(a);
            }
        }
    }
}

StateVector change_basis(const StateVector& state, Basis to, const PmnsParams& params) {
    if (state.basis() == to) {
        throw InvalidArgument(std::string("state is already in the ") + to_string(to) +
                              " basis");
    }
    const CMatrix u = pmns_matrix(params, state.nf());
    const CMatrix op = to == Basis::Mass ? CMatrix(u.adjoint()) : u;
    CVector psi = state.amplitudes();
    for (int p = 0; p < state.n_modes(); ++p) {
        apply_single_mode(psi, op, p, state.n_modes());
    }
    return StateVector(std::move(psi), to, state.nf(), state.n_modes());
}

std::vector<int> basis_labels(std::size_t index, int nf, int n_modes) {
    std::vector<int> labels(static_cast<std::size_t>(n_modes));
    for (int p = n_modes - 1; p >= 0; --p) {
        labels[static_cast<std::size_t>(p)] = static_cast<int>(index % static_cast<std::size_t>(nf));
        index /= static_cast<std::size_t>(nf);
    }
    return labels;
}

std::vector<OccupationBlock> mass_blocks(int nf, int n_modes) {
    const std::size_t dim = hilbert_dim(nf, n_modes);
    std::map<std::vector<int>, std::vector<std::size_t>, std::greater<>> sectors;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::vector<int> occ(static_cast<std::size_t>(nf), 0);
        for (int label : basis_labels(idx, nf, n_modes)) {
            ++occ[static_cast<std::size_t>(label)];
        }
        sectors[occ].push_back(idx);
    }
    std::vector<OccupationBlock> blocks;
    blocks.reserve(sectors.size());
    for (auto& [occ, indices] : sectors) {
        blocks.push_back({occ, std::move(indices)});
    }
    return blocks;
}

}  // namespace cno
