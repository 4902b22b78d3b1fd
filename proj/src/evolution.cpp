#include "cno/evolution.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cno {

SpectralPropagator::SpectralPropagator(const CMatrix& h) {
    if (h.rows() != h.cols()) {
        throw InvalidArgument("Hamiltonian must be square");
    }
    if (hermiticity_defect(h) > 1e-12 * h.cwiseAbs().maxCoeff()) {
        throw InvalidArgument("Hamiltonian is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver failed to converge");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

CMatrix SpectralPropagator::at(double t) const {
    CVector phases(eigenvalues_.size());
    for (Eigen::Index j = 0; j < eigenvalues_.size(); ++j) {
        phases(j) = std::polar(1.0, -eigenvalues_(j) * t);
    }
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

CVector SpectralPropagator::evolve(const CVector& psi, double t) const {
    CVector coeffs = eigenvectors_.adjoint() * psi;
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
        coeffs(j) *= std::polar(1.0, -eigenvalues_(j) * t);
    }
    return eigenvectors_ * coeffs;
}

CMatrix propagator(const CMatrix& h, double t) { return SpectralPropagator(h).at(t); }

std::vector<StateVector> evolve_series(const SystemSpec& spec, const StateVector& initial,
                                       std::span<const double> times) {
    if (initial.nf() != spec.nf || initial.n_modes() != spec.n_modes) {
        throw InvalidArgument("initial state does not match the system size");
    }
    if (std::abs(initial.norm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("initial state is not normalized");
    }
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw InvalidArgument("evolution times must be finite and nonnegative");
        }
    }
    std::vector<StateVector> out;
    if (times.empty()) {
        return out;
    }
    const SpectralPropagator prop(build_hamiltonian(spec, initial.basis()).matrix);
    out.reserve(times.size());
    for (double t : times) {
        CVector psi = prop.evolve(initial.amplitudes(), t);
        psi /= psi.norm();
        out.emplace_back(std::move(psi), initial.basis(), spec.nf, spec.n_modes);
    }
    return out;
}

double unitarity_defect(const CMatrix& u) {
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace cno
