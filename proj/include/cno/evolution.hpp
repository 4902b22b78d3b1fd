#pragma once

#include <span>
#include <vector>

#include "cno/hamiltonian.hpp"

namespace cno {

// Eigendecomposition H = V diag(e) V^dagger, computed once and reused for
// every evolution time.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const CMatrix& h);

    // exp(-i H t)
    CMatrix at(double t) const;
    CVector evolve(const CVector& psi, double t) const;

    const RVector& eigenvalues() const { return eigenvalues_; }
    const CMatrix& eigenvectors() const { return eigenvectors_; }

private:
    RVector eigenvalues_;
    CMatrix eigenvectors_;
};

CMatrix propagator(const CMatrix& h, double t);

std::vector<StateVector> evolve_series(const SystemSpec& spec, const StateVector& initial,
                                       std::span<const double> times);

double unitarity_defect(const CMatrix& u);

}  // namespace cno
