#include "cno/witness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

namespace cno {

namespace {

void check_mode(const StateVector& s, int mode) {
    if (mode < 0 || mode >= s.n_modes()) {
        throw InvalidArgument("mode " + std::to_string(mode) + " out of range for " +
                              std::to_string(s.n_modes()) + " modes");
    }
}

Eigen::Index mode_stride(const StateVector& s, int mode) {
    Eigen::Index stride = 1;
    for (int p = mode + 1; p < s.n_modes(); ++p) {
        stride *= s.nf();
    }
    return stride;
}

}  // namespace

CMatrix reduced_density_single(const StateVector& state, int mode) {
    check_mode(state, mode);
    const int nf = state.nf();
    const Eigen::Index stride = mode_stride(state, mode);
    const Eigen::Index block = stride * nf;
    const CVector& psi = state.amplitudes();
    CMatrix rho = CMatrix::Zero(nf, nf);
    for (Eigen::Index base = 0; base < psi.size(); base += block) {
        for (Eigen::Index r = 0; r < stride; ++r) {
            for (int a = 0; a < nf; ++a) {
                const Complex va = psi(base + a * stride + r);
                for (int b = 0; b < nf; ++b) {
                    rho(a, b) += va * std::conj(psi(base + b * stride + r));
                }
            }
        }
    }
    return rho;
}

CMatrix reduced_density_pair(const StateVector& state, int mode_i, int mode_j) {
    check_mode(state, mode_i);
    check_mode(state, mode_j);
    if (mode_i == mode_j) {
        throw InvalidArgument("pair reduced density needs two distinct modes");
    }
    const int nf = state.nf();
    const Eigen::Index si = mode_stride(state, mode_i);
    const Eigen::Index sj = mode_stride(state, mode_j);
    const CVector& psi = state.amplitudes();
    CMatrix rho = CMatrix::Zero(nf * nf, nf * nf);
    // Enumerate the environment by stepping over indices whose i and j digits are 0.
    for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
        if ((idx / si) % nf != 0 || (idx / sj) % nf != 0) {
            continue;
        }
        for (int a = 0; a < nf; ++a) {
            for (int b = 0; b < nf; ++b) {
                const Complex v = psi(idx + a * si + b * sj);
                if (v == Complex{}) {
                    continue;
                }
                for (int c = 0; c < nf; ++c) {
                    for (int d = 0; d < nf; ++d) {
                        rho(a * nf + b, c * nf + d) += v * std::conj(psi(idx + c * si + d * sj));
                    }
                }
            }
        }
    }
    return rho;
}

double von_neumann_entropy(const CMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on reduced density matrix");
    }
    double s = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double p = solver.eigenvalues()(k);
        if (p > 0.0) {
            s -= p * std::log2(p);
        } else if (p < -1e-12) {
            throw NumericalError("reduced density matrix has a negative eigenvalue " +
                                 std::to_string(p));
        }
    }
    return std::clamp(s, 0.0, std::log2(static_cast<double>(rho.rows())));
}

double entanglement_entropy(const StateVector& state, int mode) {
    return von_neumann_entropy(reduced_density_single(state, mode));
}

double negativity(const StateVector& state, int mode_i, int mode_j) {
    if (mode_i == mode_j) {
        throw InvalidArgument("negativity needs two distinct modes");
    }
    const int nf = state.nf();
    const CMatrix rho = reduced_density_pair(state, mode_i, mode_j);
    CMatrix pt(nf * nf, nf * nf);
    for (int a = 0; a < nf; ++a) {
        for (int b = 0; b < nf; ++b) {
            for (int c = 0; c < nf; ++c) {
                for (int d = 0; d < nf; ++d) {
                    pt(a * nf + b, c * nf + d) = rho(a * nf + d, c * nf + b);
                }
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(pt, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on partial transpose");
    }
    return std::log2(solver.eigenvalues().cwiseAbs().sum());
}

WitnessReport witness_report(const StateVector& state, double time) {
    WitnessReport r;
    r.time = time;
    for (int p = 0; p < state.n_modes(); ++p) {
        r.entropies.push_back(entanglement_entropy(state, p));
    }
    for (int i = 0; i < state.n_modes(); ++i) {
        for (int j = i + 1; j < state.n_modes(); ++j) {
            r.negativities.push_back({i, j, negativity(state, i, j)});
        }
    }
    return r;
}

double dominant_frequency(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) {
        throw InvalidArgument("times and values differ in length");
    }
    const std::size_t n = times.size();
    if (n < 16) {
        throw InvalidArgument("dominant_frequency needs at least 16 samples");
    }
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) {
        throw InvalidArgument("sample times must increase");
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double step = times[k] - times[k - 1];
        if (std::abs(step - dt) > 1e-9 * std::abs(dt)) {
            throw InvalidArgument("sample times are not uniformly spaced");
        }
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t k = 0; k < n; ++k) {
        centered[k] = values[k] - mean;
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, centered);
    std::size_t best = 0;
    double best_mag = 1e-12;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double mag = std::abs(spectrum[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return static_cast<double>(best) / (static_cast<double>(n) * dt);
}

}  // namespace cno
