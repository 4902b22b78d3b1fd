#include "cno/clock_qubo.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "cno/evolution.hpp"

namespace cno {

ClockMatrix build_clock(const CMatrix& h, const CVector& initial, double dt, int steps,
                        std::optional<double> penalty_weight) {
    if (h.rows() != h.cols() || h.rows() != initial.size()) {
        throw InvalidArgument("clock: Hamiltonian and initial state dimensions differ");
    }
    if (steps < 1) {
        throw InvalidArgument("clock needs at least one time step");
    }
    if (std::abs(initial.norm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("clock: initial state is not normalized");
    }
    const Eigen::Index d = h.rows();
    const Eigen::Index regs = steps + 1;
    const CMatrix u = propagator(h, dt);
    const CMatrix id = CMatrix::Identity(d, d);

    CMatrix c = CMatrix::Zero(d * regs, d * regs);
    for (Eigen::Index t = 0; t < steps; ++t) {
        c.block(t * d, t * d, d, d) += 0.5 * id;
        c.block((t + 1) * d, (t + 1) * d, d, d) += 0.5 * id;
        c.block((t + 1) * d, t * d, d, d) -= 0.5 * u;
        c.block(t * d, (t + 1) * d, d, d) -= 0.5 * u.adjoint();
    }

    double weight = 0.0;
    if (penalty_weight) {
        weight = *penalty_weight;
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(c, Eigen::EigenvaluesOnly);
        weight = 2.0 * solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (!(weight >= 0.0)) {
        throw InvalidArgument("penalty weight must be nonnegative");
    }
    c.topLeftCorner(d, d) += weight * (id - initial * initial.adjoint());

    ClockMatrix out;
    out.matrix = std::move(c);
    out.state_dim = static_cast<int>(d);
    out.steps = steps;
    out.dt = dt;
    out.penalty_weight = weight;
    return out;
}

RMatrix real_embed(const CMatrix& c) {
    const Eigen::Index n = c.rows();
    RMatrix out(2 * n, 2 * c.cols());
    out.topLeftCorner(n, c.cols()) = c.real();
    out.topRightCorner(n, c.cols()) = -c.imag();
    out.bottomLeftCorner(n, c.cols()) = c.imag();
    out.bottomRightCorner(n, c.cols()) = c.real();
    return out;
}

RVector real_embed(const CVector& a) {
    RVector x(2 * a.size());
    x.head(a.size()) = a.real();
    x.tail(a.size()) = a.imag();
    return x;
}

CVector complex_from_real(const RVector& x) {
    if (x.size() % 2 != 0) {
        throw InvalidArgument("real-embedded vector must have even length");
    }
    const Eigen::Index n = x.size() / 2;
    CVector a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i) = Complex{x(i), x(n + i)};
    }
    return a;
}

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "reverse"; }

void DigitizationParams::validate() const {
    if (bits < 1) {
        throw InvalidArgument("digitization needs K >= 1 bits");
    }
    if (zoom < 0) {
        throw InvalidArgument("zoom level must be nonnegative");
    }
}

double digit_weight(const DigitizationParams& p, int digit) {
    p.validate();
    if (digit < 0 || digit >= p.bits) {
        throw InvalidArgument("digit index out of range");
    }
    const double sign = p.direction == Direction::Forward ? 1.0 : -1.0;
    if (digit == p.bits - 1) {
        return -sign * std::ldexp(1.0, 1 - p.zoom);
    }
    return sign * std::ldexp(1.0, digit + 1 - p.bits - p.zoom);
}

double digitize_value(std::span<const std::uint8_t> bits, const DigitizationParams& p,
                      double prior) {
    if (static_cast<int>(bits.size()) != p.bits) {
        throw InvalidArgument("expected " + std::to_string(p.bits) + " digits");
    }
    double v = prior;
    for (int d = 0; d < p.bits; ++d) {
        if (bits[static_cast<std::size_t>(d)]) {
            v += digit_weight(p, d);
        }
    }
    return v;
}

void QuboProblem::add(std::size_t i, std::size_t j, double value) {
    if (i > j) {
        std::swap(i, j);
    }
    if (j >= size) {
        throw InvalidArgument("QUBO variable index out of range");
    }
    if (value == 0.0) {
        return;
    }
    coefficients[{i, j}] += value;
}

double QuboProblem::energy(std::span<const std::uint8_t> bits) const {
    if (bits.size() != size) {
        throw InvalidArgument("bitstring length does not match QUBO size");
    }
    double e = offset;
    for (const auto& [key, v] : coefficients) {
        if (bits[key.first] && bits[key.second]) {
            e += v;
        }
    }
    return e;
}

void QuboProblem::validate() const {
    if (!std::isfinite(offset)) {
        throw InvalidArgument("QUBO offset is not finite");
    }
    for (const auto& [key, v] : coefficients) {
        if (key.first > key.second || key.second >= size) {
            throw InvalidArgument("QUBO coefficient index out of canonical range");
        }
        if (!std::isfinite(v)) {
            throw InvalidArgument("QUBO coefficient is not finite");
        }
    }
}

void write_qubo(std::ostream& out, const QuboProblem& q) {
    const auto old_precision = out.precision(17);
    out << "qubo " << q.size << ' ' << q.offset << '\n';
    for (const auto& [key, v] : q.coefficients) {
        if (v != 0.0) {
            out << key.first << ' ' << key.second << ' ' << v << '\n';
        }
    }
    out.precision(old_precision);
}

QuboProblem read_qubo(std::istream& in) {
    QuboProblem q;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        if (!have_header) {
            std::string tag;
            if (!(ss >> tag >> q.size >> q.offset) || tag != "qubo") {
                throw InvalidArgument("line " + std::to_string(line_no) +
                                      ": expected header 'qubo <size> <offset>'");
            }
            have_header = true;
            continue;
        }
        std::size_t i = 0, j = 0;
        double v = 0.0;
        std::string rest;
        if (!(ss >> i >> j >> v) || (ss >> rest)) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'i j coeff'");
        }
        if (i > j || j >= q.size) {
            throw InvalidArgument("line " + std::to_string(line_no) +
                                  ": indices must satisfy i <= j < size");
        }
        q.add(i, j, v);
    }
    if (!have_header) {
        throw InvalidArgument("QUBO stream has no header");
    }
    q.validate();
    return q;
}

IsingProblem to_ising(const QuboProblem& q) {
    IsingProblem out;
    out.h.assign(q.size, 0.0);
    out.offset = q.offset;
    for (const auto& [key, v] : q.coefficients) {
        const auto [i, j] = key;
        if (i == j) {
            // v x = v (1 - s) / 2
            out.offset += v / 2.0;
            out.h[i] -= v / 2.0;
        } else {
            // v x_i x_j = v (1 - s_i - s_j + s_i s_j) / 4
            out.offset += v / 4.0;
            out.h[i] -= v / 4.0;
            out.h[j] -= v / 4.0;
            out.j[{i, j}] += v / 4.0;
        }
    }
    return out;
}

RVector DigitizedQubo::apply(const RVector& prior, std::span<const std::uint8_t> bits) const {
    if (bits.size() != problem.size) {
        throw InvalidArgument("bitstring length does not match QUBO size");
    }
    RVector x = prior;
    for (std::size_t v = 0; v < bits.size(); ++v) {
        if (bits[v]) {
            x(static_cast<Eigen::Index>(amplitude[v])) += digit_weight(params, digit[v]);
        }
    }
    return x;
}

DigitizedQubo build_qubo(const RMatrix& real_c, const DigitizationParams& p,
                         const RVector& prior) {
    return build_qubo(real_c, p, prior, std::vector<bool>(static_cast<std::size_t>(prior.size()), true));
}

DigitizedQubo build_qubo(const RMatrix& real_c, const DigitizationParams& p,
                         const RVector& prior, const std::vector<bool>& active) {
    p.validate();
    const Eigen::Index n = real_c.rows();
    if (real_c.cols() != n || prior.size() != n || static_cast<Eigen::Index>(active.size()) != n) {
        throw InvalidArgument("build_qubo: matrix, prior and mask dimensions differ");
    }

    DigitizedQubo out;
    out.params = p;
    for (Eigen::Index a = 0; a < n; ++a) {
        if (!active[static_cast<std::size_t>(a)]) {
            continue;
        }
        for (int d = 0; d < p.bits; ++d) {
            out.amplitude.push_back(static_cast<std::size_t>(a));
            out.digit.push_back(d);
        }
    }
    const std::size_t nvars = out.amplitude.size();
    out.problem.size = nvars;

    // E(q) = (x0 + Wq)^T C (x0 + Wq)
    //      = x0^T C x0 + 2 sum_v w_v (C x0)_{a_v} q_v + sum_{v,u} w_v w_u C_{a_v a_u} q_v q_u
    const RVector cx = real_c * prior;
    out.problem.offset = prior.dot(cx);
    std::vector<double> w(nvars);
    for (std::size_t v = 0; v < nvars; ++v) {
        w[v] = digit_weight(p, out.digit[v]);
    }
    for (std::size_t v = 0; v < nvars; ++v) {
        const auto av = static_cast<Eigen::Index>(out.amplitude[v]);
        out.problem.add(v, v, w[v] * w[v] * real_c(av, av) + 2.0 * w[v] * cx(av));
        for (std::size_t u = v + 1; u < nvars; ++u) {
            const auto au = static_cast<Eigen::Index>(out.amplitude[u]);
            out.problem.add(v, u, w[v] * w[u] * (real_c(av, au) + real_c(au, av)));
        }
    }
    return out;
}

}  // namespace cno
