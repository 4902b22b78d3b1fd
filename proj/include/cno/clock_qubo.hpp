#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cno/common.hpp"

namespace cno {

// Feynman clock operator over T+1 time registers. The clock vector is laid
// out register-major: index = t * state_dim + alpha.
struct ClockMatrix {
    CMatrix matrix;
    int state_dim = 0;
    int steps = 0;
    double dt = 0.0;
    double penalty_weight = 0.0;

    int registers() const { return steps + 1; }
};

// C = C0 + 1/2 sum_t (I|t><t| - U|t+1><t| - U^dag|t><t+1| + I|t+1><t+1|),
// C0 = w (I - |psi0><psi0|) on register 0. Without an explicit penalty,
// w = 2 * ||C - C0||_2.
ClockMatrix build_clock(const CMatrix& h, const CVector& initial, double dt, int steps = 1,
                        std::optional<double> penalty_weight = std::nullopt);

// [[Re C, -Im C], [Im C, Re C]]: x^T M x = a^dag C a for x = (Re a, Im a).
RMatrix real_embed(const CMatrix& c);
RVector real_embed(const CVector& a);
CVector complex_from_real(const RVector& x);

enum class Direction { Forward, Reverse };

const char* to_string(Direction d);

struct DigitizationParams {
    int bits = 1;   // K
    int zoom = 0;   // z
    Direction direction = Direction::Forward;

    void validate() const;
};

// Weight of digit `digit` (0-based, digit K-1 is the sign digit) in the
// amplitude update. Forward: -2^(1-z) for the sign digit, 2^(d+1-K-z)
// for the others; Reverse flips every sign.
double digit_weight(const DigitizationParams& p, int digit);

// prior + sum_d weight(d) * q_d.
double digitize_value(std::span<const std::uint8_t> bits, const DigitizationParams& p,
                      double prior);

// Minimize f(x) = sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j + offset.
struct QuboProblem {
    std::size_t size = 0;
    std::map<std::pair<std::size_t, std::size_t>, double> coefficients;  // i <= j
    double offset = 0.0;

    void add(std::size_t i, std::size_t j, double value);
    double energy(std::span<const std::uint8_t> bits) const;
    void validate() const;
};

// Text format: "qubo <size> <offset>" then one "i j coeff" line per nonzero.
void write_qubo(std::ostream& out, const QuboProblem& q);
QuboProblem read_qubo(std::istream& in);

struct IsingProblem {
    std::vector<double> h;
    std::map<std::pair<std::size_t, std::size_t>, double> j;  // i < j
    double offset = 0.0;
};

// Substitutes x = (1 - s) / 2 with spins s in {-1, +1}.
IsingProblem to_ising(const QuboProblem& q);

// QUBO for x = prior + W q over the active amplitudes of a real-embedded
// matrix. Variable v maps to amplitude `amplitude[v]` and digit `digit[v]`.
struct DigitizedQubo {
    QuboProblem problem;
    DigitizationParams params;
    std::vector<std::size_t> amplitude;
    std::vector<int> digit;

    RVector apply(const RVector& prior, std::span<const std::uint8_t> bits) const;
};

DigitizedQubo build_qubo(const RMatrix& real_c, const DigitizationParams& p,
                         const RVector& prior);

// Same, with inactive amplitudes frozen at their prior value (no variables).
DigitizedQubo build_qubo(const RMatrix& real_c, const DigitizationParams& p,
                         const RVector& prior, const std::vector<bool>& active);

}  // namespace cno
