#include "cno/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace cno {

namespace {

// Dense symmetric form: E = offset + sum_i h_i x_i + 1/2 sum_{i!=j} J_ij x_i x_j.
struct DenseQubo {
    std::size_t n = 0;
    std::vector<double> linear;
    std::vector<double> coupling;  // row-major n x n, zero diagonal

    explicit DenseQubo(const QuboProblem& q) : n(q.size), linear(q.size, 0.0), coupling(q.size * q.size, 0.0) {
        for (const auto& [key, v] : q.coefficients) {
            const auto [i, j] = key;
            if (i == j) {
                linear[i] += v;
            } else {
                coupling[i * n + j] += v;
                coupling[j * n + i] += v;
            }
        }
    }
};

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    // Lemire-style rejection keeps the stream platform independent.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = 0;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

}  // namespace

void AnnealSchedule::validate() const {
    if (sweeps < 0) {
        throw InvalidArgument("sweeps must be nonnegative");
    }
    if (reads < 1) {
        throw InvalidArgument("reads must be at least 1");
    }
    if (beta_start && !(*beta_start > 0.0)) {
        throw InvalidArgument("beta_start must be positive");
    }
    if (beta_end && !(*beta_end > 0.0)) {
        throw InvalidArgument("beta_end must be positive");
    }
    if (beta_start && beta_end && *beta_end < *beta_start) {
        throw InvalidArgument("beta_end must be >= beta_start");
    }
}

std::pair<double, double> default_beta_range(const QuboProblem& q) {
    const DenseQubo d(q);
    double max_delta = 0.0;
    double min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.n; ++i) {
        double bound = std::abs(d.linear[i]);
        for (std::size_t j = 0; j < d.n; ++j) {
            bound += std::abs(d.coupling[i * d.n + j]);
        }
        max_delta = std::max(max_delta, bound);
    }
    const double floor = 1e-12 * max_delta;
    for (const auto& [key, v] : q.coefficients) {
        const double a = std::abs(v);
        if (a > floor) {
            min_delta = std::min(min_delta, a);
        }
    }
    if (!(max_delta > 0.0) || !std::isfinite(min_delta)) {
        return {1.0, 1.0};
    }
    const double hot = std::log(2.0) / max_delta;
    const double cold = std::max(hot, std::log(1e4) / min_delta);
    return {hot, cold};
}

AnnealResult anneal(const QuboProblem& q, const AnnealSchedule& schedule) {
    schedule.validate();
    q.validate();
    if (q.size == 0) {
        throw InvalidArgument("cannot anneal an empty QUBO");
    }
    const DenseQubo d(q);
    const std::size_t n = d.n;

    AnnealResult result;
    auto [hot, cold] = default_beta_range(q);
    result.beta_start = schedule.beta_start.value_or(hot);
    result.beta_end = schedule.beta_end.value_or(std::max(cold, result.beta_start));
    if (result.beta_end < result.beta_start) {
        throw InvalidArgument("beta_end must be >= beta_start");
    }

    std::vector<double> betas(static_cast<std::size_t>(schedule.sweeps));
    for (int s = 0; s < schedule.sweeps; ++s) {
        const double frac = schedule.sweeps == 1 ? 1.0 : static_cast<double>(s) / (schedule.sweeps - 1);
        betas[static_cast<std::size_t>(s)] =
            result.beta_start * std::pow(result.beta_end / result.beta_start, frac);
    }

    std::vector<std::uint8_t> x(n);
    std::vector<double> field(n);
    std::vector<std::size_t> order(n);
    result.best_energy = std::numeric_limits<double>::infinity();
    result.read_energies.reserve(static_cast<std::size_t>(schedule.reads));

    for (int r = 0; r < schedule.reads; ++r) {
        std::mt19937_64 rng(schedule.seed + static_cast<std::uint64_t>(r));
        for (auto& b : x) {
            b = static_cast<std::uint8_t>(rng() >> 63);
        }
        std::fill(field.begin(), field.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i]) {
                const double* row = &d.coupling[i * n];
                for (std::size_t j = 0; j < n; ++j) {
                    field[j] += row[j];
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        for (double beta : betas) {
            for (std::size_t k = n; k > 1; --k) {
                std::swap(order[k - 1], order[uniform_index(rng, k)]);
            }
            for (std::size_t i : order) {
                const double local = d.linear[i] + field[i];
                const double delta = x[i] ? -local : local;
                if (delta <= 0.0 || uniform01(rng) < std::exp(-beta * delta)) {
                    x[i] ^= 1U;
                    const double sign = x[i] ? 1.0 : -1.0;
                    const double* row = &d.coupling[i * n];
                    for (std::size_t j = 0; j < n; ++j) {
                        field[j] += sign * row[j];
                    }
                }
            }
        }
        const double e = q.energy(x);
        result.read_energies.push_back(e);
        if (e < result.best_energy) {
            result.best_energy = e;
            result.best_bits = x;
        }
    }
    return result;
}

}  // namespace cno
