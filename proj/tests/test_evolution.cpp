#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cno/evolution.hpp"

using namespace cno;

namespace {

// Classical RK4 on i dU/dt = H U, all columns at once.
CMatrix rk4_propagator(const CMatrix& h, double t, int steps) {
    const Complex mi(0, -1);
    CMatrix u = CMatrix::Identity(h.rows(), h.cols());
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        const CMatrix k1 = mi * h * u;
        const CMatrix k2 = mi * h * (u + 0.5 * dt * k1);
        const CMatrix k3 = mi * h * (u + 0.5 * dt * k2);
        const CMatrix k4 = mi * h * (u + dt * k3);
        u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

}  // namespace

TEST(Propagator, ZeroTimeIsIdentity) {
    const CMatrix h = build_dirac_hamiltonian(table1_spec(2, 3), Basis::Flavor).matrix;
    EXPECT_LT((propagator(h, 0.0) - CMatrix::Identity(9, 9)).norm(), 1e-14);
}

TEST(Propagator, DiagonalIsAnalytic) {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = 0.3;
    h(1, 1) = -1.7;
    const double t = 2.5;
    const CMatrix u = propagator(h, t);
    EXPECT_LT(std::abs(u(0, 0) - std::exp(Complex(0, -0.3 * t))), 1e-14);
    EXPECT_LT(std::abs(u(1, 1) - std::exp(Complex(0, 1.7 * t))), 1e-14);
    EXPECT_LT(std::abs(u(0, 1)), 1e-15);
}

TEST(Propagator, MatchesRk4Integration) {
    SystemSpec s = table1_spec(2, 3);
    const CMatrix h = build_dirac_hamiltonian(s, Basis::Flavor).matrix;
    const double t = 1e12;
    const double hn = h.cwiseAbs().rowwise().sum().maxCoeff();
    const int steps = static_cast<int>(std::ceil(t * hn / 0.005));
    const CMatrix want = rk4_propagator(h, t, steps);
    const CMatrix got = propagator(h, t);
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(unitarity_defect(got), 1e-12);
}

TEST(Propagator, GroupProperty) {
    const CMatrix h = build_dirac_hamiltonian(table1_spec(3, 3), Basis::Mass).matrix;
    const SpectralPropagator p(h);
    EXPECT_LT((p.at(3e11) * p.at(4e11) - p.at(7e11)).norm(), 1e-11);
    EXPECT_LT((p.at(-5e11) * p.at(5e11) - CMatrix::Identity(27, 27)).norm(), 1e-11);
}

TEST(Propagator, RejectsNonHermitian) {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 1) = 1.0;
    EXPECT_THROW(SpectralPropagator{h}, InvalidArgument);
}

TEST(Series, EmptyAndRepeatedTimes) {
    const SystemSpec s = table1_spec(2, 3);
    const std::vector<int> labels{0, 1};
    const auto init = StateVector::product(labels, Basis::Flavor, 3);
    EXPECT_TRUE(evolve_series(s, init, {}).empty());
    const std::vector<double> times{1e12, 1e12};
    const auto out = evolve_series(s, init, times);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ((out[0].amplitudes() - out[1].amplitudes()).norm(), 0.0);
    EXPECT_NEAR(out[0].norm(), 1.0, 1e-14);
}

TEST(Series, FlavorAndMassPathsAgree) {
    const SystemSpec s = table1_spec(4, 3);
    const std::vector<int> labels{0, 0, 2, 1};
    const auto init = StateVector::product(labels, Basis::Flavor, 3);
    const std::vector<double> times{1.1e12, 5.5e12};
    const auto f = evolve_series(s, init, times);
    const auto m = evolve_series(s, change_basis(init, Basis::Mass, s.pmns), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        EXPECT_EQ(m[k].basis(), Basis::Mass);
        const auto back = change_basis(m[k], Basis::Flavor, s.pmns);
        EXPECT_LT((back.amplitudes() - f[k].amplitudes()).norm(), 1e-10);
    }
}

TEST(Series, RejectsBadInput) {
    const SystemSpec s = table1_spec(2, 3);
    const StateVector unnormalized(CVector::Constant(9, 1.0), Basis::Flavor, 3, 2);
    const std::vector<double> t{1.0};
    EXPECT_THROW(evolve_series(s, unnormalized, t), InvalidArgument);
    const std::vector<int> labels{0, 1};
    const auto init = StateVector::product(labels, Basis::Flavor, 3);
    const std::vector<double> bad{std::nan("")};
    EXPECT_THROW(evolve_series(s, init, bad), InvalidArgument);
    const std::vector<int> three{0, 1, 2};
    EXPECT_THROW(evolve_series(s, StateVector::product(three, Basis::Flavor, 3), t), InvalidArgument);
}

TEST(Series, NormPreservedProperty) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    const SystemSpec s = table1_spec(3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        CVector v(27);
        for (auto& x : v) x = Complex(g(rng), g(rng));
        const StateVector init(v.normalized(), Basis::Flavor, 3, 3);
        const std::vector<double> times{std::abs(g(rng)) * 1e12};
        EXPECT_NEAR(evolve_series(s, init, times)[0].norm(), 1.0, 1e-12);
    }
}
