#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cno/evolution.hpp"
#include "cno/witness.hpp"

using namespace cno;

namespace {

StateVector random_state(int nf, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVector v(static_cast<Eigen::Index>(hilbert_dim(nf, n)));
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return {v.normalized(), Basis::Flavor, nf, n};
}

StateVector bell(int nf) {
    CVector v = CVector::Zero(nf * nf);
    v(0) = v(nf + 1) = 1.0 / std::sqrt(2.0);
    return {v, Basis::Flavor, nf, 2};
}

// rho_{ab} = sum over all other digits of psi(..a..) conj(psi(..b..)).
CMatrix partial_trace_oracle(const StateVector& s, int mode) {
    const int nf = s.nf();
    CMatrix rho = CMatrix::Zero(nf, nf);
    for (std::size_t x = 0; x < s.dim(); ++x) {
        for (std::size_t y = 0; y < s.dim(); ++y) {
            const auto lx = basis_labels(x, nf, s.n_modes());
            const auto ly = basis_labels(y, nf, s.n_modes());
            bool same = true;
            for (int p = 0; p < s.n_modes(); ++p)
                if (p != mode && lx[static_cast<std::size_t>(p)] != ly[static_cast<std::size_t>(p)]) same = false;
            if (same)
                rho(lx[static_cast<std::size_t>(mode)], ly[static_cast<std::size_t>(mode)]) +=
                    s.amplitudes()(static_cast<Eigen::Index>(x)) *
                    std::conj(s.amplitudes()(static_cast<Eigen::Index>(y)));
        }
    }
    return rho;
}

}  // namespace

TEST(ReducedDensity, ProductStateIsPure) {
    const std::vector<int> labels{0, 1};
    const auto rho = reduced_density_single(StateVector::product(labels, Basis::Flavor, 3), 0);
    CMatrix want = CMatrix::Zero(3, 3);
    want(0, 0) = 1.0;
    EXPECT_LT((rho - want).norm(), 1e-15);
}

TEST(ReducedDensity, BellIsMaximallyMixed) {
    EXPECT_LT((reduced_density_single(bell(2), 0) - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(ReducedDensity, MatchesIndexSumOracle) {
    std::mt19937_64 rng(3);
    for (int nf : {2, 3}) {
        const auto s = random_state(nf, 3, rng);
        for (int mode = 0; mode < 3; ++mode) {
            const CMatrix rho = reduced_density_single(s, mode);
            EXPECT_LT((rho - partial_trace_oracle(s, mode)).norm(), 1e-14);
            EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
            EXPECT_LT((rho - rho.adjoint()).norm(), 1e-15);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
            EXPECT_GT(es.eigenvalues().minCoeff(), -1e-14);
        }
    }
}

TEST(ReducedDensity, PairTracesToSingle) {
    std::mt19937_64 rng(4);
    const auto s = random_state(3, 4, rng);
    const CMatrix pair = reduced_density_pair(s, 1, 3);
    CMatrix first = CMatrix::Zero(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) first(a, b) += pair(a * 3 + c, b * 3 + c);
    EXPECT_LT((first - reduced_density_single(s, 1)).norm(), 1e-14);
}

TEST(Entropy, ProductAndBell) {
    const std::vector<int> labels{2, 0, 1};
    const auto p = StateVector::product(labels, Basis::Flavor, 3);
    for (int m = 0; m < 3; ++m) EXPECT_NEAR(entanglement_entropy(p, m), 0.0, 1e-15);
    EXPECT_NEAR(entanglement_entropy(bell(2), 0), 1.0, 1e-14);
    EXPECT_NEAR(entanglement_entropy(bell(3), 1), 1.0, 1e-14);
}

TEST(Entropy, BoundedProperty) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_state(3, 3, rng);
        for (int m = 0; m < 3; ++m) {
            const double e = entanglement_entropy(s, m);
            EXPECT_GE(e, 0.0);
            EXPECT_LE(e, std::log2(3.0) + 1e-12);
        }
    }
}

TEST(Entropy, PureBipartiteSymmetry) {
    // Both halves of a pure two-mode state carry the same entropy.
    std::mt19937_64 rng(8);
    const auto s = random_state(3, 2, rng);
    EXPECT_NEAR(entanglement_entropy(s, 0), entanglement_entropy(s, 1), 1e-12);
}

TEST(Negativity, ProductAndBell) {
    const std::vector<int> labels{0, 1, 2};
    const auto p = StateVector::product(labels, Basis::Flavor, 3);
    EXPECT_NEAR(negativity(p, 0, 2), 0.0, 1e-14);
    EXPECT_NEAR(negativity(bell(2), 0, 1), 1.0, 1e-14);
    EXPECT_THROW(negativity(p, 1, 1), InvalidArgument);
    EXPECT_THROW(negativity(p, 0, 3), InvalidArgument);
}

TEST(Negativity, SymmetricAndNonnegativeProperty) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_state(3, 3, rng);
        const double a = negativity(s, 0, 2);
        EXPECT_NEAR(a, negativity(s, 2, 0), 1e-12);
        EXPECT_GE(a, -1e-14);
        EXPECT_LE(a, std::log2(3.0) + 1e-12);
    }
}

TEST(Witness, GoldenValuesAtFirstTime) {
    const SystemSpec spec = table1_spec(4, 3);
    const std::vector<int> labels{0, 0, 2, 1};
    const std::vector<double> t{1.1e12};
    const auto s = evolve_series(spec, StateVector::product(labels, Basis::Flavor, 3), t)[0];
    EXPECT_NEAR(entanglement_entropy(s, 2), 0.222927229, 2e-6);
    EXPECT_NEAR(negativity(s, 0, 2), 0.3720986223, 2e-6);
    EXPECT_NEAR(negativity(s, 1, 2), 0.0842779937, 2e-6);
    // Witnesses do not depend on the basis the state is expressed in.
    const auto m = change_basis(s, Basis::Mass, spec.pmns);
    EXPECT_NEAR(entanglement_entropy(m, 2), entanglement_entropy(s, 2), 1e-12);
    EXPECT_NEAR(negativity(m, 0, 2), negativity(s, 0, 2), 1e-12);
}

TEST(Witness, ReportLayout) {
    std::mt19937_64 rng(10);
    const auto r = witness_report(random_state(2, 4, rng), 3.0);
    EXPECT_EQ(r.time, 3.0);
    EXPECT_EQ(r.entropies.size(), 4u);
    ASSERT_EQ(r.negativities.size(), 6u);
    EXPECT_EQ(r.negativities[0].i, 0);
    EXPECT_EQ(r.negativities[0].j, 1);
    EXPECT_EQ(r.negativities[5].i, 2);
    EXPECT_EQ(r.negativities[5].j, 3);
}

TEST(Frequency, PureSine) {
    const int n = 512;
    const double dt = 0.01, f = 7.0 / (n * dt);
    std::vector<double> t(n), v(n);
    for (int k = 0; k < n; ++k) {
        t[k] = k * dt;
        v[k] = std::sin(2 * std::numbers::pi * f * t[k]);
    }
    EXPECT_NEAR(dominant_frequency(t, v), f, 1.0 / (n * dt));
}

TEST(Frequency, ConstantIsZero) {
    std::vector<double> t(64), v(64, 0.7);
    for (int k = 0; k < 64; ++k) t[k] = k;
    EXPECT_EQ(dominant_frequency(t, v), 0.0);
}

TEST(Frequency, RejectsBadSampling) {
    std::vector<double> t(32), v(32, 0.0);
    for (int k = 0; k < 32; ++k) t[k] = k * k;
    EXPECT_THROW(dominant_frequency(t, v), InvalidArgument);
    std::vector<double> few(4, 0.0);
    EXPECT_THROW(dominant_frequency(few, few), InvalidArgument);
}
