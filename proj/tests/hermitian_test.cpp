#include <gtest/gtest.h>

#include <cmath>

#include "opconvex/errors.hpp"
#include "opconvex/function.hpp"
#include "opconvex/hermitian.hpp"
#include "test_support.hpp"

namespace {

using namespace opconvex;
using opconvex::testkit::random_hermitian;
using opconvex::testkit::random_positive;
using opconvex::testkit::reference_eigenvalues;

constexpr Complex kI{0.0, 1.0};

double frob(const ComplexMatrix& m) { return m.norm(); }

TEST(HermitianMatrix, RejectsNonHermitianInput) {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 1.0;
    EXPECT_THROW(HermitianMatrix{m}, InvalidInput);
    EXPECT_THROW(HermitianMatrix{ComplexMatrix(2, 3)}, DimensionError);
    EXPECT_THROW(HermitianMatrix{ComplexMatrix(0, 0)}, DimensionError);
}

TEST(HermitianMatrix, AcceptsDefectBelowConstructionTolerance) {
    ComplexMatrix m(2, 2);
    m << 1.0, Complex(0.5, 1e-14), Complex(0.5, 0.0), 2.0;
    const HermitianMatrix h(m);
    EXPECT_LT(HermitianMatrix::hermitian_defect(h.matrix()), 1e-16);
}

TEST(HermitianMatrix, RealSymmetricInputEmbedsWithZeroImaginaryPart) {
    Eigen::MatrixXd r(2, 2);
    r << 1.0, 2.0, 2.0, -1.0;
    const auto h = HermitianMatrix::from_real(r);
    EXPECT_EQ(h(0, 1), Complex(2.0, 0.0));
    EXPECT_EQ(h(1, 1).imag(), 0.0);
}

TEST(EigHermitian, DiagonalInput) {
    const auto d = eig_hermitian(HermitianMatrix::diagonal({3.0, 1.0}));
    ASSERT_EQ(d.eigenvalues.size(), 2u);
    EXPECT_NEAR(d.eigenvalues[0], 1.0, 1e-15);
    EXPECT_NEAR(d.eigenvalues[1], 3.0, 1e-15);
    // The eigenvector for 1 is e2 and for 3 is e1, up to phase.
    EXPECT_NEAR(std::abs(d.unitary(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(d.unitary(0, 1)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(d.unitary(0, 0)), 0.0, 1e-15);
}

TEST(EigHermitian, PauliX) {
    Eigen::MatrixXd r(2, 2);
    r << 0.0, 1.0, 1.0, 0.0;
    const auto d = eig_hermitian(HermitianMatrix::from_real(r));
    EXPECT_NEAR(d.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(d.eigenvalues[1], 1.0, 1e-14);
}

TEST(EigHermitian, OneByOne) {
    const auto d = eig_hermitian(HermitianMatrix::scalar(1, -2.5));
    EXPECT_EQ(d.eigenvalues[0], -2.5);
    EXPECT_NEAR(std::abs(d.unitary(0, 0)), 1.0, 1e-15);
}

TEST(EigHermitian, RandomFiveByFiveReconstructs) {
    std::mt19937_64 rng(5);
    const auto h = random_hermitian(rng, 5);
    const auto d = eig_hermitian(h);
    const ComplexMatrix u = d.unitary;
    Eigen::VectorXd lam(5);
    for (int i = 0; i < 5; ++i) lam(i) = d.eigenvalues[static_cast<std::size_t>(i)];
    const ComplexMatrix rebuilt = u * lam.asDiagonal() * u.adjoint();
    EXPECT_LT(frob(rebuilt - h.matrix()) / frob(h.matrix()), 1e-10);
    EXPECT_LT(testkit::largest_singular_value(u.adjoint() * u - testkit::identity(5)), 1e-10);
    const auto ref = reference_eigenvalues(h.matrix());
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(d.eigenvalues[static_cast<std::size_t>(i)], ref(i), 1e-10);
    }
}

TEST(EigHermitian, DeterministicForIdenticalInput) {
    std::mt19937_64 rng(11);
    const auto h = random_hermitian(rng, 6);
    const auto a = eig_hermitian(h);
    const auto b = eig_hermitian(h);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_TRUE(a.unitary == b.unitary);
}

TEST(EigHermitian, RepeatedEigenvalues) {
    std::mt19937_64 rng(3);
    const auto h = testkit::with_spectrum(rng, {2.0, 2.0, 2.0, -1.0});
    const auto d = eig_hermitian(h);
    EXPECT_NEAR(d.eigenvalues[0], -1.0, 1e-12);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(d.eigenvalues[static_cast<std::size_t>(i)], 2.0, 1e-12);
    EXPECT_LT(frob(d.reconstruct().matrix() - h.matrix()), 1e-11);
}

TEST(EigHermitian, ShiftInvarianceProperty) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 1 + trial % 7;
        const auto a = random_hermitian(rng, dim);
        const double c = shift(rng);
        const auto base = eig_hermitian(a).eigenvalues;
        const auto shifted = eig_hermitian(a + HermitianMatrix::scalar(dim, c)).eigenvalues;
        for (int i = 0; i < dim; ++i) {
            ASSERT_NEAR(shifted[static_cast<std::size_t>(i)], base[static_cast<std::size_t>(i)] + c, 1e-10)
                << "trial " << trial;
        }
    }
}

TEST(EigHermitian, ZeroMatrix) {
    const auto d = eig_hermitian(HermitianMatrix::zero(3));
    for (double v : d.eigenvalues) EXPECT_EQ(v, 0.0);
}

TEST(LoewnerLeq, IdentityBelowTwiceIdentity) {
    const auto r = loewner_leq(HermitianMatrix::identity(3), HermitianMatrix::scalar(3, 2.0));
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.margin, 1.0, 1e-14);
}

TEST(LoewnerLeq, IndefiniteDifferenceFailsBothWays) {
    const auto a = HermitianMatrix::diagonal({2.0, 1.0});
    const auto b = HermitianMatrix::diagonal({1.0, 2.0});
    EXPECT_FALSE(loewner_leq(a, b).holds);
    EXPECT_FALSE(loewner_leq(b, a).holds);
    EXPECT_NEAR(loewner_leq(a, b).margin, -1.0, 1e-14);
}

TEST(LoewnerLeq, Reflexive) {
    std::mt19937_64 rng(2);
    const auto a = random_hermitian(rng, 4);
    const auto r = loewner_leq(a, a);
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.margin, 0.0);
}

TEST(LoewnerLeq, DimensionMismatch) {
    EXPECT_THROW(loewner_leq(HermitianMatrix::identity(2), HermitianMatrix::identity(3)), DimensionError);
}

TEST(LoewnerLeq, AntisymmetryUpToToleranceProperty) {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> tiny(0.0, 1e-10);
    const ToleranceConfig tol;
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 1 + trial % 5;
        const auto a = random_hermitian(rng, dim);
        ComplexMatrix p = testkit::gaussian_matrix(rng, dim, dim) * tiny(rng);
        const auto b = a + HermitianMatrix::symmetrized(p);
        const auto ab = loewner_leq(a, b, tol);
        const auto ba = loewner_leq(b, a, tol);
        if (ab.holds && ba.holds) {
            const double scale = std::max(ab.scale, ba.scale);
            EXPECT_LE(spectral_norm(a - b), 2.0 * tol.psd_threshold(scale)) << "trial " << trial;
        }
    }
}

TEST(ApplyFunction, SquareRootOfDiagonal) {
    const auto r = apply_function(parse_function("sqrt"), HermitianMatrix::diagonal({4.0, 9.0}));
    EXPECT_NEAR(r(0, 0).real(), 2.0, 1e-14);
    EXPECT_NEAR(r(1, 1).real(), 3.0, 1e-14);
    EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-14);
}

TEST(ApplyFunction, InverseIdentity) {
    std::mt19937_64 rng(8);
    const auto h = random_positive(rng, 4);
    const auto inv = apply_function(parse_function("t^-1"), h);
    EXPECT_LT(frob(h.matrix() * inv.matrix() - testkit::identity(4)), 1e-10);
}

TEST(ApplyFunction, SquareMatchesUnitaryConjugationOracle) {
    std::mt19937_64 rng(9);
    const ComplexMatrix u = testkit::gram_schmidt_unitary(rng, 4);
    Eigen::VectorXd d(4);
    d << -2.0, 0.5, 1.5, 3.0;
    const auto h = HermitianMatrix::symmetrized(u * d.asDiagonal() * u.adjoint());
    const ComplexMatrix expected = u * d.cwiseAbs2().asDiagonal() * u.adjoint();
    const auto r = apply_function(parse_function("t^2"), h);
    EXPECT_LT(frob(r.matrix() - expected), 1e-10);
}

TEST(ApplyFunction, IdentityFunctionReturnsInputProperty) {
    std::mt19937_64 rng(10);
    const auto f = parse_function("t");
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = random_hermitian(rng, 1 + trial % 6);
        ASSERT_LT(frob(apply_function(f, h).matrix() - h.matrix()), 1e-12 * std::max(1.0, h.frobenius_norm()));
    }
}

TEST(ApplyFunction, DomainViolationNamesEigenvalueAndInterval) {
    try {
        apply_function(parse_function("t^-1"), HermitianMatrix::diagonal({-1.0, 2.0}));
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("-1"), std::string::npos) << msg;
        EXPECT_NE(msg.find("(0"), std::string::npos) << msg;
    }
}

TEST(ApplyFunction, OpenEndpointIsStrict) {
    EXPECT_THROW(apply_function(parse_function("log"), HermitianMatrix::diagonal({0.0, 1.0})), DomainError);
    // Closed endpoints tolerate a tiny negative round-off.
    const auto r = apply_function(parse_function("sqrt"), HermitianMatrix::diagonal({-1e-15, 1.0}));
    EXPECT_NEAR(r(0, 0).real(), 0.0, 1e-7);
}

TEST(GeometricMean, Idempotent) {
    std::mt19937_64 rng(12);
    const auto a = random_positive(rng, 4);
    EXPECT_LT(frob(geometric_mean(a, a).matrix() - a.matrix()), 1e-10);
}

TEST(GeometricMean, IdentityLeftArgumentGivesSquareRoot) {
    std::mt19937_64 rng(13);
    const auto b = random_positive(rng, 3);
    const auto g = geometric_mean(HermitianMatrix::identity(3), b);
    EXPECT_LT(frob(g.matrix() - testkit::reference_sqrt(b.matrix())), 1e-10);
}

TEST(GeometricMean, CommutingCaseIsEntrywise) {
    const auto g = geometric_mean(HermitianMatrix::diagonal({1.0, 4.0}), HermitianMatrix::diagonal({4.0, 1.0}));
    EXPECT_LT(frob(g.matrix() - HermitianMatrix::scalar(2, 2.0).matrix()), 1e-12);
}

TEST(GeometricMean, RejectsNonPositive) {
    EXPECT_THROW(geometric_mean(HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::identity(2)), InvalidInput);
    EXPECT_THROW(geometric_mean(HermitianMatrix::identity(2), HermitianMatrix::diagonal({1.0, -1.0})), InvalidInput);
}

TEST(GeometricMean, SymmetryAndCongruenceProperty) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + trial % 4;
        const auto a = random_positive(rng, dim);
        const auto b = random_positive(rng, dim);
        const auto g = geometric_mean(a, b);
        ASSERT_LT(frob(g.matrix() - geometric_mean(b, a).matrix()), 1e-8) << "trial " << trial;
        EXPECT_TRUE(is_strictly_positive(g));
        ComplexMatrix c = testkit::gaussian_matrix(rng, dim, dim) + 2.0 * testkit::identity(dim);
        const auto lhs = g.congruence(c);
        const auto rhs = geometric_mean(a.congruence(c), b.congruence(c));
        ASSERT_LT(frob(lhs.matrix() - rhs.matrix()) / std::max(1.0, lhs.frobenius_norm()), 1e-8)
            << "trial " << trial;
        // Riccati characterization: G A^-1 G = B.
        const ComplexMatrix riccati = g.matrix() * a.matrix().inverse() * g.matrix();
        ASSERT_LT(frob(riccati - b.matrix()), 1e-8 * std::max(1.0, b.frobenius_norm()));
    }
}

TEST(SampleHermitian, DeterministicForSeed) {
    const auto a = sample_hermitian(3, SpectrumInterval::closed(0.0, 1.0), 7);
    const auto b = sample_hermitian(3, SpectrumInterval::closed(0.0, 1.0), 7);
    EXPECT_TRUE(a.matrix() == b.matrix());
    const auto c = sample_hermitian(3, SpectrumInterval::closed(0.0, 1.0), 8);
    EXPECT_FALSE(a.matrix() == c.matrix());
}

TEST(SampleHermitian, EigenvaluesStrictlyInside) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto h = sample_hermitian(4, SpectrumInterval::closed(1.0, 2.0), seed);
        const auto ev = reference_eigenvalues(h.matrix());
        EXPECT_GT(ev(0), 1.0);
        EXPECT_LT(ev(3), 2.0);
    }
}

TEST(SampleHermitian, NarrowIntervalOneByOne) {
    const double eps = 1e-3;
    const auto h = sample_hermitian(1, SpectrumInterval::closed(5.0, 5.0 + eps), 1);
    EXPECT_EQ(h.dim(), 1);
    EXPECT_GT(h(0, 0).real(), 5.0);
    EXPECT_LT(h(0, 0).real(), 5.0 + eps);
}

TEST(SampleHermitian, UnboundedIntervalNeedsScale) {
    EXPECT_THROW(sample_hermitian(2, SpectrumInterval::real_line(), 1), InvalidInput);
    const auto h = sample_hermitian(2, SpectrumInterval::positive(), 1, 3.0);
    const auto ev = reference_eigenvalues(h.matrix());
    EXPECT_GT(ev(0), 0.0);
}

TEST(Tolerance, ValidateRejectsBadConfigs) {
    ToleranceConfig t;
    EXPECT_NO_THROW(t.validate());
    t.construction_tol = 1e-6;
    t.psd_tol = 1e-8;
    EXPECT_THROW(t.validate(), InvalidInput);
    ToleranceConfig z;
    z.solver_tol = 0.0;
    EXPECT_THROW(z.validate(), InvalidInput);
    EXPECT_EQ(ToleranceConfig::threshold(1e-8, 0.0), 1e-14);
}

TEST(Congruence, TransposeKeepsSpectrum) {
    ComplexMatrix m(2, 2);
    m << 1.0, kI, -kI, 1.0;
    const HermitianMatrix h(m);
    const auto t = h.transpose();
    EXPECT_EQ(t(0, 1), -kI);
    const auto ev = eig_hermitian(t).eigenvalues;
    EXPECT_NEAR(ev[0], 0.0, 1e-14);
    EXPECT_NEAR(ev[1], 2.0, 1e-14);
}

}  // namespace
