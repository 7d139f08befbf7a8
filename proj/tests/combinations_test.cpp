#include <gtest/gtest.h>

#include "opconvex/combinations.hpp"
#include "opconvex/errors.hpp"
#include "opconvex/random.hpp"
#include "test_support.hpp"

namespace {

using namespace opconvex;
using opconvex::testkit::identity;
using opconvex::testkit::random_hermitian;
using opconvex::testkit::random_positive;

constexpr Complex kI{0.0, 1.0};

double frob(const ComplexMatrix& m) { return m.norm(); }

// Independent tuple check: Sum C_i^* C_i - I measured with the reference SVD.
double tuple_defect(const CoefficientTuple& t) {
    ComplexMatrix g = ComplexMatrix::Zero(t.dim(), t.dim());
    for (const auto& c : t.coeffs()) g += c.adjoint() * c;
    return testkit::largest_singular_value(g - identity(t.dim()));
}

TEST(ValidateTuple, ScalarWeights) {
    const auto t = CoefficientTuple::scalar_weights(3, {0.3, 0.7});
    const auto r = validate_tuple(t);
    EXPECT_TRUE(r.valid);
    EXPECT_LE(r.defect, 1e-15);
}

TEST(ValidateTuple, SingleUnitary) {
    Rng rng(4);
    EXPECT_TRUE(validate_tuple(CoefficientTuple::single(haar_unitary(rng, 3))).valid);
}

TEST(ValidateTuple, TwoIdentitiesFail) {
    const CoefficientTuple t({identity(2), identity(2)});
    const auto r = validate_tuple(t);
    EXPECT_FALSE(r.valid);
    EXPECT_NEAR(r.defect, 1.0, 1e-15);
}

TEST(CoefficientTuple, ShapeErrors) {
    EXPECT_THROW(CoefficientTuple(std::vector<ComplexMatrix>{}), DimensionError);
    EXPECT_THROW(CoefficientTuple({identity(2), identity(3)}), DimensionError);
    EXPECT_THROW(CoefficientTuple::scalar_weights(2, {-0.5, 1.5}), InvalidInput);
}

TEST(SampleTuple, Valid) {
    const auto t = sample_tuple(3, 4, 1);
    EXPECT_EQ(t.size(), 4);
    EXPECT_TRUE(validate_tuple(t).valid);
    EXPECT_LE(tuple_defect(t), 1e-12);
}

TEST(SampleTuple, SingleIsUnitary) {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto t = sample_tuple(2, 1, k);
        EXPECT_NEAR(std::abs(t[0].determinant()), 1.0, 1e-10);
    }
}

TEST(SampleTuple, Deterministic) {
    const auto a = sample_tuple(3, 2, 99);
    const auto b = sample_tuple(3, 2, 99);
    for (int i = 0; i < 2; ++i) EXPECT_TRUE(a[i] == b[i]);
}

TEST(SampleTuple, DefectProperty) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 6);
        const int m = 1 + static_cast<int>((seed / 6) % 4);
        ASSERT_LE(tuple_defect(sample_tuple(dim, m, seed)), 1e-12) << "seed " << seed;
    }
}

TEST(ApplyCombination, ScalarWeightsGiveConvexCombinationProperty) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 1 + trial % 5;
        const double lambda = u(rng);
        const auto x = random_hermitian(rng, dim);
        const auto y = random_hermitian(rng, dim);
        const auto r = apply_combination(CoefficientTuple::scalar_weights(dim, {lambda, 1.0 - lambda}), {x, y});
        const ComplexMatrix expected = lambda * x.matrix() + (1.0 - lambda) * y.matrix();
        ASSERT_LT(frob(r.matrix() - expected), 1e-12 * std::max(1.0, frob(expected))) << "trial " << trial;
    }
}

TEST(ApplyCombination, SingleUnitaryIsConjugation) {
    Rng rng(5);
    std::mt19937_64 g(5);
    const ComplexMatrix u = haar_unitary(rng, 3);
    const auto x = random_hermitian(g, 3);
    const auto r = apply_combination(CoefficientTuple::single(u), {x});
    EXPECT_LT(frob(r.matrix() - u.adjoint() * x.matrix() * u), 1e-12);
}

TEST(ApplyCombination, UnitalOnIdentities) {
    const auto t = sample_tuple(4, 3, 12);
    const auto id = HermitianMatrix::identity(4);
    const auto r = apply_combination(t, {id, id, id});
    EXPECT_LT(frob(r.matrix() - identity(4)), 1e-12);
}

TEST(ApplyCombination, LengthMismatch) {
    const auto t = sample_tuple(2, 2, 1);
    EXPECT_THROW(apply_combination(t, {HermitianMatrix::identity(2)}), DimensionError);
    EXPECT_THROW(apply_combination(t, {HermitianMatrix::identity(2), HermitianMatrix::identity(3)}),
                 DimensionError);
}

TEST(ApplyCombination, OperatorTuplesComponentwise) {
    std::mt19937_64 rng(7);
    const auto t = sample_tuple(2, 2, 8);
    const OperatorTuple a({random_hermitian(rng, 2), random_hermitian(rng, 2)});
    const OperatorTuple b({random_hermitian(rng, 2), random_hermitian(rng, 2)});
    const auto r = apply_combination(t, std::vector<OperatorTuple>{a, b});
    ASSERT_EQ(r.size(), 2);
    for (int j = 0; j < 2; ++j) {
        const ComplexMatrix expected =
            t[0].adjoint() * a[j].matrix() * t[0] + t[1].adjoint() * b[j].matrix() * t[1];
        EXPECT_LT(frob(r[j].matrix() - expected), 1e-12);
    }
}

TEST(ApplyLogCombination, ScalarMultiplesOfIdentity) {
    const auto t = sample_tuple(3, 3, 2);
    const auto x = HermitianMatrix::scalar(3, 2.5);
    EXPECT_LT(frob(apply_log_combination(t, {x, x, x}).matrix() - 2.5 * identity(3)), 1e-12);
}

TEST(ApplyLogCombination, SingleUnitaryIsConjugation) {
    Rng rng(6);
    std::mt19937_64 g(6);
    const ComplexMatrix u = haar_unitary(rng, 3);
    const auto x = random_positive(g, 3);
    const auto r = apply_log_combination(CoefficientTuple::single(u), {x});
    EXPECT_LT(frob(r.matrix() - u.adjoint() * x.matrix() * u), 1e-10);
}

TEST(ApplyLogCombination, CommutingDiagonalsGiveHarmonicMean) {
    const double w = 0.25;
    const auto r = apply_log_combination(CoefficientTuple::scalar_weights(2, {w, 1.0 - w}),
                                         {HermitianMatrix::diagonal({1.0, 2.0}), HermitianMatrix::diagonal({4.0, 8.0})});
    auto harmonic = [&](double a, double b) { return 1.0 / (w / a + (1.0 - w) / b); };
    EXPECT_NEAR(r(0, 0).real(), harmonic(1.0, 4.0), 1e-12);
    EXPECT_NEAR(r(1, 1).real(), harmonic(2.0, 8.0), 1e-12);
}

TEST(ApplyLogCombination, RejectsNonPositive) {
    const auto t = CoefficientTuple::scalar_weights(2, {0.5, 0.5});
    EXPECT_THROW(apply_log_combination(t, {HermitianMatrix::identity(2), HermitianMatrix::diagonal({1.0, 0.0})}),
                 InvalidInput);
}

TEST(ApplyLogCombination, InverseUnwindingAndHarmonicArithmeticProperty) {
    std::mt19937_64 rng(41);
    const ToleranceConfig tol;
    for (int trial = 0; trial < 150; ++trial) {
        const int dim = 1 + trial % 4;
        const int m = 1 + trial % 3;
        const auto t = sample_tuple(dim, m, 1000 + static_cast<std::uint64_t>(trial));
        std::vector<HermitianMatrix> xs;
        std::vector<HermitianMatrix> inverses;
        for (int i = 0; i < m; ++i) {
            xs.push_back(random_positive(rng, dim));
            inverses.push_back(HermitianMatrix::symmetrized(xs.back().matrix().inverse()));
        }
        const auto h = apply_log_combination(t, xs);
        const auto a = apply_combination(t, xs);
        const ComplexMatrix lhs = h.matrix().inverse();
        const auto rhs = apply_combination(t, inverses);
        ASSERT_LT(frob(lhs - rhs.matrix()), 1e-9 * std::max(1.0, rhs.frobenius_norm())) << "trial " << trial;
        // Operator harmonic-arithmetic mean inequality.
        const double scale = testkit::reference_eigenvalues(a.matrix()).cwiseAbs().maxCoeff();
        ASSERT_GE(testkit::reference_min_eigenvalue(a.matrix() - h.matrix()), -tol.psd_threshold(scale))
            << "trial " << trial;
    }
}

TEST(CompleteContraction, HalfIdentity) {
    const auto t = complete_contraction(std::sqrt(0.5) * identity(2));
    EXPECT_LT(frob(t[1] - std::sqrt(0.5) * identity(2)), 1e-14);
}

TEST(CompleteContraction, Zero) {
    const auto t = complete_contraction(ComplexMatrix::Zero(3, 3));
    EXPECT_LT(frob(t[1] - identity(3)), 1e-14);
}

TEST(CompleteContraction, RandomContractionProperty) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + trial % 5;
        ComplexMatrix c = testkit::gaussian_matrix(rng, dim, dim);
        c /= testkit::largest_singular_value(c) * 1.0001;
        const auto t = complete_contraction(c);
        EXPECT_EQ(t.size(), 2);
        ASSERT_LE(tuple_defect(t), 1e-12) << "trial " << trial;
    }
}

TEST(CompleteContraction, RejectsNonContraction) {
    EXPECT_THROW(complete_contraction(1.1 * identity(2)), InvalidInput);
}

TEST(SplitSumWitness, EqualIdentities) {
    const auto id = HermitianMatrix::identity(2);
    const auto w = split_sum_witness(id, id);
    EXPECT_LT(frob(w.c1 - std::sqrt(0.5) * identity(2)), 1e-14);
    EXPECT_LT(frob(w.c2 - std::sqrt(0.5) * identity(2)), 1e-14);
}

TEST(SplitSumWitness, NearlySingularSummands) {
    const double eps = 1e-6;
    const auto x = HermitianMatrix::diagonal({1.0 + eps, eps});
    const auto y = HermitianMatrix::diagonal({eps, 1.0 + eps});
    const auto w = split_sum_witness(x, y);
    const ComplexMatrix s = (x + y).matrix();
    EXPECT_LT(frob(w.c1.adjoint() * s * w.c1 - x.matrix()), 1e-9);
    EXPECT_LT(frob(w.c2.adjoint() * s * w.c2 - y.matrix()), 1e-9);
}

TEST(SplitSumWitness, ContractionsProperty) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + trial % 4;
        const auto x = random_positive(rng, dim, 0.0, 3.0);
        const auto y = random_positive(rng, dim, 0.1, 3.0);
        const auto w = split_sum_witness(x, y);
        const ComplexMatrix s = (x + y).matrix();
        ASSERT_LT(frob(w.c1.adjoint() * s * w.c1 - x.matrix()), 1e-9);
        ASSERT_LT(frob(w.c2.adjoint() * s * w.c2 - y.matrix()), 1e-9);
        ASSERT_LT(frob(w.c1 * w.c1.adjoint() + w.c2 * w.c2.adjoint() - identity(dim)), 1e-9);
        ASSERT_LE(testkit::largest_singular_value(w.c1), 1.0 + 1e-10);
        ASSERT_LE(testkit::largest_singular_value(w.c2), 1.0 + 1e-10);
    }
}

TEST(SplitSumWitness, AdjointGramIsIdentityOnlyForCommutingSummands) {
    const auto x = HermitianMatrix::diagonal({1.0, 3.0});
    const auto y = HermitianMatrix::diagonal({2.0, 0.5});
    const auto w = split_sum_witness(x, y);
    EXPECT_LT(frob(w.c1.adjoint() * w.c1 + w.c2.adjoint() * w.c2 - identity(2)), 1e-12);

    Eigen::MatrixXd r(2, 2);
    r << 1.0, 1.0, 1.0, 1.0;
    const auto p = HermitianMatrix::from_real(r);
    const auto q = HermitianMatrix::diagonal({1.0, 0.0});
    const auto v = split_sum_witness(p, q);
    EXPECT_GT(frob(v.c1.adjoint() * v.c1 + v.c2.adjoint() * v.c2 - identity(2)), 1e-3);
    EXPECT_LT(frob(v.c1 * v.c1.adjoint() + v.c2 * v.c2.adjoint() - identity(2)), 1e-12);
}

TEST(SplitSumWitness, SingularSum) {
    const auto x = HermitianMatrix::diagonal({1.0, 0.0});
    EXPECT_THROW(split_sum_witness(x, x), InvalidInput);
}

TEST(EigenvalueScalarization, DiagonalMinimum) {
    const auto x = HermitianMatrix::diagonal({5.0, 2.0});
    const auto t = eigenvalue_scalarization_witness(x, 1);
    const auto r = apply_combination(t, std::vector<HermitianMatrix>(static_cast<std::size_t>(t.size()), x));
    EXPECT_LT(frob(r.matrix() - 2.0 * identity(2)), 1e-12);
}

TEST(EigenvalueScalarization, EveryIndexOnRandomMatrix) {
    std::mt19937_64 rng(71);
    const auto x = random_hermitian(rng, 3);
    const auto ref = testkit::reference_eigenvalues(x.matrix());
    for (int k = 1; k <= 3; ++k) {
        const auto t = eigenvalue_scalarization_witness(x, k);
        EXPECT_LE(tuple_defect(t), 1e-12);
        const auto r = apply_combination(t, std::vector<HermitianMatrix>(static_cast<std::size_t>(t.size()), x));
        EXPECT_LT(frob(r.matrix() - ref(k - 1) * identity(3)), 1e-10) << "k " << k;
    }
    EXPECT_THROW(eigenvalue_scalarization_witness(x, 0), InvalidInput);
    EXPECT_THROW(eigenvalue_scalarization_witness(x, 4), InvalidInput);
}

TEST(PositiveFamily, IdentityMap) {
    std::mt19937_64 rng(81);
    const auto x = random_hermitian(rng, 3);
    const UnitalMapFamily fam({PositiveMap{{identity(3)}, false}});
    const auto r = positive_family_combination(fam, {x});
    EXPECT_LT(frob(r.value.matrix() - x.matrix()), 1e-12);
    EXPECT_LT(frob(r.reproduce().matrix() - x.matrix()), 1e-9);
    EXPECT_TRUE(validate_tuple(r.equivalent).valid);
}

TEST(PositiveFamily, TupleMapsMatchApplyCombination) {
    std::mt19937_64 rng(82);
    const auto t = sample_tuple(3, 3, 5);
    const auto fam = UnitalMapFamily::from_tuple(t);
    std::vector<HermitianMatrix> xs{random_hermitian(rng, 3), random_hermitian(rng, 3), random_hermitian(rng, 3)};
    const auto r = positive_family_combination(fam, xs);
    EXPECT_LT(frob(r.value.matrix() - apply_combination(t, xs).matrix()), 1e-12);
    EXPECT_LT(frob(r.reproduce().matrix() - r.value.matrix()), 1e-9);
}

TEST(PositiveFamily, TransposeMap) {
    ComplexMatrix m(2, 2);
    m << 1.0, kI, -kI, 1.0;
    const UnitalMapFamily fam({PositiveMap{{identity(2)}, true}});
    const auto r = positive_family_combination(fam, {HermitianMatrix(m)});
    ComplexMatrix expected(2, 2);
    expected << 1.0, -kI, kI, 1.0;
    EXPECT_LT(frob(r.value.matrix() - expected), 1e-14);
    const auto ev = testkit::reference_eigenvalues(r.value.matrix());
    EXPECT_NEAR(ev(0), 0.0, 1e-14);
    EXPECT_NEAR(ev(1), 2.0, 1e-14);
    EXPECT_LT(frob(r.reproduce().matrix() - expected), 1e-9);
}

TEST(PositiveFamily, NonUnitalRejected) {
    const UnitalMapFamily fam({PositiveMap{{2.0 * identity(2)}, false}});
    EXPECT_THROW(positive_family_combination(fam, {HermitianMatrix::identity(2)}), InvalidInput);
}

TEST(PositiveFamily, SampledFamiliesBoundsAndReproductionProperty) {
    std::mt19937_64 rng(83);
    const ToleranceConfig tol;
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 4);
        const int m = 1 + static_cast<int>(seed % 3);
        const auto fam = UnitalMapFamily::sample(dim, m, 2, seed);
        ASSERT_LE(fam.unital_defect(), 1e-12);
        const double a = -1.0;
        const double b = 2.0;
        std::vector<HermitianMatrix> xs;
        for (int i = 0; i < m; ++i) xs.push_back(random_hermitian(rng, dim, a, b));
        const auto r = positive_family_combination(fam, xs);
        ASSERT_LT(HermitianMatrix::hermitian_defect(r.value.matrix()), 1e-14);
        ASSERT_LT(frob(r.reproduce().matrix() - r.value.matrix()), 1e-9) << "seed " << seed;
        ASSERT_TRUE(validate_tuple(r.equivalent).valid) << "seed " << seed;
        const auto ev = testkit::reference_eigenvalues(r.value.matrix());
        ASSERT_GE(ev(0), a - tol.psd_threshold(2.0));
        ASSERT_LE(ev(dim - 1), b + tol.psd_threshold(2.0));
    }
}

}  // namespace
