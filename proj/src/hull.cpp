#include "opconvex/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opconvex/errors.hpp"

namespace opconvex {

std::string to_string(Membership m) {
    switch (m) {
        case Membership::Member: return "member";
        case Membership::NonMember: return "non-member";
        case Membership::Boundary: return "boundary";
    }
    return "boundary";
}

namespace {

constexpr double kWitnessMinEig = 1e-10;
constexpr double kWitnessResidual = 1e-8;

void require_same_dim(const HermitianMatrix& t, const HermitianMatrix& x) {
    if (t.dim() != x.dim()) {
        std::ostringstream os;
        os << "dimension mismatch: T is " << t.dim() << "x" << t.dim() << ", X is " << x.dim() << "x"
           << x.dim();
        throw DimensionError(os.str());
    }
}

struct Residuals {
    double partition = 0.0;
    double reconstruction = 0.0;
    double combined() const { return std::hypot(partition, reconstruction); }
};

Residuals affine_residuals(const std::vector<ComplexMatrix>& blocks, const std::vector<double>& lambda,
                           const ComplexMatrix& x) {
    const auto n = x.rows();
    ComplexMatrix sum = -ComplexMatrix::Identity(n, n);
    ComplexMatrix weighted = -x;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        sum += blocks[i];
        weighted += lambda[i] * blocks[i];
    }
    return {sum.norm(), weighted.norm()};
}

// Euclidean projection onto {sum E_i = I, sum mu_i E_i = Y}. With the
// multipliers E_i += A + mu_i B, (A, B) solve the 2x2 system with Gram
// matrix [[n, sum mu], [sum mu, sum mu^2]]; the caller centres mu so the
// system is diagonal.
void project_affine(std::vector<ComplexMatrix>& blocks, const std::vector<double>& mu, double mu_sq,
                    const ComplexMatrix& y) {
    const auto n = y.rows();
    ComplexMatrix r1 = ComplexMatrix::Identity(n, n);
    ComplexMatrix r2 = y;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        r1 -= blocks[i];
        r2 -= mu[i] * blocks[i];
    }
    const ComplexMatrix a = r1 / static_cast<double>(blocks.size());
    const ComplexMatrix b = r2 / mu_sq;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        blocks[i] += a + mu[i] * b;
    }
}

void project_psd(std::vector<ComplexMatrix>& blocks) {
    for (auto& e : blocks) {
        e = eig_hermitian(HermitianMatrix::symmetrized(e))
                .map([](double v) { return v > 0.0 ? v : 0.0; })
                .matrix();
    }
}

HullWitness to_witness(const std::vector<double>& lambda, const std::vector<ComplexMatrix>& blocks) {
    HullWitness w;
    w.eigenvalues = lambda;
    for (const auto& e : blocks) {
        w.blocks.push_back(HermitianMatrix::symmetrized(e));
    }
    return w;
}

}  // namespace

WitnessCheck check_witness(const HullWitness& w, const HermitianMatrix& x) {
    WitnessCheck c;
    if (w.blocks.size() != w.eigenvalues.size() || w.blocks.empty()) {
        return c;
    }
    std::vector<ComplexMatrix> raw;
    c.min_block_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& e : w.blocks) {
        if (e.dim() != x.dim()) {
            return c;
        }
        raw.push_back(e.matrix());
        c.min_block_eigenvalue = std::min(c.min_block_eigenvalue, min_eigenvalue(e));
    }
    const auto r = affine_residuals(raw, w.eigenvalues, x.matrix());
    c.partition_residual = r.partition;
    c.reconstruction_residual = r.reconstruction;
    c.valid = c.min_block_eigenvalue >= -kWitnessMinEig && r.partition <= kWitnessResidual &&
              r.reconstruction <= kWitnessResidual;
    return c;
}

OracleResult spectral_interval_oracle(const HermitianMatrix& t, const HermitianMatrix& x,
                                      const ToleranceConfig& tol) {
    require_same_dim(t, x);
    const auto st = eig_hermitian(t);
    const auto sx = eig_hermitian(x);
    OracleResult r;
    r.scale = std::max(st.max_abs(), sx.max_abs());
    r.margin = std::min(sx.min() - st.min(), st.max() - sx.max());
    r.inside = r.margin >= -tol.psd_threshold(r.scale);
    return r;
}

HullWitness two_point_witness(const HermitianMatrix& t, const HermitianMatrix& x,
                              const ToleranceConfig& tol) {
    require_same_dim(t, x);
    const auto oracle = spectral_interval_oracle(t, x, tol);
    if (!oracle.inside) {
        throw InvalidInput("two_point_witness: X lies outside the spectral interval of T");
    }
    const auto st = eig_hermitian(t);
    const int n = t.dim();
    const double lo = st.min();
    const double hi = st.max();
    HullWitness w;
    w.eigenvalues = st.eigenvalues;
    w.blocks.assign(static_cast<std::size_t>(n), HermitianMatrix::zero(n));
    if (hi - lo <= tol.psd_threshold(st.max_abs())) {
        if (spectral_norm(x - HermitianMatrix::scalar(n, lo)) > tol.psd_threshold(oracle.scale)) {
            throw InvalidInput("two_point_witness: T is scalar and X differs from it");
        }
        w.blocks.front() = HermitianMatrix::identity(n);
        return w;
    }
    const double width = hi - lo;
    w.blocks.front() = (1.0 / width) * (HermitianMatrix::scalar(n, hi) - x);
    w.blocks.back() = (1.0 / width) * (x - HermitianMatrix::scalar(n, lo));
    return w;
}

FeasibilityResult hull_membership(const HermitianMatrix& t, const HermitianMatrix& x,
                                  const ToleranceConfig& tol, int iteration_cap) {
    require_same_dim(t, x);
    const int n = t.dim();
    const auto st = eig_hermitian(t);
    const auto sx = eig_hermitian(x);
    const double scale = std::max(st.max_abs(), sx.max_abs());
    const double band = tol.psd_threshold(scale);
    FeasibilityResult result;

    // Non-membership is certified by an eigenvector of X whose Rayleigh
    // quotient leaves [lambda_min(T), lambda_max(T)].
    const double below = st.min() - sx.min();
    const double above = sx.max() - st.max();
    if (std::max(below, above) > band) {
        const int idx = below >= above ? 0 : n - 1;
        SeparatingCertificate cert;
        cert.vector = sx.unitary.col(idx);
        cert.quadratic_value = sx.eigenvalues[static_cast<std::size_t>(idx)];
        cert.margin = std::max(below, above);
        result.status = Membership::NonMember;
        result.certificate = std::move(cert);
        result.method = "certificate";
        return result;
    }

    const double mean =
        std::accumulate(st.eigenvalues.begin(), st.eigenvalues.end(), 0.0) / static_cast<double>(n);
    std::vector<double> mu;
    double mu_sq = 0.0;
    for (double l : st.eigenvalues) {
        mu.push_back(l - mean);
        mu_sq += (l - mean) * (l - mean);
    }

    if (st.max() - st.min() <= band) {
        // C*-CH(lambda I) = {lambda I}.
        HullWitness w;
        w.eigenvalues = st.eigenvalues;
        w.blocks.assign(static_cast<std::size_t>(n),
                        HermitianMatrix::scalar(n, 1.0 / static_cast<double>(n)));
        const auto check = check_witness(w, x);
        result.method = "degenerate";
        result.residual = std::hypot(check.partition_residual, check.reconstruction_residual);
        if (check.valid) {
            result.status = Membership::Member;
            result.witness = std::move(w);
        }
        return result;
    }

    // Dykstra's alternating projections in the centred variables
    // sum mu_i E_i = X - mean I.
    const ComplexMatrix y = x.matrix() - mean * ComplexMatrix::Identity(n, n);
    const double threshold = tol.solver_threshold(scale);
    std::vector<ComplexMatrix> iterate(static_cast<std::size_t>(n),
                                       ComplexMatrix::Identity(n, n) / static_cast<double>(n));
    std::vector<ComplexMatrix> p(static_cast<std::size_t>(n), ComplexMatrix::Zero(n, n));
    std::vector<ComplexMatrix> q = p;
    std::vector<ComplexMatrix> aff(static_cast<std::size_t>(n));
    for (int it = 1; it <= iteration_cap; ++it) {
        for (std::size_t i = 0; i < iterate.size(); ++i) {
            aff[i] = iterate[i] + p[i];
        }
        project_affine(aff, mu, mu_sq, y);
        for (std::size_t i = 0; i < iterate.size(); ++i) {
            p[i] += iterate[i] - aff[i];
            iterate[i] = aff[i] + q[i];
        }
        project_psd(iterate);
        for (std::size_t i = 0; i < iterate.size(); ++i) {
            q[i] += aff[i] - iterate[i];
        }

        const auto res = affine_residuals(iterate, st.eigenvalues, x.matrix());
        result.iterations = it;
        result.residual = res.combined();
        if (result.residual >= threshold) {
            continue;
        }
        // Polish: the affine projection of a PSD iterate satisfies the
        // equalities exactly and is PSD up to the residual.
        auto polished = iterate;
        project_affine(polished, mu, mu_sq, y);
        for (const auto& candidate : {polished, iterate}) {
            auto w = to_witness(st.eigenvalues, candidate);
            if (check_witness(w, x).valid) {
                result.status = Membership::Member;
                result.witness = std::move(w);
                result.method = "dykstra";
                return result;
            }
        }
    }

    // Iteration cap reached: try the explicit witness built from the
    // extreme eigenvalues of T.
    {
        auto w = two_point_witness(t, x, tol);
        if (check_witness(w, x).valid) {
            result.status = Membership::Member;
            result.witness = std::move(w);
            result.method = "two-point";
            return result;
        }
    }
    result.status = Membership::Boundary;
    result.method = "dykstra";
    return result;
}

HermitianMatrix sample_hull_member(const HermitianMatrix& t, const CoefficientTuple& c,
                                   const ToleranceConfig& tol) {
    if (c.dim() != t.dim()) {
        throw DimensionError("sample_hull_member: tuple dimension does not match T");
    }
    const auto check = validate_tuple(c, tol);
    if (!check.valid) {
        std::ostringstream os;
        os << "sample_hull_member: invalid coefficient tuple (defect " << check.defect << ")";
        throw InvalidInput(os.str());
    }
    return apply_combination(c, std::vector<HermitianMatrix>(static_cast<std::size_t>(c.size()), t));
}

FeasibilityResult lch_membership(const HermitianMatrix& t, const HermitianMatrix& x,
                                 const ToleranceConfig& tol) {
    require_same_dim(t, x);
    require_strictly_positive(t, tol, "lch_membership: T");
    require_strictly_positive(x, tol, "lch_membership: X");
    return hull_membership(matrix_inverse(t, tol), matrix_inverse(x, tol), tol);
}

std::vector<double> hull_of_function(const HermitianMatrix& t, const ScalarFunctionSpec& f,
                                     const ToleranceConfig& tol) {
    auto values = eig_hermitian(apply_function(f, t, tol)).eigenvalues;
    std::sort(values.begin(), values.end());
    return values;
}

FeasibilityResult hull_of_function_membership(const HermitianMatrix& t, const ScalarFunctionSpec& f,
                                              const HermitianMatrix& x, const ToleranceConfig& tol) {
    return hull_membership(apply_function(f, t, tol), x, tol);
}

HarmonicSumBounds harmonic_sum_bounds(const HermitianMatrix& t1, const HermitianMatrix& t2) {
    const auto s1 = eig_hermitian(t1);
    const auto s2 = eig_hermitian(t2);
    if (s1.min() <= 0.0 || s2.min() <= 0.0) {
        throw InvalidInput("harmonic_sum_bounds: T1 and T2 must be strictly positive");
    }
    return {1.0 / (1.0 / s1.min() + 1.0 / s2.min()), 1.0 / (1.0 / s1.max() + 1.0 / s2.max())};
}

std::pair<HermitianMatrix, HermitianMatrix> harmonic_sum_decomposition(const HermitianMatrix& t1,
                                                                       const HermitianMatrix& t2,
                                                                       const HermitianMatrix& z,
                                                                       const ToleranceConfig& tol) {
    require_same_dim(t1, z);
    require_same_dim(t2, z);
    require_strictly_positive(z, tol, "harmonic_sum_decomposition: Z");
    const auto s1 = eig_hermitian(t1);
    const auto s2 = eig_hermitian(t2);
    // X^{-1} ranges over [1/b1, 1/a1], Y^{-1} over [1/b2, 1/a2]; split
    // Z^{-1} - (1/b1 + 1/b2) I proportionally to the two widths.
    const double alpha = 1.0 / s1.max();
    const double beta = 1.0 / s1.min();
    const double gamma = 1.0 / s2.max();
    const double delta = 1.0 / s2.min();
    const double total = (beta - alpha) + (delta - gamma);
    const double theta = total > 0.0 ? (beta - alpha) / total : 0.5;
    const int n = z.dim();
    const auto excess = matrix_inverse(z, tol) - HermitianMatrix::scalar(n, alpha + gamma);
    const auto x_inv = HermitianMatrix::scalar(n, alpha) + theta * excess;
    const auto y_inv = HermitianMatrix::scalar(n, gamma) + (1.0 - theta) * excess;
    return {matrix_inverse(x_inv, tol), matrix_inverse(y_inv, tol)};
}

TestVerdict harmonic_sum_closure_test(const HermitianMatrix& t1, const HermitianMatrix& t2, int samples,
                                      std::uint64_t seed, int m, const ToleranceConfig& tol) {
    require_same_dim(t1, t2);
    require_strictly_positive(t1, tol, "harmonic_sum_closure_test: T1");
    require_strictly_positive(t2, tol, "harmonic_sum_closure_test: T2");
    const auto bounds = harmonic_sum_bounds(t1, t2);
    const int n = t1.dim();
    SuiteOptions opt;
    opt.dim = n;
    opt.m = m;
    opt.samples = samples;
    opt.seed = seed;
    opt.tol = tol;
    opt.rounds = 1;
    return run_sampling_suite(opt, [&](int, Rng& rng) {
        std::vector<HermitianMatrix> zs;
        for (int i = 0; i < m; ++i) {
            const auto copies = [&](const HermitianMatrix& t) {
                return std::vector<HermitianMatrix>(static_cast<std::size_t>(m), t);
            };
            const auto xk = apply_log_combination(sample_tuple(n, m, rng()), copies(t1), tol);
            const auto yl = apply_log_combination(sample_tuple(n, m, rng()), copies(t2), tol);
            zs.push_back(matrix_inverse(matrix_inverse(xk, tol) + matrix_inverse(yl, tol), tol));
        }
        const auto c = sample_tuple(n, m, rng());
        const auto combined = apply_log_combination(c, zs, tol);
        Counterexample ce;
        ce.kind = "harmonic-sum";
        for (const auto& z : zs) {
            ce.matrices["Z"].push_back(z.matrix());
        }
        ce.matrices["C"] = c.coeffs();
        ce.params["bounds"] = {bounds.lower, bounds.upper};
        const double low_margin = min_eigenvalue(combined - HermitianMatrix::scalar(n, bounds.lower));
        const double high_margin = min_eigenvalue(HermitianMatrix::scalar(n, bounds.upper) - combined);
        if (low_margin <= high_margin) {
            return make_inequality_instance(HermitianMatrix::scalar(n, bounds.lower), combined, std::move(ce));
        }
        return make_inequality_instance(combined, HermitianMatrix::scalar(n, bounds.upper), std::move(ce));
    });
}

}  // namespace opconvex
