#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opconvex/combinations.hpp"
#include "opconvex/counterexample.hpp"
#include "opconvex/function.hpp"
#include "opconvex/hermitian.hpp"
#include "opconvex/random.hpp"

namespace opconvex {

enum class VerdictStatus { NoViolationFound, Violated };

std::string to_string(VerdictStatus s);

/// Outcome of a sampling suite. NoViolationFound is evidence, not proof.
struct TestVerdict {
    VerdictStatus status = VerdictStatus::NoViolationFound;
    int samples_run = 0;
    /// Smallest scaled margin min-eig(rhs - lhs) / scale over all samples.
    double worst_margin = 0.0;
    /// Samples whose margin fell inside (-psd_tol, psd_tol).
    int boundary_count = 0;
    /// Samples redrawn because an intermediate left the function's domain.
    int domain_rejections = 0;
    /// Worst violating sample, present iff status == Violated.
    std::optional<Counterexample> counterexample;

    bool violated() const { return status == VerdictStatus::Violated; }
};

/// One evaluated instance of an operator inequality lhs <= rhs.
struct InequalityInstance {
    HermitianMatrix lhs;
    HermitianMatrix rhs;
    /// min-eig(rhs - lhs), absolute.
    double margin = 0.0;
    /// max(|lhs|, |rhs|) in spectral norm.
    double scale = 0.0;
    /// Inputs, ready to become a Counterexample.
    Counterexample payload;
};

InequalityInstance evaluate_midpoint(const ScalarFunctionSpec& f, const HermitianMatrix& x,
                                     const HermitianMatrix& y, const ToleranceConfig& tol = {});
InequalityInstance evaluate_jensen(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                   const std::vector<HermitianMatrix>& xs,
                                   const ToleranceConfig& tol = {});
InequalityInstance evaluate_jensen_maps(const ScalarFunctionSpec& f, const UnitalMapFamily& family,
                                        const std::vector<HermitianMatrix>& xs,
                                        const ToleranceConfig& tol = {});
InequalityInstance evaluate_log_midpoint(const ScalarFunctionSpec& f, const HermitianMatrix& x,
                                         const HermitianMatrix& y, const ToleranceConfig& tol = {});
InequalityInstance evaluate_log_harmonic_jensen(const ScalarFunctionSpec& f,
                                                const CoefficientTuple& c,
                                                const std::vector<HermitianMatrix>& xs,
                                                const ToleranceConfig& tol = {});
InequalityInstance evaluate_epigraph(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                     const std::vector<HermitianMatrix>& xs,
                                     const std::vector<HermitianMatrix>& ys,
                                     const ToleranceConfig& tol = {});
InequalityInstance evaluate_log_epigraph(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                         const std::vector<HermitianMatrix>& xs,
                                         const std::vector<HermitianMatrix>& ys,
                                         const ToleranceConfig& tol = {});

enum class JensenMode { Isometry, Tuple, MapFamily };

std::string to_string(JensenMode m);
JensenMode parse_jensen_mode(const std::string& s);

/// Shared sampling parameters. `samples` is the total budget, split evenly
/// over `rounds` rounds whose sampling window widens geometrically.
struct SuiteOptions {
    int dim = 2;
    int m = 2;
    int samples = 500;
    std::uint64_t seed = 0;
    ToleranceConfig tol{};
    int rounds = 3;
};

/// Builds an instance, computing margin and scale.
InequalityInstance make_inequality_instance(HermitianMatrix lhs, HermitianMatrix rhs,
                                            Counterexample payload);

using InstanceSampler = std::function<InequalityInstance(int round, Rng& rng)>;

/// Generic driver behind every suite. Sample i uses an Rng seeded from
/// (opt.seed, i, attempt) and belongs to round i * rounds / samples; a
/// DomainError redraws the sample (up to 8 attempts, counted). Results are
/// aggregated in sample-index order.
TestVerdict run_sampling_suite(const SuiteOptions& opt, const InstanceSampler& sampler);

/// Bounded interval spectra are drawn from in round `round`: the domain
/// itself when bounded, else [-h, h] for the whole line or a window of length
/// 2h starting at the finite endpoint, with h = 4^round. An open endpoint is
/// moved inward by 0.02h.
SpectrumInterval sampling_window(const SpectrumInterval& domain, int round);

/// f((X+Y)/2) <= (f(X)+f(Y))/2.
TestVerdict midpoint_convexity_test(const ScalarFunctionSpec& f, const SuiteOptions& opt);

/// f(sum C_i* X_i C_i) <= sum C_i* f(X_i) C_i, or its positive-map form
/// f(sum Phi_i(X_i)) <= sum Phi_i(f(X_i)). Isometry mode uses m = 1.
TestVerdict jensen_test(const ScalarFunctionSpec& f, JensenMode mode, const SuiteOptions& opt);

/// f((X+Y)/2) <= f(X) # f(Y) on strictly positive pairs.
TestVerdict log_midpoint_test(const ScalarFunctionSpec& f, const SuiteOptions& opt);

/// f(sum C_i* X_i C_i) <= (sum C_i* f(X_i)^{-1} C_i)^{-1}.
TestVerdict log_harmonic_jensen_test(const ScalarFunctionSpec& f, const SuiteOptions& opt);

/// Pairs (X_i, Y_i) with f(X_i) <= Y_i, combined componentwise by a tuple;
/// checks f(X') <= Y'. `noise_fraction` scales the PSD slack G*G added to
/// f(X_i) relative to |f(X_i)|.
TestVerdict epigraph_closure_test(const ScalarFunctionSpec& f, const SuiteOptions& opt,
                                  double noise_fraction = 0.1);

/// Pairs with f(X_i^{-1}) <= Y_i, combined by log-combinations
/// componentwise; checks f(X'^{-1}) <= Y'.
TestVerdict log_epigraph_closure_test(const ScalarFunctionSpec& f, const SuiteOptions& opt,
                                      double noise_fraction = 0.1);

/// Searches for a C*-combination of members of [0, A] leaving [0, A].
/// With `try_certificate`, a swap-unitary certificate is tried first when A
/// has two distinct eigenvalues.
TestVerdict interval_set_falsifier(const HermitianMatrix& a, int samples, std::uint64_t seed,
                                   int m = 2, const ToleranceConfig& tol = {},
                                   bool try_certificate = true);

/// The deterministic certificate alone: X = A and C = U swapping the
/// eigenvectors of the extreme eigenvalues. Empty when A is scalar.
std::optional<Counterexample> interval_swap_certificate(const HermitianMatrix& a,
                                                        const ToleranceConfig& tol = {});

struct SublevelConstraint {
    ScalarFunctionSpec f;
    double bound;
};

/// Members of {X : f_a(X) <= M_a I for all a}, combined by tuples; checks
/// every constraint still holds. Throws InvalidInput when the scalar
/// sublevel set is empty on the sampling window.
TestVerdict sublevel_family_test(const std::vector<SublevelConstraint>& family,
                                 const SuiteOptions& opt);

/// Scalar interval {t in window : f_a(t) <= M_a for all a}, located on a
/// grid. Empty optional when infeasible.
std::optional<std::pair<double, double>> sublevel_interval(
    const std::vector<SublevelConstraint>& family, const SpectrumInterval& window);

/// Lifts a "midpoint", "jensen" or "jensen-maps" counterexample from
/// dimension d to d + 1 by a direct sum with the scalar `value` in every
/// matrix input (tuple coefficients get sqrt(1/m), Kraus operators
/// sqrt(1/total)). The violation is recomputed.
Counterexample embed_counterexample(const Counterexample& ce, double value);

}  // namespace opconvex
