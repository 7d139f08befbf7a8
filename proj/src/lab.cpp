#include "opconvex/lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "opconvex/errors.hpp"
#include "opconvex/random.hpp"

namespace opconvex {

std::string to_string(VerdictStatus s) {
    return s == VerdictStatus::Violated ? "violated" : "no-violation-found";
}

std::string to_string(JensenMode m) {
    switch (m) {
        case JensenMode::Isometry: return "isometry";
        case JensenMode::Tuple: return "tuple";
        case JensenMode::MapFamily: return "map-family";
    }
    return "tuple";
}

JensenMode parse_jensen_mode(const std::string& s) {
    if (s == "isometry") return JensenMode::Isometry;
    if (s == "tuple") return JensenMode::Tuple;
    if (s == "map-family" || s == "maps") return JensenMode::MapFamily;
    throw InvalidInput("unknown Jensen mode '" + s + "'");
}

SpectrumInterval sampling_window(const SpectrumInterval& domain, int round) {
    domain.validate();
    if (domain.bounded()) {
        return domain;
    }
    const double h = std::pow(4.0, round);
    if (!domain.lo_finite() && !domain.hi_finite()) {
        return SpectrumInterval::closed(-h, h);
    }
    if (domain.lo_finite()) {
        const double a = domain.open_lo ? domain.lo + 0.02 * h : domain.lo;
        return SpectrumInterval::closed(a, domain.lo + 2.0 * h);
    }
    const double b = domain.open_hi ? domain.hi - 0.02 * h : domain.hi;
    return SpectrumInterval::closed(domain.hi - 2.0 * h, b);
}

namespace {

constexpr int kMaxAttempts = 8;

std::vector<ComplexMatrix> raw(const std::vector<HermitianMatrix>& hs) {
    std::vector<ComplexMatrix> out;
    out.reserve(hs.size());
    for (const auto& h : hs) {
        out.push_back(h.matrix());
    }
    return out;
}

InequalityInstance make_instance(HermitianMatrix lhs, HermitianMatrix rhs, Counterexample payload) {
    return make_inequality_instance(std::move(lhs), std::move(rhs), std::move(payload));
}

std::vector<HermitianMatrix> map_all(const ScalarFunctionSpec& f, const std::vector<HermitianMatrix>& xs,
                                     const ToleranceConfig& tol) {
    std::vector<HermitianMatrix> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        out.push_back(apply_function(f, x, tol));
    }
    return out;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": list lengths differ");
    }
}

void require_log_domain(const ScalarFunctionSpec& f) {
    if (!f.log_suites_apply()) {
        throw DomainError("function " + f.label + " does not map (0, inf) into (0, inf)");
    }
}

}  // namespace

InequalityInstance make_inequality_instance(HermitianMatrix lhs, HermitianMatrix rhs,
                                            Counterexample payload) {
    const double margin = min_eigenvalue(rhs - lhs);
    const double scale = std::max(spectral_norm(lhs), spectral_norm(rhs));
    return {std::move(lhs), std::move(rhs), margin, scale, std::move(payload)};
}

TestVerdict run_sampling_suite(const SuiteOptions& opt, const InstanceSampler& sampler) {
    if (opt.dim < 1) {
        throw DimensionError("suite dimension must be >= 1");
    }
    if (opt.samples < 0 || opt.rounds < 1) {
        throw InvalidInput("suite needs samples >= 0 and rounds >= 1");
    }
    TestVerdict v;
    double worst = std::numeric_limits<double>::infinity();
    double worst_violation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.samples; ++i) {
        const int round = static_cast<int>(static_cast<long long>(i) * opt.rounds / opt.samples);
        const std::uint64_t sample_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
        std::optional<InequalityInstance> inst;
        for (int attempt = 0; attempt < kMaxAttempts && !inst; ++attempt) {
            Rng rng(derive_seed(sample_seed, static_cast<std::uint64_t>(attempt)));
            try {
                inst = sampler(round, rng);
            } catch (const DomainError&) {
                ++v.domain_rejections;
            }
        }
        if (!inst) {
            continue;
        }
        ++v.samples_run;
        const double threshold = opt.tol.psd_threshold(inst->scale);
        const double scaled = inst->margin / std::max(inst->scale, ToleranceConfig::kAbsoluteFloor);
        worst = std::min(worst, scaled);
        if (inst->margin <= -threshold) {
            if (scaled < worst_violation) {
                worst_violation = scaled;
                Counterexample ce = std::move(inst->payload);
                ce.lhs = std::move(inst->lhs);
                ce.rhs = std::move(inst->rhs);
                ce.violation = inst->margin;
                v.counterexample = std::move(ce);
            }
        } else if (inst->margin < threshold) {
            ++v.boundary_count;
        }
    }
    if (opt.samples > 0 && v.samples_run == 0) {
        throw DomainError("domain too small to sample: every attempt left the domain");
    }
    v.worst_margin = v.samples_run > 0 ? worst : 0.0;
    v.status = v.counterexample ? VerdictStatus::Violated : VerdictStatus::NoViolationFound;
    return v;
}

namespace {

std::vector<HermitianMatrix> sample_many(int count, int dim, const SpectrumInterval& window, Rng& rng) {
    std::vector<HermitianMatrix> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        xs.push_back(sample_hermitian(dim, window, rng()));
    }
    return xs;
}

// f(X) + N with N = G*G scaled to `fraction` of |f(X)|.
HermitianMatrix add_psd_noise(const HermitianMatrix& fx, double fraction, Rng& rng) {
    if (fraction <= 0.0) {
        return fx;
    }
    const ComplexMatrix g = complex_gaussian(rng, fx.dim(), fx.dim());
    const auto noise = HermitianMatrix::symmetrized(g.adjoint() * g);
    const double nn = spectral_norm(noise);
    const double target = fraction * spectral_norm(fx);
    if (nn <= 0.0 || target <= 0.0) {
        return fx;
    }
    return fx + (target / nn) * noise;
}

}  // namespace

// ---------------------------------------------------------------------------
// Single instances

InequalityInstance evaluate_midpoint(const ScalarFunctionSpec& f, const HermitianMatrix& x,
                                     const HermitianMatrix& y, const ToleranceConfig& tol) {
    const auto mid = 0.5 * (x + y);
    auto lhs = apply_function(f, mid, tol);
    auto rhs = 0.5 * (apply_function(f, x, tol) + apply_function(f, y, tol));
    Counterexample ce;
    ce.kind = "midpoint";
    ce.function = f.label;
    ce.matrices["X"] = {x.matrix()};
    ce.matrices["Y"] = {y.matrix()};
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

InequalityInstance evaluate_jensen(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                   const std::vector<HermitianMatrix>& xs, const ToleranceConfig& tol) {
    auto lhs = apply_function(f, apply_combination(c, xs), tol);
    auto rhs = apply_combination(c, map_all(f, xs, tol));
    Counterexample ce;
    ce.kind = "jensen";
    ce.function = f.label;
    ce.matrices["X"] = raw(xs);
    ce.matrices["C"] = c.coeffs();
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

InequalityInstance evaluate_jensen_maps(const ScalarFunctionSpec& f, const UnitalMapFamily& family,
                                        const std::vector<HermitianMatrix>& xs,
                                        const ToleranceConfig& tol) {
    auto lhs = apply_function(f, family.apply(xs), tol);
    auto rhs = family.apply(map_all(f, xs, tol));
    Counterexample ce;
    ce.kind = "jensen-maps";
    ce.function = f.label;
    ce.matrices["X"] = raw(xs);
    auto& kraus = ce.matrices["kraus"];
    auto& sizes = ce.params["map_sizes"];
    auto& flags = ce.params["transposed"];
    for (const auto& phi : family.maps()) {
        kraus.insert(kraus.end(), phi.kraus.begin(), phi.kraus.end());
        sizes.push_back(static_cast<double>(phi.kraus.size()));
        flags.push_back(phi.transpose_input ? 1.0 : 0.0);
    }
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

InequalityInstance evaluate_log_midpoint(const ScalarFunctionSpec& f, const HermitianMatrix& x,
                                         const HermitianMatrix& y, const ToleranceConfig& tol) {
    require_log_domain(f);
    auto lhs = apply_function(f, 0.5 * (x + y), tol);
    auto rhs = geometric_mean(apply_function(f, x, tol), apply_function(f, y, tol), tol);
    Counterexample ce;
    ce.kind = "log-midpoint";
    ce.function = f.label;
    ce.matrices["X"] = {x.matrix()};
    ce.matrices["Y"] = {y.matrix()};
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

InequalityInstance evaluate_log_harmonic_jensen(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                                const std::vector<HermitianMatrix>& xs,
                                                const ToleranceConfig& tol) {
    require_log_domain(f);
    auto lhs = apply_function(f, apply_combination(c, xs), tol);
    auto rhs = apply_log_combination(c, map_all(f, xs, tol), tol);
    Counterexample ce;
    ce.kind = "log-harmonic-jensen";
    ce.function = f.label;
    ce.matrices["X"] = raw(xs);
    ce.matrices["C"] = c.coeffs();
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

InequalityInstance evaluate_epigraph(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                     const std::vector<HermitianMatrix>& xs,
                                     const std::vector<HermitianMatrix>& ys, const ToleranceConfig& tol) {
    require_same_size(xs.size(), ys.size(), "evaluate_epigraph");
    auto lhs = apply_function(f, apply_combination(c, xs), tol);
    auto rhs = apply_combination(c, ys);
    Counterexample ce;
    ce.kind = "epigraph";
    ce.function = f.label;
    ce.matrices["X"] = raw(xs);
    ce.matrices["Y"] = raw(ys);
    ce.matrices["C"] = c.coeffs();
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

InequalityInstance evaluate_log_epigraph(const ScalarFunctionSpec& f, const CoefficientTuple& c,
                                         const std::vector<HermitianMatrix>& xs,
                                         const std::vector<HermitianMatrix>& ys,
                                         const ToleranceConfig& tol) {
    require_same_size(xs.size(), ys.size(), "evaluate_log_epigraph");
    require_log_domain(f);
    const auto x_comb = apply_log_combination(c, xs, tol);
    auto rhs = apply_log_combination(c, ys, tol);
    auto lhs = apply_function(f, matrix_inverse(x_comb, tol), tol);
    Counterexample ce;
    ce.kind = "log-epigraph";
    ce.function = f.label;
    ce.matrices["X"] = raw(xs);
    ce.matrices["Y"] = raw(ys);
    ce.matrices["C"] = c.coeffs();
    return make_instance(std::move(lhs), std::move(rhs), std::move(ce));
}

// ---------------------------------------------------------------------------
// Suites

TestVerdict midpoint_convexity_test(const ScalarFunctionSpec& f, const SuiteOptions& opt) {
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto window = sampling_window(f.domain, round);
        const auto x = sample_hermitian(opt.dim, window, rng());
        const auto y = sample_hermitian(opt.dim, window, rng());
        return evaluate_midpoint(f, x, y, opt.tol);
    });
}

TestVerdict jensen_test(const ScalarFunctionSpec& f, JensenMode mode, const SuiteOptions& opt) {
    if (mode == JensenMode::Isometry && opt.m != 1) {
        throw InvalidInput("jensen_test: isometry mode requires m = 1");
    }
    if (opt.m < 1) {
        throw DimensionError("jensen_test: m must be >= 1");
    }
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto window = sampling_window(f.domain, round);
        const auto xs = sample_many(opt.m, opt.dim, window, rng);
        if (mode == JensenMode::MapFamily) {
            const auto family = UnitalMapFamily::sample(opt.dim, opt.m, 2, rng());
            return evaluate_jensen_maps(f, family, xs, opt.tol);
        }
        const auto c = sample_tuple(opt.dim, opt.m, rng());
        return evaluate_jensen(f, c, xs, opt.tol);
    });
}

TestVerdict log_midpoint_test(const ScalarFunctionSpec& f, const SuiteOptions& opt) {
    require_log_domain(f);
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto window = sampling_window(SpectrumInterval::positive(), round);
        const auto x = sample_hermitian(opt.dim, window, rng());
        const auto y = sample_hermitian(opt.dim, window, rng());
        return evaluate_log_midpoint(f, x, y, opt.tol);
    });
}

TestVerdict log_harmonic_jensen_test(const ScalarFunctionSpec& f, const SuiteOptions& opt) {
    require_log_domain(f);
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto window = sampling_window(SpectrumInterval::positive(), round);
        const auto xs = sample_many(opt.m, opt.dim, window, rng);
        const auto c = sample_tuple(opt.dim, opt.m, rng());
        return evaluate_log_harmonic_jensen(f, c, xs, opt.tol);
    });
}

TestVerdict epigraph_closure_test(const ScalarFunctionSpec& f, const SuiteOptions& opt,
                                  double noise_fraction) {
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto window = sampling_window(f.domain, round);
        const auto xs = sample_many(opt.m, opt.dim, window, rng);
        std::vector<HermitianMatrix> ys;
        for (const auto& x : xs) {
            ys.push_back(add_psd_noise(apply_function(f, x, opt.tol), noise_fraction, rng));
        }
        const auto c = sample_tuple(opt.dim, opt.m, rng());
        return evaluate_epigraph(f, c, xs, ys, opt.tol);
    });
}

TestVerdict log_epigraph_closure_test(const ScalarFunctionSpec& f, const SuiteOptions& opt,
                                      double noise_fraction) {
    require_log_domain(f);
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto window = sampling_window(SpectrumInterval::positive(), round);
        const auto xs = sample_many(opt.m, opt.dim, window, rng);
        std::vector<HermitianMatrix> ys;
        for (const auto& x : xs) {
            const auto fx_inv = apply_function(f, matrix_inverse(x, opt.tol), opt.tol);
            ys.push_back(add_psd_noise(fx_inv, noise_fraction, rng));
        }
        const auto c = sample_tuple(opt.dim, opt.m, rng());
        return evaluate_log_epigraph(f, c, xs, ys, opt.tol);
    });
}

namespace {

// min(min-eig(X'), min-eig(A - X')) as an inequality instance.
InequalityInstance interval_instance(const HermitianMatrix& a, const std::vector<HermitianMatrix>& xs,
                                     const CoefficientTuple& c) {
    const auto combined = apply_combination(c, xs);
    Counterexample ce;
    ce.kind = "interval-set";
    ce.matrices["A"] = {a.matrix()};
    ce.matrices["X"] = raw(xs);
    ce.matrices["C"] = c.coeffs();
    const double lower = min_eigenvalue(combined);
    const double upper = min_eigenvalue(a - combined);
    if (upper <= lower) {
        return make_instance(combined, a, std::move(ce));
    }
    return make_instance(HermitianMatrix::zero(a.dim()), combined, std::move(ce));
}

}  // namespace

std::optional<Counterexample> interval_swap_certificate(const HermitianMatrix& a,
                                                        const ToleranceConfig& tol) {
    const auto sd = eig_hermitian(a);
    const int n = sd.dim();
    if (sd.max() - sd.min() <= tol.psd_threshold(sd.max_abs())) {
        return std::nullopt;
    }
    // W = V P V*, P swapping the extreme eigenvectors: W* A W exchanges
    // lambda_min and lambda_max.
    ComplexMatrix perm = ComplexMatrix::Identity(n, n);
    perm.col(0).swap(perm.col(n - 1));
    const ComplexMatrix w = sd.unitary * perm * sd.unitary.adjoint();
    auto inst = interval_instance(a, {a}, CoefficientTuple::single(w));
    Counterexample ce = std::move(inst.payload);
    ce.lhs = std::move(inst.lhs);
    ce.rhs = std::move(inst.rhs);
    ce.violation = inst.margin;
    return ce;
}

TestVerdict interval_set_falsifier(const HermitianMatrix& a, int samples, std::uint64_t seed, int m,
                                   const ToleranceConfig& tol, bool try_certificate) {
    if (!is_psd(a, tol)) {
        throw InvalidInput("interval_set_falsifier: A must be positive semidefinite");
    }
    if (try_certificate) {
        if (auto ce = interval_swap_certificate(a, tol)) {
            TestVerdict v;
            v.status = VerdictStatus::Violated;
            const double scale = std::max(spectral_norm(ce->lhs), spectral_norm(ce->rhs));
            v.worst_margin = ce->violation / std::max(scale, ToleranceConfig::kAbsoluteFloor);
            v.counterexample = std::move(ce);
            return v;
        }
    }
    const auto a_half = eig_hermitian(a).map([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
    SuiteOptions opt;
    opt.dim = a.dim();
    opt.m = m;
    opt.samples = samples;
    opt.seed = seed;
    opt.tol = tol;
    opt.rounds = 1;
    return run_sampling_suite(opt, [&](int, Rng& rng) {
        // X = A^{1/2} Z A^{1/2} with 0 <= Z <= I ranges over [0, A].
        std::vector<HermitianMatrix> xs;
        for (int i = 0; i < m; ++i) {
            const auto z = sample_hermitian(a.dim(), SpectrumInterval::closed(0.0, 1.0), rng());
            xs.push_back(z.congruence(a_half.matrix()));
        }
        return interval_instance(a, xs, sample_tuple(a.dim(), m, rng()));
    });
}

std::optional<std::pair<double, double>> sublevel_interval(const std::vector<SublevelConstraint>& family,
                                                           const SpectrumInterval& window) {
    constexpr int kGrid = 4000;
    std::optional<std::pair<double, double>> out;
    for (int k = 0; k <= kGrid; ++k) {
        const double t = window.lo + (window.hi - window.lo) * k / kGrid;
        bool ok = true;
        for (const auto& c : family) {
            if (!c.f.domain.contains(t) || !(c.f(t) <= c.bound)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            if (!out) {
                out = std::make_pair(t, t);
            }
            out->second = t;
        }
    }
    return out;
}

TestVerdict sublevel_family_test(const std::vector<SublevelConstraint>& family, const SuiteOptions& opt) {
    if (family.empty()) {
        throw InvalidInput("sublevel_family_test: empty family");
    }
    SpectrumInterval domain = family.front().f.domain;
    for (const auto& c : family) {
        if (c.f.domain.lo > domain.lo || (c.f.domain.lo == domain.lo && c.f.domain.open_lo)) {
            domain.lo = c.f.domain.lo;
            domain.open_lo = c.f.domain.open_lo;
        }
        if (c.f.domain.hi < domain.hi || (c.f.domain.hi == domain.hi && c.f.domain.open_hi)) {
            domain.hi = c.f.domain.hi;
            domain.open_hi = c.f.domain.open_hi;
        }
    }
    std::vector<std::pair<double, double>> intervals;
    for (int r = 0; r < opt.rounds; ++r) {
        auto iv = sublevel_interval(family, sampling_window(domain, r));
        if (!iv) {
            throw InvalidInput("sublevel_family_test: the sampled sublevel set is empty");
        }
        intervals.push_back(*iv);
    }
    return run_sampling_suite(opt, [&](int round, Rng& rng) {
        const auto [lo, hi] = intervals[static_cast<std::size_t>(round)];
        const auto xs = sample_many(opt.m, opt.dim, SpectrumInterval::closed(lo, hi), rng);
        const auto c = sample_tuple(opt.dim, opt.m, rng());
        const auto combined = apply_combination(c, xs);
        Counterexample ce;
        ce.kind = "sublevel";
        ce.matrices["X"] = raw(xs);
        ce.matrices["C"] = c.coeffs();
        auto& bounds = ce.params["bounds"];
        for (const auto& constraint : family) {
            ce.labels.push_back(constraint.f.label);
            bounds.push_back(constraint.bound);
        }
        std::optional<InequalityInstance> worst;
        for (const auto& constraint : family) {
            auto inst = make_instance(apply_function(constraint.f, combined, opt.tol),
                                      HermitianMatrix::scalar(opt.dim, constraint.bound), ce);
            if (!worst || inst.margin < worst->margin) {
                worst = std::move(inst);
            }
        }
        return std::move(*worst);
    });
}

// ---------------------------------------------------------------------------

Counterexample embed_counterexample(const Counterexample& ce, double value) {
    const auto f = parse_function(ce.function);
    auto lift = [value](const std::vector<ComplexMatrix>& ms) {
        std::vector<HermitianMatrix> out;
        for (const auto& m : ms) {
            out.push_back(direct_sum(HermitianMatrix(m), value));
        }
        return out;
    };
    auto lift_coeff = [](const ComplexMatrix& c, double corner) {
        const auto n = c.rows();
        ComplexMatrix out = ComplexMatrix::Zero(n + 1, n + 1);
        out.topLeftCorner(n, n) = c;
        out(n, n) = corner;
        return out;
    };
    InequalityInstance inst = [&] {
        if (ce.kind == "midpoint") {
            return evaluate_midpoint(f, lift(ce.inputs("X"))[0], lift(ce.inputs("Y"))[0]);
        }
        if (ce.kind == "jensen") {
            const auto& cs = ce.inputs("C");
            std::vector<ComplexMatrix> lifted;
            const double corner = std::sqrt(1.0 / static_cast<double>(cs.size()));
            for (const auto& c : cs) {
                lifted.push_back(lift_coeff(c, corner));
            }
            return evaluate_jensen(f, CoefficientTuple(lifted), lift(ce.inputs("X")));
        }
        if (ce.kind == "jensen-maps") {
            const auto& kraus = ce.inputs("kraus");
            const auto& sizes = ce.params.at("map_sizes");
            const auto& flags = ce.params.at("transposed");
            const double corner = std::sqrt(1.0 / static_cast<double>(kraus.size()));
            std::vector<PositiveMap> maps;
            std::size_t next = 0;
            for (std::size_t i = 0; i < sizes.size(); ++i) {
                PositiveMap phi;
                phi.transpose_input = flags[i] != 0.0;
                for (int k = 0; k < static_cast<int>(sizes[i]); ++k) {
                    phi.kraus.push_back(lift_coeff(kraus[next++], corner));
                }
                maps.push_back(std::move(phi));
            }
            return evaluate_jensen_maps(f, UnitalMapFamily(std::move(maps)), lift(ce.inputs("X")));
        }
        throw InvalidInput("embed_counterexample: unsupported kind '" + ce.kind + "'");
    }();
    Counterexample out = std::move(inst.payload);
    out.lhs = std::move(inst.lhs);
    out.rhs = std::move(inst.rhs);
    out.violation = inst.margin;
    return out;
}

}  // namespace opconvex
