#include "opconvex/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opconvex/errors.hpp"
#include "opconvex/function.hpp"
#include "opconvex/hull.hpp"
#include "opconvex/lab.hpp"
#include "opconvex/matrix_io.hpp"
#include "opconvex/report.hpp"

namespace opconvex::cli {

using nlohmann::json;

namespace {

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    int samples = 500;
    std::vector<int> dims{1, 2, 3, 4};
    int m = 2;
    double tol = ToleranceConfig{}.psd_tol;
    std::string out;
    std::string format = "text";
};

// Accumulates the deterministic report body; timing is kept apart.
class Report {
public:
    Report(const std::vector<std::string>& args, const CommonOptions& common, const ToleranceConfig& tol) {
        body_["command"] = args;
        body_["seed"] = common.seed ? json(*common.seed) : json(nullptr);
        body_["tolerance"] = to_json(tol);
        body_["results"] = json::array();
    }

    void add_verdict(const std::string& suite, const std::string& function, int dim, int m,
                     const TestVerdict& v) {
        json j = to_json(v);
        j["suite"] = suite;
        j["function"] = function;
        j["dim"] = dim;
        j["m"] = m;
        body_["results"].push_back(std::move(j));
    }

    void add(json result) { body_["results"].push_back(std::move(result)); }
    json& body() { return body_; }

    int finish(int code, const std::string& outcome, const CommonOptions& common, std::ostream& out,
               double seconds) {
        body_["outcome"] = outcome;
        body_["exit_code"] = code;
        json full{{"body", body_}, {"timing", {{"wall_clock_seconds", seconds}}}};
        if (!common.out.empty()) {
            std::ofstream f(common.out);
            if (!f) {
                throw InvalidInput("cannot write report to '" + common.out + "'");
            }
            f << full.dump(2) << '\n';
        }
        if (common.format == "json") {
            out << full.dump(2) << '\n';
        } else {
            print_text(body_, out);
        }
        return code;
    }

    static void print_text(const json& body, std::ostream& out) {
        for (const auto& r : body.at("results")) {
            if (r.contains("suite")) {
                out << r.at("suite").get<std::string>();
                if (r.contains("function")) out << " f=" << r.at("function").get<std::string>();
                if (r.contains("dim")) out << " dim=" << r.at("dim");
                if (r.contains("m")) out << " m=" << r.at("m");
                out << ": " << r.at("status").get<std::string>();
                if (r.contains("samples_run")) out << " samples=" << r.at("samples_run");
                if (r.contains("worst_margin")) out << " worst_margin=" << r.at("worst_margin");
                if (r.contains("counterexample")) {
                    out << " violation=" << r.at("counterexample").at("violation");
                }
                out << '\n';
            }
        }
        out << "outcome: " << body.at("outcome").get<std::string>()
            << " (exit " << body.at("exit_code") << ")\n";
    }

private:
    json body_;
};

ToleranceConfig make_tolerance(const CommonOptions& common) {
    ToleranceConfig tol;
    tol.psd_tol = common.tol;
    tol.construction_tol = std::min(tol.construction_tol, common.tol);
    tol.validate();
    return tol;
}

std::uint64_t require_seed(const CommonOptions& common) {
    if (!common.seed) {
        throw InvalidInput("this command is randomized and requires an explicit --seed");
    }
    return *common.seed;
}

void add_sampling_options(CLI::App* sub, CommonOptions& common, bool with_dims = true) {
    sub->add_option("--seed", common.seed, "Master seed (required for randomized commands)");
    sub->add_option("--samples", common.samples, "Sample budget per suite")->check(CLI::NonNegativeNumber);
    if (with_dims) {
        sub->add_option("--dims", common.dims, "Comma-separated dimensions")->delimiter(',');
    }
    sub->add_option("--m", common.m, "Number of coefficients per combination")->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* sub, CommonOptions& common,
                        const std::string& out_help = "Write the JSON report to this path") {
    sub->add_option("--tol", common.tol, "PSD tolerance, relative to spectral scale")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", common.out, out_help);
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

SuiteOptions suite_options(const CommonOptions& common, const ToleranceConfig& tol, int dim, int m) {
    SuiteOptions opt;
    opt.dim = dim;
    opt.m = m;
    opt.samples = common.samples;
    opt.seed = require_seed(common);
    opt.tol = tol;
    return opt;
}

json feasibility_entry(const std::string& suite, const FeasibilityResult& r) {
    json j = to_json(r);
    j["suite"] = suite;
    return j;
}

int membership_code(const FeasibilityResult& r) {
    switch (r.status) {
        case Membership::Member: return kPass;
        case Membership::NonMember: return kViolation;
        case Membership::Boundary: return kIndeterminate;
    }
    return kIndeterminate;
}

// Collects every counterexample object found anywhere below `j`.
void collect_counterexamples(const json& j, std::vector<json>& out) {
    if (j.is_object()) {
        if (j.contains("kind") && j.contains("inputs") && j.contains("violation")) {
            out.push_back(j);
            return;
        }
        for (const auto& [key, value] : j.items()) {
            collect_counterexamples(value, out);
        }
    } else if (j.is_array()) {
        for (const auto& value : j) {
            collect_counterexamples(value, out);
        }
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw InvalidInput("cannot parse '" + path + "': " + e.what());
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    CLI::App app{"Operator convexity lab: Jensen-type inequalities, C*-convex sets and hulls"};
    app.require_subcommand(1);
    CommonOptions common;
    std::string function_label;
    std::string mode = "tuple";
    double noise = 0.1;
    std::string t_path;
    std::string x_path;
    std::string a_path;
    std::string in_path;
    bool no_certificate = false;

    auto* classify = app.add_subcommand("classify", "Run the convexity and log-convexity suites");
    classify->add_option("--function", function_label, "Function label")->required();
    add_sampling_options(classify, common);
    add_output_options(classify, common);

    auto* jensen = app.add_subcommand("jensen", "Jensen operator inequality suite");
    jensen->add_option("--function", function_label, "Function label")->required();
    jensen->add_option("--mode", mode, "isometry | tuple | map-family")
        ->check(CLI::IsMember({"isometry", "tuple", "map-family", "maps"}));
    add_sampling_options(jensen, common);
    add_output_options(jensen, common);

    auto* epigraph = app.add_subcommand("epigraph", "Closure of the operator epigraph under C*-combinations");
    epigraph->add_option("--function", function_label, "Function label")->required();
    epigraph->add_option("--noise", noise, "PSD slack as a fraction of |f(X)|");
    add_sampling_options(epigraph, common);
    add_output_options(epigraph, common);

    auto* log_epigraph =
        app.add_subcommand("log-epigraph", "Closure of {f(X^-1) <= Y} under C*-log-combinations");
    log_epigraph->add_option("--function", function_label, "Function label")->required();
    log_epigraph->add_option("--noise", noise, "PSD slack as a fraction of |f(X^-1)|");
    add_sampling_options(log_epigraph, common);
    add_output_options(log_epigraph, common);

    auto* hull = app.add_subcommand("hull", "C*-convex hull of a Hermitian matrix");
    hull->require_subcommand(1);
    auto* hull_member = hull->add_subcommand("member", "Decide X in C*-CH(T)");
    auto* hull_witness = hull->add_subcommand("witness", "Write witness blocks E_i for X in C*-CH(T)");
    auto* hull_sample = hull->add_subcommand("sample", "Sample a member sum C_i* T C_i");
    for (auto* sub : {hull_member, hull_witness}) {
        sub->add_option("--t", t_path, "Matrix file for T")->required();
        sub->add_option("--x", x_path, "Matrix file for X")->required();
    }
    add_output_options(hull_member, common);
    add_output_options(hull_witness, common, "Prefix for the block files <prefix>.E<i>.json (default: witness)");
    hull_sample->add_option("--t", t_path, "Matrix file for T")->required();
    hull_sample->add_option("--seed", common.seed, "Tuple seed")->required();
    hull_sample->add_option("--m", common.m, "Number of coefficients")->check(CLI::PositiveNumber);
    hull_sample->add_option("--out", common.out, "Matrix file to write the sample to")->required();
    hull_sample->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    hull_sample->add_option("--tol", common.tol, "PSD tolerance")->check(CLI::PositiveNumber);

    auto* lch = app.add_subcommand("lch", "C*-log-convex hull of a strictly positive matrix");
    lch->require_subcommand(1);
    auto* lch_member = lch->add_subcommand("member", "Decide X in C*-LCH(T)");
    lch_member->add_option("--t", t_path, "Matrix file for T")->required();
    lch_member->add_option("--x", x_path, "Matrix file for X")->required();
    add_output_options(lch_member, common);

    auto* interval = app.add_subcommand("interval-set", "Search for C*-combinations leaving [0, A]");
    interval->add_option("--a", a_path, "Matrix file for A")->required();
    interval->add_flag("--no-certificate", no_certificate, "Skip the deterministic swap certificate");
    add_sampling_options(interval, common, false);
    add_output_options(interval, common);

    auto* verify = app.add_subcommand("verify", "Re-verify every counterexample payload in a file");
    verify->add_option("--in", in_path, "Report or counterexample JSON")->required();
    verify->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* report_cmd = app.add_subcommand("report", "Summarize a saved JSON report");
    report_cmd->add_option("--in", in_path, "Report JSON")->required();
    report_cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        const auto tol = make_tolerance(common);
        Report report(args, common, tol);

        if (*classify) {
            const auto f = parse_function(function_label);
            bool convex_violation = false;
            bool log_violation = false;
            report.body()["expected_class"] = to_string(f.expected_class);
            report.body()["provenance"] = to_string(f.provenance);
            for (int dim : common.dims) {
                auto opt = suite_options(common, tol, dim, common.m);
                auto record = [&](const std::string& suite, int m, const TestVerdict& v, bool log_suite) {
                    report.add_verdict(suite, f.label, dim, m, v);
                    (log_suite ? log_violation : convex_violation) |= v.violated();
                };
                record("midpoint", 2, midpoint_convexity_test(f, opt), false);
                record("jensen-tuple", opt.m, jensen_test(f, JensenMode::Tuple, opt), false);
                record("jensen-map-family", opt.m, jensen_test(f, JensenMode::MapFamily, opt), false);
                auto iso = opt;
                iso.m = 1;
                record("jensen-isometry", 1, jensen_test(f, JensenMode::Isometry, iso), false);
                if (f.log_suites_apply()) {
                    record("log-midpoint", 2, log_midpoint_test(f, opt), true);
                    record("log-harmonic-jensen", opt.m, log_harmonic_jensen_test(f, opt), true);
                }
            }
            std::string outcome;
            int code = kPass;
            const bool expected_log = f.expected_class == FunctionClass::OperatorLogConvex;
            if (convex_violation) {
                code = kViolation;
                outcome = f.expected_convex() ? "classification conflict: operator convexity violated"
                                              : "violation found: not operator convex";
            } else if (expected_log && log_violation) {
                code = kViolation;
                outcome = "classification conflict: operator log-convexity violated";
            } else if (f.expected_class == FunctionClass::Neither) {
                code = kViolation;
                outcome = "classification conflict: no violation found for a function expected to be neither";
            } else {
                outcome = "consistent with expected class " + to_string(f.expected_class) + " (" + kEvidenceNote + ")";
            }
            return report.finish(code, outcome, common, out, elapsed());
        }

        if (*jensen || *epigraph || *log_epigraph) {
            const auto f = parse_function(function_label);
            const auto jmode = parse_jensen_mode(mode);
            bool violated = false;
            for (int dim : common.dims) {
                if (*jensen) {
                    const int m = jmode == JensenMode::Isometry ? 1 : common.m;
                    const auto v = jensen_test(f, jmode, suite_options(common, tol, dim, m));
                    report.add_verdict("jensen-" + to_string(jmode), f.label, dim, m, v);
                    violated |= v.violated();
                } else if (*epigraph) {
                    const auto v = epigraph_closure_test(f, suite_options(common, tol, dim, common.m), noise);
                    report.add_verdict("epigraph", f.label, dim, common.m, v);
                    violated |= v.violated();
                } else {
                    const auto v =
                        log_epigraph_closure_test(f, suite_options(common, tol, dim, common.m), noise);
                    report.add_verdict("log-epigraph", f.label, dim, common.m, v);
                    violated |= v.violated();
                }
            }
            return report.finish(violated ? kViolation : kPass,
                                 violated ? "violation found" : std::string("no violation found (") + kEvidenceNote + ")",
                                 common, out, elapsed());
        }

        if (*hull_member || *lch_member) {
            const auto t = load_matrix(t_path);
            const auto x = load_matrix(x_path);
            const auto r = *hull_member ? hull_membership(t, x, tol) : lch_membership(t, x, tol);
            report.add(feasibility_entry(*hull_member ? "hull-member" : "lch-member", r));
            return report.finish(membership_code(r), to_string(r.status), common, out, elapsed());
        }

        if (*hull_witness) {
            const auto t = load_matrix(t_path);
            const auto x = load_matrix(x_path);
            const auto r = hull_membership(t, x, tol);
            json entry = feasibility_entry("hull-witness", r);
            int code = membership_code(r);
            if (r.witness) {
                const std::string prefix = common.out.empty() ? std::string("witness") : common.out;
                HullWitness reloaded;
                reloaded.eigenvalues = r.witness->eigenvalues;
                json files = json::array();
                for (std::size_t i = 0; i < r.witness->blocks.size(); ++i) {
                    const std::string path = prefix + ".E" + std::to_string(i + 1) + ".json";
                    save_matrix(path, r.witness->blocks[i].matrix());
                    reloaded.blocks.push_back(load_matrix(path));
                    files.push_back(path);
                }
                const auto check = check_witness(reloaded, x);
                entry["files"] = files;
                entry["validated"] = check.valid;
                if (!check.valid) {
                    code = kIndeterminate;
                }
            }
            report.add(std::move(entry));
            // --out names the witness prefix here, not a report path.
            auto quiet = common;
            quiet.out.clear();
            return report.finish(code, to_string(r.status), quiet, out, elapsed());
        }

        if (*hull_sample) {
            const auto t = load_matrix(t_path);
            const auto c = sample_tuple(t.dim(), common.m, require_seed(common));
            const auto x = sample_hull_member(t, c, tol);
            save_matrix(common.out, x.matrix());
            report.add({{"suite", "hull-sample"}, {"status", "written"}, {"path", common.out},
                        {"m", common.m}, {"sample", matrix_to_json(x.matrix())}});
            auto quiet = common;
            quiet.out.clear();
            return report.finish(kPass, "sample written", quiet, out, elapsed());
        }

        if (*interval) {
            const auto a = load_matrix(a_path);
            const auto v = interval_set_falsifier(a, common.samples, require_seed(common), common.m, tol,
                                                  !no_certificate);
            report.add_verdict("interval-set", "", a.dim(), common.m, v);
            return report.finish(v.violated() ? kViolation : kPass,
                                 v.violated() ? "[0, A] is not C*-convex: certificate found"
                                              : std::string("no violation found (") + kEvidenceNote + ")",
                                 common, out, elapsed());
        }

        if (*verify) {
            std::vector<json> found;
            collect_counterexamples(read_json_file(in_path), found);
            int failures = 0;
            for (const auto& j : found) {
                const auto ce = counterexample_from_json(j);
                const double again = reverify(ce);
                const bool ok = reverifies(ce);
                failures += ok ? 0 : 1;
                report.add({{"suite", "verify"}, {"kind", ce.kind}, {"function", ce.function},
                            {"status", ok ? "reproduced" : "not-reproduced"},
                            {"stored_violation", ce.violation}, {"recomputed_violation", again}});
            }
            report.body()["verified"] = static_cast<int>(found.size()) - failures;
            report.body()["failed"] = failures;
            return report.finish(failures == 0 ? kPass : kViolation,
                                 failures == 0 ? "all counterexamples reproduced" : "some counterexamples did not reproduce",
                                 common, out, elapsed());
        }

        if (*report_cmd) {
            const auto j = read_json_file(in_path);
            if (!j.contains("body") || !j.at("body").contains("results") || !j.at("body").contains("outcome")) {
                throw InvalidInput("'" + in_path + "' is not a report");
            }
            if (common.format == "json") {
                out << j.at("body").dump(2) << '\n';
            } else {
                Report::print_text(j.at("body"), out);
            }
            return kPass;
        }
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kIndeterminate;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace opconvex::cli
