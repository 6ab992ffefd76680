#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ricker/dynamics.hpp"
#include "ricker/json_io.hpp"
#include "ricker/neighborhood.hpp"
#include "ricker/prover.hpp"

namespace {

using namespace ricker;

// Exit codes shared by every subcommand. 0 also means "proved" for prove.
constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;         // domain, regime and convergence failures
constexpr int kExitPrecondition = 3;   // slice too wide for the certified radius
constexpr int kExitCertification = 4;  // a claim failed or stayed undecided
constexpr int kExitResources = 5;      // memory or iteration budget exhausted
constexpr int kExitUsage = 64;         // malformed flags or arguments

// Argument-level problems detected after CLI11 parsing (bad numbers, missing
// flag combinations). Mapped to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_double_checked(const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
        throw UsageError("not a finite number: '" + text + "'");
    return d;
}

// Decimal endpoints become the tightest doubles that still bracket the
// written value. strtod rounds to nearest; an endpoint needs a one-ulp nudge
// only when that rounding moved it across the true decimal, which the long
// double parse detects.
double parse_decimal_down(const std::string& text) {
    const double d = parse_double_checked(text);
    const long double exact = std::strtold(text.c_str(), nullptr);
    return static_cast<long double>(d) > exact ? step_down(d) : d;
}

double parse_decimal_up(const std::string& text) {
    const double d = parse_double_checked(text);
    const long double exact = std::strtold(text.c_str(), nullptr);
    return static_cast<long double>(d) < exact ? step_up(d) : d;
}

Interval parse_decimal_interval(const std::string& lo, const std::string& hi) {
    return Interval(parse_decimal_down(lo), parse_decimal_up(hi));
}

std::string format_interval(const Interval& v) {
    return "[" + format_double(v.lo) + ", " + format_double(v.hi) + "]";
}

std::string format_box(const Box2& b) {
    return format_interval(b.x) + " x " + format_interval(b.y);
}

int cmd_region(const std::string& lo, const std::string& hi, double tol,
               std::int64_t max_iter) {
    const RickerParams params(parse_decimal_interval(lo, hi));
    std::vector<TrappingState> trace;
    const RegionResult r = construct_region(params, tol, max_iter, &trace);
    std::cout << "S = " << format_box(r.region) << "\n";
    std::cout << "i0 = " << r.limits.index << "\n";
    std::cout << "i,h_lo,h_hi,g_lo,g_hi\n";
    for (const TrappingState& s : trace)
        std::cout << s.index << ',' << format_double(s.h.lo) << ','
                  << format_double(s.h.hi) << ',' << format_double(s.g.lo) << ','
                  << format_double(s.g.hi) << "\n";
    return kExitOk;
}

int cmd_neighborhood(const std::string& lo, const std::string& hi) {
    const RickerParams params(parse_decimal_interval(lo, hi));
    const NeighborhoodResult nb = find_attraction_domain(params);
    std::cout << "epsilon0 = " << format_double(nb.epsilon0) << "\n";
    std::cout << "epsilon = " << format_double(nb.epsilon) << "\n";
    std::cout << "source = " << to_string(nb.source) << "\n";
    std::cout << "U = " << format_box(nb.center) << "\n";
    return kExitOk;
}

const char* to_string(CertifyStatus s) {
    switch (s) {
        case CertifyStatus::AllCertified: return "all_certified";
        case CertifyStatus::Failed: return "failed";
        case CertifyStatus::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Json constants_certificate_to_json(const ConstantsCertificate& c) {
    Json j;
    j["schema"] = "ricker-constants-certificate-v1";
    j["alpha_range"] = to_json(c.alpha_range);
    j["status"] = to_string(c.status);
    j["subdivision_count"] = c.subdivision_count;
    Json checks = Json::array();
    for (const ConstantCheck& k : c.checks)
        checks.push_back({{"name", k.name},
                          {"claimed_bound", k.claimed_bound},
                          {"certified_enclosure", to_json(k.certified_enclosure)},
                          {"verdict", k.verdict},
                          {"refuted", k.refuted}});
    j["checks"] = std::move(checks);
    return j;
}

int cmd_certify_constants(const std::string& lo, const std::string& hi,
                          std::int64_t max_subdiv,
                          const std::vector<std::string>& override_args,
                          const std::string& out_path) {
    std::vector<std::pair<std::string, double>> overrides;
    for (const std::string& arg : override_args) {
        const std::size_t eq = arg.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("override must look like name=value, got '" + arg + "'");
        overrides.emplace_back(arg.substr(0, eq),
                               parse_double_checked(arg.substr(eq + 1)));
    }
    const Interval range = parse_decimal_interval(lo, hi);
    const ConstantsCertificate cert = certify_constants(range, max_subdiv, overrides);
    const std::string text = canonical_dump(constants_certificate_to_json(cert));
    std::cout << text;
    if (!out_path.empty()) write_text_file(out_path, text);
    return cert.status == CertifyStatus::AllCertified ? kExitOk : kExitCertification;
}

int verdict_exit_code(Verdict v) {
    switch (v) {
        case Verdict::Proved: return kExitOk;
        case Verdict::Inconclusive: return kExitCertification;
        case Verdict::ResourceExceeded: return kExitResources;
    }
    return kExitCertification;
}

struct ProveArgs {
    std::vector<std::string> slice;
    std::vector<std::string> range;
    double delta0 = 0.1;
    int iterate_k = 3;
    int workers = 1;
    double slice_width = 0.0;  // 0 means the per-regime defaults
    int grid_n = 64;
    int max_iterations = 40;
    std::int64_t memory_cap = 0;  // 0 means env var or built-in default
    double trap_tol = 1e-9;
    std::int64_t trap_max_iter = 1000000;
    std::string out_dir = "certificates";
    bool dump_boxes = false;
};

std::int64_t resolve_memory_cap(std::int64_t flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("RICKER_MEMORY_CAP_BYTES")) {
        errno = 0;
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end == env || *end != '\0' || errno == ERANGE || v <= 0)
            throw DomainError("RICKER_MEMORY_CAP_BYTES must be a positive integer");
        return v;
    }
    return ResourceLimits{}.memory_cap_bytes;
}

int cmd_prove(const ProveArgs& args) {
    ResourceLimits limits;
    limits.max_iterations = args.max_iterations;
    limits.memory_cap_bytes = resolve_memory_cap(args.memory_cap);
    limits.trap_tol = args.trap_tol;
    limits.trap_max_iter = args.trap_max_iter;
    limits.invariance_grid_n = args.grid_n;

    if (args.slice.empty() == args.range.empty())
        throw UsageError("exactly one of --slice and --range is required");
    std::filesystem::create_directories(args.out_dir);

    if (!args.slice.empty()) {
        ParameterSlice slice;
        slice.alpha = parse_decimal_interval(args.slice[0], args.slice[1]);
        slice.delta0 = args.delta0;
        slice.iterate_k = args.iterate_k;

        ProveOptions opts;
        std::ofstream dump;
        if (args.dump_boxes) {
            const std::string path =
                (std::filesystem::path(args.out_dir) /
                 ("boxes_" + format_double(slice.alpha.lo) + "_" +
                  format_double(slice.alpha.hi) + ".csv"))
                    .string();
            dump.open(path, std::ios::binary);
            if (!dump) throw RickerError("cannot open box dump file: " + path);
            dump << "iter,x_lo,x_hi,y_lo,y_hi\n";
            std::cerr << "[prove] dumping survivor boxes to " << path << "\n";
        }
        opts.on_iteration = [&](const IterationRecord& rec,
                                const std::vector<Cell>& survivors) {
            std::cerr << "[prove] iter " << rec.iter << "  delta "
                      << format_double(rec.delta) << "  vertices " << rec.vertex_count
                      << "  edges " << rec.edge_count << "  removed "
                      << rec.removed_not_in_cycle << "+" << rec.removed_absorbed
                      << "\n";
            if (!dump.is_open()) return;
            for (const Cell& c : survivors)
                dump << rec.iter << ',' << format_double(c.box.x.lo) << ','
                     << format_double(c.box.x.hi) << ',' << format_double(c.box.y.lo)
                     << ',' << format_double(c.box.y.hi) << "\n";
        };

        const ProofCertificate cert = prove_slice(slice, limits, opts);
        const std::string path =
            (std::filesystem::path(args.out_dir) / certificate_file_name(slice))
                .string();
        emit_certificate(cert, path);
        std::cout << "slice " << format_interval(slice.alpha) << ": "
                  << to_string(cert.verdict) << " after " << cert.iterations.size()
                  << " iterations (" << format_double(cert.wall_time_seconds)
                  << " s)\n";
        std::cout << "certificate: " << path << "\n";
        if (!cert.note.empty()) std::cout << "note: " << cert.note << "\n";
        return verdict_exit_code(cert.verdict);
    }

    if (args.dump_boxes)
        throw UsageError("--dump-boxes applies to --slice runs only");
    WidthPolicy policy;
    if (args.slice_width > 0.0) {
        policy.uniform = true;
        policy.width = args.slice_width;
    }
    RangeOptions opts;
    opts.delta0 = args.delta0;
    opts.iterate_k = args.iterate_k;
    opts.out_dir = args.out_dir;
    std::mutex io_mutex;
    opts.on_slice = [&io_mutex](const SliceOutcome& o) {
        const std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << "[prove] slice " << format_interval(o.slice.alpha) << ": "
                  << (o.error.empty() ? to_string(o.certificate.verdict)
                                      : o.error.c_str())
                  << " (" << format_double(o.certificate.wall_time_seconds)
                  << " s)\n";
    };

    const Interval range = parse_decimal_interval(args.range[0], args.range[1]);
    const RangeReport report = prove_range(range, policy, args.workers, limits, opts);
    const std::string report_path =
        (std::filesystem::path(args.out_dir) / "report.json").string();
    write_text_file(report_path, canonical_dump(report_to_json(report)));

    std::int64_t proved = 0;
    bool any_resource = false;
    for (const SliceOutcome& o : report.slices) {
        proved += o.error.empty() && o.certificate.verdict == Verdict::Proved;
        any_resource = any_resource ||
                       (o.error.empty() &&
                        o.certificate.verdict == Verdict::ResourceExceeded);
    }
    std::cout << "range " << format_interval(range) << ": "
              << to_string(report.aggregate) << " (" << proved << "/"
              << report.slices.size() << " slices proved, "
              << format_double(report.wall_time_seconds) << " s)\n";
    std::cout << "report: " << report_path << "\n";
    if (!report.warning.empty()) std::cout << "warning: " << report.warning << "\n";
    if (report.aggregate == Verdict::Proved) return kExitOk;
    return any_resource ? kExitResources : kExitCertification;
}

int cmd_bifurcation_data(const std::string& lo, const std::string& hi,
                         std::int64_t n_alpha, std::int64_t n_iter,
                         std::int64_t n_keep, const std::string& out_path) {
    const double a_lo = parse_double_checked(lo);
    const double a_hi = parse_double_checked(hi);
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw RickerError("cannot open output file: " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    out << "alpha,t\n";
    for (std::int64_t j = 0; j < n_alpha; ++j) {
        const double a =
            n_alpha == 1 ? a_lo
                         : a_lo + (a_hi - a_lo) * static_cast<double>(j) /
                                      static_cast<double>(n_alpha - 1);
        // Plain floating-point iteration of t -> a e^{2(a - t)} from 0; this
        // is plot data, not a certified enclosure.
        const std::int64_t keep = std::min(n_keep, n_iter);
        std::vector<double> tail;
        tail.reserve(static_cast<std::size_t>(std::max<std::int64_t>(keep, 0)));
        double t = 0.0;
        for (std::int64_t i = 0; i < n_iter; ++i) {
            t = a * std::exp(2.0 * (a - t));
            if (i >= n_iter - keep) tail.push_back(t);
        }
        for (const double v : tail)
            out << format_double(a) << ',' << format_double(v) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified global-stability prover for the planar Ricker map"};
    app.require_subcommand(1);

    std::string a_lo, a_hi;
    double region_tol = 1e-9;
    std::int64_t region_max_iter = 1000000;
    CLI::App* region =
        app.add_subcommand("region", "Enclose the trapping square [S] for a "
                                     "parameter slice and print the h/g trace");
    region->add_option("alpha_lo", a_lo, "lower endpoint of the parameter slice")
        ->required();
    region->add_option("alpha_hi", a_hi, "upper endpoint of the parameter slice")
        ->required();
    region->add_option("--tol", region_tol, "stopping tolerance for the slice pair");
    region->add_option("--max-iter", region_max_iter, "iteration budget");

    CLI::App* neighborhood = app.add_subcommand(
        "neighborhood", "Compute the certified absorbing cube around the fixed point");
    neighborhood->add_option("alpha_lo", a_lo, "lower endpoint")->required();
    neighborhood->add_option("alpha_hi", a_hi, "upper endpoint")->required();

    std::int64_t max_subdiv = 10000;
    std::vector<std::string> override_args;
    std::string certify_out;
    CLI::App* certify = app.add_subcommand(
        "certify-constants", "Certify the stability-coefficient inequalities over "
                             "a parameter range");
    certify->add_option("alpha_lo", a_lo, "lower endpoint")->required();
    certify->add_option("alpha_hi", a_hi, "upper endpoint")->required();
    certify->add_option("--max-subdivisions", max_subdiv, "bisection budget");
    certify->add_option("--override", override_args,
                        "replace a claimed bound, e.g. g2nd=1.0 (repeatable)");
    certify->add_option("--out", certify_out, "also write the JSON certificate here");

    ProveArgs prove_args;
    CLI::App* prove = app.add_subcommand(
        "prove", "Prove global stability on a slice or a range of parameters");
    CLI::Option* slice_opt =
        prove->add_option("--slice", prove_args.slice, "one parameter slice lo hi")
            ->expected(2);
    prove->add_option("--range", prove_args.range, "parameter range lo hi, subdivided "
                                                   "into slices")
        ->expected(2)
        ->excludes(slice_opt);
    prove->add_option("--delta0", prove_args.delta0, "initial partition diameter");
    prove->add_option("--iterate-k", prove_args.iterate_k,
                      "map iterate used for transitions")
        ->check(CLI::Range(1, 3));
    prove->add_option("--workers", prove_args.workers, "concurrent slices")
        ->check(CLI::PositiveNumber);
    prove->add_option("--slice-width", prove_args.slice_width,
                      "uniform slice width instead of the per-regime defaults");
    prove->add_option("--grid-n", prove_args.grid_n,
                      "grid used by the forward-invariance check");
    prove->add_option("--max-iterations", prove_args.max_iterations,
                      "refinement iteration budget per slice");
    prove->add_option("--memory-cap-bytes", prove_args.memory_cap,
                      "memory budget; overrides RICKER_MEMORY_CAP_BYTES");
    prove->add_option("--trap-tol", prove_args.trap_tol,
                      "stopping tolerance for the trapping square");
    prove->add_option("--trap-max-iter", prove_args.trap_max_iter,
                      "iteration budget for the trapping square");
    prove->add_option("--out", prove_args.out_dir,
                      "directory for certificates and reports");
    prove->add_flag("--dump-boxes", prove_args.dump_boxes,
                    "write each iteration's survivor boxes as CSV (slice mode)");

    std::int64_t n_alpha = 0, n_iter = 0, n_keep = 0;
    std::string bif_out;
    CLI::App* bifurcation = app.add_subcommand(
        "bifurcation-data", "Emit tail iterates of the slice map tau as CSV "
                            "(nonrigorous plot data)");
    bifurcation->add_option("alpha_lo", a_lo, "first parameter value")->required();
    bifurcation->add_option("alpha_hi", a_hi, "last parameter value")->required();
    bifurcation->add_option("n_alpha", n_alpha, "number of parameter samples")
        ->required()
        ->check(CLI::NonNegativeNumber);
    bifurcation->add_option("n_iter", n_iter, "iterations per parameter")
        ->required()
        ->check(CLI::NonNegativeNumber);
    bifurcation->add_option("n_keep", n_keep, "tail length kept per parameter")
        ->required()
        ->check(CLI::NonNegativeNumber);
    bifurcation->add_option("--out", bif_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // help requested
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*region) return cmd_region(a_lo, a_hi, region_tol, region_max_iter);
        if (*neighborhood) return cmd_neighborhood(a_lo, a_hi);
        if (*certify)
            return cmd_certify_constants(a_lo, a_hi, max_subdiv, override_args,
                                         certify_out);
        if (*prove) return cmd_prove(prove_args);
        if (*bifurcation)
            return cmd_bifurcation_data(a_lo, a_hi, n_alpha, n_iter, n_keep, bif_out);
        std::cerr << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SliceTooWideError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const ResourceExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResources;
    } catch (const RickerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
