// Command-line front end: compute, stability, sample, oracle, eval.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twbeta/config.hpp"
#include "twbeta/error.hpp"
#include "twbeta/fd_solver.hpp"
#include "twbeta/interpolation.hpp"
#include "twbeta/spectral_solver.hpp"
#include "twbeta/stability_lab.hpp"
#include "twbeta/validation.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kUsage = 2, kNumerical = 3, kRefusal = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- output

struct Column {
    std::string name;
    std::vector<double> values;
};

struct OutputTable {
    std::string kind;
    nlohmann::json metadata;
    std::vector<Column> columns;
};

void check_columns(const OutputTable& t) {
    for (const auto& c : t.columns) {
        if (c.values.size() != t.columns.front().values.size()) {
            throw std::logic_error("column " + c.name + " has a different length");
        }
    }
}

void write_csv(std::ostream& os, const OutputTable& t) {
    check_columns(t);
    os << "# twbeta-" << t.kind << " v1\n";
    os << "# version: " << kVersion << '\n';
    os << "# config: " << t.metadata.dump() << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j].name;
    os << '\n';
    os << std::setprecision(17);
    const std::size_t rows = t.columns.empty() ? 0 : t.columns.front().values.size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j].values[i];
        os << '\n';
    }
}

void write_json(std::ostream& os, const OutputTable& t) {
    check_columns(t);
    nlohmann::json doc{{"format", "twbeta-" + t.kind}, {"version", 1}, {"tool_version", kVersion},
                       {"config", t.metadata}};
    for (const auto& c : t.columns) doc["columns"][c.name] = c.values;
    os << doc.dump(1) << '\n';
}

void emit(const OutputTable& t, const std::string& path, const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file) throw UsageError("cannot open " + path + " for writing");
        os = &file;
    }
    if (format == "json") {
        write_json(*os, t);
    } else {
        write_csv(*os, t);
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open " + path + " for writing");
    f << text;
}

std::filesystem::path cache_dir() {
    const char* env = std::getenv("TW_CACHE_DIR");
    std::filesystem::path dir = env && *env ? env : ".";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string config_key(const nlohmann::json& cfg) {
    std::ostringstream os;
    os << std::hex << std::hash<std::string>{}(cfg.dump());
    return os.str();
}

// ---------------------------------------------------------------- compute

struct ComputeArgs {
    double beta = 2.0;
    std::string method = "finite";
    std::optional<std::string> step;
    bool pdf = true;
    std::optional<double> x0, xN, dx;
    std::optional<int> theta_over_pi;
    std::optional<std::size_t> M, K;
    std::vector<int> levels;
    std::string out;
    std::string format = "csv";
    std::string cache;
    bool force = false;
};

tw::SolverConfig make_config(const ComputeArgs& a) {
    auto c = tw::default_config(a.beta, tw::parse_method(a.method));
    if (a.step) c.stepper = tw::parse_stepper(*a.step);
    if (a.x0) c.x0 = *a.x0;
    if (a.xN) c.xN = *a.xN;
    if (a.dx) c.dx = *a.dx;
    if (a.theta_over_pi) c.theta_over_pi = *a.theta_over_pi;
    if (a.M) c.M = *a.M;
    if (a.K) c.K = *a.K;
    if (!a.levels.empty()) c.levels = a.levels;
    c.want_pdf = a.pdf;
    c.force = a.force;
    return tw::validated(c);
}

tw::SolveResult solve(const tw::SolverConfig& c) {
    return c.method == tw::Method::Spectral ? tw::spectral::solve_spectral(c) : tw::fd::solve_fd(c);
}

int cmd_compute(const ComputeArgs& a, bool cache_requested) {
    const auto config = make_config(a);
    for (const auto& w : config.warnings) std::cerr << "warning: " << w << '\n';
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = solve(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

    OutputTable table{"table", tw::to_json(config), {}};
    table.columns.push_back({"x", result.grid.points});
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        const std::string suffix = i == 0 ? "" : "_" + std::to_string(result.levels[i]);
        table.columns.push_back({"cdf" + suffix, result.cdf[i]});
        if (config.want_pdf) table.columns.push_back({"pdf" + suffix, result.pdf[i]});
    }
    emit(table, a.out, a.format);

    std::size_t violations = 0;
    const auto& cdf = result.cdf.front();
    for (std::size_t n = 1; n < cdf.size(); ++n) {
        if (cdf[n] > cdf[n - 1] + 1e-12) ++violations;
    }
    std::cerr << "solved " << result.grid.size() << " x-levels in " << std::fixed << std::setprecision(2) << seconds
              << " s; monotonicity violations: " << violations;
    if (config.method == tw::Method::Spectral) {
        std::cerr << std::scientific << std::setprecision(3) << "; max |Im| leakage: " << result.max_imag_leakage;
    }
    std::cerr << '\n';

    if (cache_requested) {
        std::filesystem::path path = a.cache;
        if (path.empty()) path = cache_dir() / ("interpolant-" + config_key(table.metadata) + ".json");
        const auto fallback_pdf = config.want_pdf ? result.pdf.front() : std::vector<double>(cdf.size(), 0.0);
        const auto approx = tw::build_interpolants(result.grid, cdf, fallback_pdf, config.K);
        nlohmann::json doc{{"format", "twbeta-interpolant-set"},
                           {"version", 1},
                           {"config", table.metadata},
                           {"cdf", approx.cdf.to_json()}};
        if (config.want_pdf) doc["pdf"] = approx.pdf.to_json();
        write_text(path.string(), doc.dump() + "\n");
        std::cerr << "interpolant written to " << path.string() << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const std::string& path, const std::vector<double>& xs) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw tw::InvalidParameter(std::string("malformed interpolant file: ") + e.what());
    }
    if (!doc.contains("cdf")) throw tw::InvalidParameter("interpolant file has no cdf");
    const auto cdf = tw::ChebyshevInterpolant::from_json(doc["cdf"]);
    std::optional<tw::ChebyshevInterpolant> pdf;
    if (doc.contains("pdf")) pdf = tw::ChebyshevInterpolant::from_json(doc["pdf"]);
    OutputTable t{"eval", doc.value("config", nlohmann::json::object()), {{"x", xs}, {"cdf", {}}}};
    if (pdf) t.columns.push_back({"pdf", {}});
    for (double x : xs) {
        t.columns[1].values.push_back(cdf(x));
        if (pdf) t.columns[2].values.push_back((*pdf)(x));
    }
    write_csv(std::cout, t);
    return kOk;
}

// ---------------------------------------------------------------- stability

struct StabilityArgs {
    double beta = 2.0;
    std::string method = "spectral";
    std::string step = "bdf5";
    std::optional<double> dx;
    std::vector<double> sweep;
    std::optional<std::size_t> M;
    bool full = false;
    std::string out = "stability";
    std::size_t threads = 1;
};

int cmd_stability(const StabilityArgs& a, bool sweep_given) {
    auto c = tw::default_config(a.beta, tw::parse_method(a.method));
    c.stepper = tw::parse_stepper(a.step);
    const auto spec = tw::stepper_spec(c.stepper);
    c.force = true;

    if (sweep_given) {
        if (a.M) c.M = *a.M;
        std::vector<double> sweep = a.sweep.empty() ? tw::stability::default_dx_sweep(c.stepper) : a.sweep;
        std::sort(sweep.begin(), sweep.end());
        const auto result = tw::stability::window_sweep(c.stepper, tw::validated(c), sweep);
        nlohmann::json doc{{"format", "twbeta-window-sweep"}, {"version", 1}, {"config", tw::to_json(c)},
                           {"candidates", tw::stability::to_json(result)}};
        std::vector<double> flagged;
        for (const auto& s : result) {
            if (s.flagged) flagged.push_back(s.dx);
        }
        doc["flagged"] = flagged;
        write_text(a.out + "_sweep.json", doc.dump(1) + "\n");
        std::cout << "flagged dx:";
        for (double d : flagged) std::cout << ' ' << d;
        std::cout << '\n';
        return kOk;
    }

    if (!a.dx) throw UsageError("stability needs --dx or --dx-sweep");
    // dense eigen-solves at M = 8000 are slow; CI-scale default unless --full
    if (c.method == tw::Method::Spectral && !a.full) c.M = 2000;
    if (a.M) c.M = *a.M;
    c.dx = *a.dx;
    c = tw::validated(c);
    const auto report = tw::stability::eigen_scan(c, *a.dx, tw::stability::averaging_points(a.beta), a.threads);

    nlohmann::json doc = tw::stability::to_json(report);
    doc["config"] = tw::to_json(c);
    write_text(a.out + "_report.json", doc.dump(1) + "\n");

    std::ostringstream eig;
    eig << std::setprecision(17) << "x,re_z,im_z,maxroot\n";
    for (const double x : {c.xN, 0.0, c.x0}) {
        for (const auto& lambda : tw::stability::operator_eigenvalues(c, x)) {
            const auto z = *a.dx * lambda;
            eig << x << ',' << z.real() << ',' << z.imag() << ','
                << tw::stability::stability_polynomial_maxroot(spec, z) << '\n';
        }
    }
    write_text(a.out + "_eigenvalues.csv", eig.str());
    write_text(a.out + "_region.csv", tw::stability::region_csv(spec, -10.0, 30.0, -20.0, 20.0, 201, 201));
    write_text(a.out + "_locus.csv", tw::stability::locus_csv(spec, 720));

    std::cout << std::scientific << std::setprecision(4) << "<mu_l> = " << report.mean_mu_l
              << "  <mu_r> = " << report.mean_mu_r << "  <delta_l> = " << report.mean_delta_l
              << "  <delta_r> = " << report.mean_delta_r << "  <growth_l> = " << report.mean_growth_l << '\n';
    return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
    double beta = 2.0;
    long long n = 1000;
    long long samples = 1000;
    std::uint64_t seed = 1;
    std::size_t bins = 60;
    std::size_t threads = 1;
    std::string out;
    bool overlay = true;
};

int cmd_sample(const SampleArgs& a) {
    if (a.n <= 0 || a.samples <= 0) throw UsageError("--n and --samples must be positive");
    if (a.bins == 0) throw UsageError("--bins must be positive");
    const auto draws = tw::validation::sample_hermite_batch(static_cast<std::size_t>(a.n), a.beta, a.seed,
                                                            static_cast<std::size_t>(a.samples), a.threads);
    std::vector<double> values;
    values.reserve(draws.size());
    for (const auto& d : draws) values.push_back(d.rescaled);
    const nlohmann::json meta{{"beta", a.beta}, {"n", a.n}, {"samples", a.samples}, {"seed", a.seed}, {"bins", a.bins}};

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(a.bins);
    std::vector<double> centers(a.bins), density(a.bins, 0.0), pdf(a.bins, 0.0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        density[std::min(b, a.bins - 1)] += 1.0;
    }
    for (std::size_t b = 0; b < a.bins; ++b) {
        centers[b] = lo + (static_cast<double>(b) + 0.5) * width;
        density[b] /= static_cast<double>(values.size()) * width;
    }
    if (a.overlay) {
        auto c = tw::validated(tw::default_config(a.beta, tw::Method::FiniteDifference));
        const auto r = tw::fd::solve_fd(c);
        const auto pdf_fit = tw::build_interpolant(r.grid, r.pdf.front(), c.K, tw::InterpolantKind::Pdf);
        for (std::size_t b = 0; b < a.bins; ++b) pdf[b] = pdf_fit(centers[b]);
    }
    OutputTable hist{"histogram", meta, {{"bin_center", centers}, {"density", density}, {"pdf", pdf}}};
    OutputTable raw{"samples", meta, {{"seed", {}}, {"n", {}}, {"beta", {}}, {"lambda_max", {}}, {"rescaled", values}}};
    for (std::size_t i = 0; i < draws.size(); ++i) {
        raw.columns[0].values.push_back(static_cast<double>(a.seed + i));
        raw.columns[1].values.push_back(static_cast<double>(draws[i].n));
        raw.columns[2].values.push_back(draws[i].beta);
        raw.columns[3].values.push_back(draws[i].lambda_max);
    }
    if (a.out.empty()) {
        write_csv(std::cout, hist);
    } else {
        emit(hist, a.out + "_histogram.csv", "csv");
        emit(raw, a.out + "_samples.csv", "csv");
    }
    return kOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(std::size_t points, double lo, double hi, const std::string& out) {
    if (!(hi > lo)) throw UsageError("need lo < hi");
    const auto rows = tw::validation::oracle_table(points, lo, hi);
    OutputTable t{"oracle", {{"beta", 2}, {"points", points}, {"lo", lo}, {"hi", hi}}, {{"x", {}}, {"F2", {}}, {"F2_pdf", {}}}};
    for (const auto& r : rows) {
        t.columns[0].values.push_back(r.x);
        t.columns[1].values.push_back(r.F2);
        t.columns[2].values.push_back(r.F2_pdf);
    }
    emit(t, out, "csv");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tracy-Widom distributions for general beta"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "solve for the cdf (and pdf) on a grid");
    compute->add_option("--beta", ca.beta, "inverse temperature")->check(CLI::PositiveNumber);
    compute->add_option("--method", ca.method, "finite or spectral")->check(CLI::IsMember({"finite", "spectral"}));
    compute->add_option("--step", ca.step, "trapz, bdf3, bdf4, bdf5 or bdf6");
    compute->add_option("--pdf", ca.pdf, "also compute the density (true/false)")->expected(0, 1)->default_str("true");
    compute->add_option("--x0", ca.x0);
    compute->add_option("--xN", ca.xN);
    compute->add_option("--dx", ca.dx);
    compute->add_option("--theta-m-over-pi", ca.theta_over_pi);
    compute->add_option("--M", ca.M);
    compute->add_option("--K", ca.K);
    compute->add_option("--levels", ca.levels, "levels k of H(x, k*pi)")->delimiter(',');
    compute->add_option("--out", ca.out, "output file (stdout if omitted)");
    compute->add_option("--format", ca.format)->check(CLI::IsMember({"csv", "json"}));
    auto* cache_opt = compute->add_option("--cache-interpolant", ca.cache, "write Chebyshev interpolants (file, or TW_CACHE_DIR)")
                          ->expected(0, 1);
    compute->add_flag("--force", ca.force, "allow dx inside a known instability window");

    std::string eval_path;
    std::vector<double> eval_x;
    auto* eval = app.add_subcommand("eval", "evaluate a cached interpolant");
    eval->add_option("--interpolant", eval_path)->required();
    eval->add_option("--x", eval_x)->required()->delimiter(',');

    StabilityArgs sa;
    auto* stability = app.add_subcommand("stability", "eigenvalue scans and dx sweeps");
    stability->add_option("--beta", sa.beta)->check(CLI::PositiveNumber);
    stability->add_option("--method", sa.method)->check(CLI::IsMember({"finite", "spectral"}));
    stability->add_option("--step", sa.step);
    stability->add_option("--dx", sa.dx);
    auto* sweep_opt = stability->add_option("--dx-sweep", sa.sweep, "dx candidates (defaults per stepper)")
                          ->expected(0, -1)
                          ->delimiter(',');
    stability->add_option("--M", sa.M);
    stability->add_flag("--full", sa.full, "spectral eigen-scans at the production M");
    stability->add_option("--out", sa.out, "output file prefix");
    stability->add_option("--threads", sa.threads)->check(CLI::PositiveNumber);

    SampleArgs sm;
    auto* sample = app.add_subcommand("sample", "beta-Hermite Monte Carlo");
    sample->add_option("--beta", sm.beta)->check(CLI::PositiveNumber);
    sample->add_option("--n", sm.n);
    sample->add_option("--samples", sm.samples);
    sample->add_option("--seed", sm.seed);
    sample->add_option("--bins", sm.bins);
    sample->add_option("--threads", sm.threads)->check(CLI::PositiveNumber);
    sample->add_option("--out", sm.out, "output file prefix");
    sample->add_flag("!--no-overlay", sm.overlay, "skip the computed pdf column");

    std::size_t oracle_points = 2001;
    double oracle_lo = -10.0, oracle_hi = 9.0;
    std::string oracle_out;
    auto* oracle = app.add_subcommand("oracle", "beta = 2 reference table from the Airy-kernel determinant");
    oracle->add_option("--points", oracle_points);
    oracle->add_option("--lo", oracle_lo);
    oracle->add_option("--hi", oracle_hi);
    oracle->add_option("--out", oracle_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*compute) return cmd_compute(ca, cache_opt->count() > 0);
        if (*eval) return cmd_eval(eval_path, eval_x);
        if (*stability) {
            if (sweep_opt->count() > 0) {
                for (const auto& tok : sweep_opt->results()) {
                    if (tok.empty() || tok == ",") throw UsageError("empty --dx-sweep list");
                }
            }
            return cmd_stability(sa, sweep_opt->count() > 0);
        }
        if (*sample) return cmd_sample(sm);
        if (*oracle) return cmd_oracle(oracle_points, oracle_lo, oracle_hi, oracle_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const tw::StabilityRefusal& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kRefusal;
    } catch (const tw::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const tw::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
