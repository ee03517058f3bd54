// cantor-energy: command-line front end for the Cantor-group potential
// toolkit. Exit codes: 0 success, 2 usage or validation error, 3 inconclusive
// dimension estimate, 4 internal invariant violation.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cantor/dimension.hpp"
#include "cantor/energy.hpp"
#include "cantor/kernel.hpp"
#include "cantor/measure_io.hpp"
#include "cantor/parallel.hpp"
#include "report.hpp"

namespace cantor::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitInvariant = 4;

/// Cross-method agreement demanded by `energy --method all` and `bench`.
constexpr double kSelfCheckTolerance = 1e-8;

class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string out;
    std::string format = "csv";
    unsigned threads = default_thread_count();
    std::uint64_t seed = 1;
};

double parse_real(const std::string& text, const std::string& flag)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw UsageError(flag + ": '" + text + "' is not a number");
}

long long parse_integer(std::string_view text, const std::string& flag)
{
    long long v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw UsageError(flag + ": '" + std::string(text) + "' is not an integer");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) {
            parts.push_back(item);
        }
    }
    return parts;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag)
{
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        out.push_back(parse_real(part, flag));
    }
    if (out.empty()) {
        throw UsageError(flag + ": empty list");
    }
    return out;
}

/// "a..b" (inclusive) or a single integer.
std::pair<long long, long long> parse_range(const std::string& text, const std::string& flag)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const long long v = parse_integer(text, flag);
        return {v, v};
    }
    const long long a = parse_integer(std::string_view(text).substr(0, dots), flag);
    const long long b = parse_integer(std::string_view(text).substr(dots + 2), flag);
    if (b < a) {
        throw UsageError(flag + ": empty range '" + text + "'");
    }
    return {a, b};
}

Cell optional_cell(std::optional<int> v) { return v ? Cell(static_cast<long long>(*v)) : Cell(); }

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_s_list(const std::vector<double>& values)
{
    for (const double s : values) {
        check_exponent(s);
    }
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    std::string kind;
    int levels = 0;
    int level = 0;
    long long index = 0;
    std::string zeros;
    int keep_every = 0;
    std::string p;
    double sparsity = 0.0;
    std::string encoding = "f64le";
};

int run_gen(const GenOptions& o, const GlobalOptions& g, CLI::App& cmd, Report& report)
{
    if (g.out.empty()) {
        throw UsageError("gen: --out PATH is required for the measure file");
    }
    const auto only_for = [&cmd](const char* flag, const char* kind, const std::string& actual) {
        if (cmd.count(flag) > 0 && actual != kind) {
            throw UsageError(std::string(flag) + " is only valid with 'gen " + kind + "', not 'gen " + actual + "'");
        }
    };
    only_for("--level", "cylinder", o.kind);
    only_for("--index", "cylinder", o.kind);
    only_for("--zeros", "pattern", o.kind);
    only_for("--keep-every", "pattern", o.kind);
    only_for("--p", "bernoulli", o.kind);
    only_for("--sparsity", "random", o.kind);

    const Resolution resolution(o.levels);
    std::optional<CylinderMeasure> mu;
    if (o.kind == "haar") {
        mu = haar(resolution);
    } else if (o.kind == "cylinder") {
        if (o.level > o.levels || o.level < 0) {
            throw UsageError("--level must lie in [0, --n]");
        }
        if (o.index < 0) {
            throw UsageError("--index must be non-negative");
        }
        mu = cylinder_uniform(CylinderId(o.level, static_cast<Word>(o.index)), resolution);
    } else if (o.kind == "pattern") {
        std::vector<int> zeros;
        if (cmd.count("--keep-every") > 0) {
            zeros = non_multiples(o.keep_every, o.levels);
        } else if (o.zeros == "even") {
            zeros = even_coordinates(o.levels);
        } else if (cmd.count("--zeros") > 0) {
            for (const auto& part : split(o.zeros, ',')) {
                zeros.push_back(static_cast<int>(parse_integer(part, "--zeros")));
            }
        }
        mu = pattern_measure(zeros, resolution);
    } else if (o.kind == "bernoulli") {
        if (o.p.empty()) {
            throw UsageError("gen bernoulli requires --p");
        }
        std::vector<double> p = parse_real_list(o.p, "--p");
        if (p.size() == 1) {
            p.assign(static_cast<std::size_t>(o.levels), p.front());
        }
        if (p.size() != static_cast<std::size_t>(o.levels)) {
            throw UsageError("--p needs one value or exactly --n values");
        }
        mu = bernoulli_product(p);
    } else {
        mu = random_measure(g.seed, resolution, o.sparsity);
    }

    write_measure(*mu, std::filesystem::path(g.out), parse_encoding(o.encoding));
    report.resolution = o.levels;
    report.columns = {"kind", "n", "total_mass", "support_size", "path", "encoding"};
    report.rows.push_back({o.kind, static_cast<long long>(o.levels), mu->total_mass(),
                           static_cast<long long>(mu->support_size()), g.out, o.encoding});
    std::cerr << "wrote " << o.kind << " measure (N = " << o.levels << ", total mass "
              << format_real(mu->total_mass(), 6) << ", support " << mu->support_size() << ") to " << g.out
              << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- spectrum

int run_spectrum(const std::string& in, std::optional<long long> kmax, const GlobalOptions& g, Report& report)
{
    const CylinderMeasure mu = read_measure(std::filesystem::path(in));
    const WalshSpectrum spec = spectrum(mu, g.threads);
    const auto limit = static_cast<Word>(kmax.value_or(static_cast<long long>(spec.coeffs.size())));
    if (kmax && (*kmax < 1 || limit > spec.coeffs.size())) {
        throw UsageError("--kmax must lie in [1, 2^N]");
    }
    report.resolution = mu.levels();
    report.add_summary("total_mass", mu.total_mass());
    report.columns = {"k", "block", "coefficient"};
    for (Word k = 0; k < limit; ++k) {
        report.rows.push_back({static_cast<long long>(k), static_cast<long long>(dyadic_block(k)), spec.coeffs[k]});
    }
    return kExitOk;
}

// ---------------------------------------------------------------- kernel

int run_kernel(double s, std::optional<int> trunc, const std::string& k_range, std::optional<int> oracle,
               Report& report)
{
    const KernelSpec spec(s, trunc);
    const auto [k_lo, k_hi] = parse_range(k_range, "--k");
    if (k_lo < 0) {
        throw UsageError("--k must be non-negative");
    }
    if (k_hi - k_lo >= (1LL << 24)) {
        throw UsageError("--k range too large (at most 2^24 rows)");
    }
    std::optional<Resolution> quad;
    if (oracle) {
        quad = Resolution(*oracle);
        report.resolution = *oracle;
    }
    report.add_summary("s", s);
    report.add_summary("truncation", optional_cell(trunc));
    report.columns = {"k", "block", "coefficient"};
    if (quad) {
        report.columns.push_back("quadrature");
    }
    for (long long k = k_lo; k <= k_hi; ++k) {
        const auto word = static_cast<Word>(k);
        std::vector<Cell> row{k, static_cast<long long>(dyadic_block(word)), spec.coefficient(word)};
        if (quad) {
            row.push_back(word < quad->size() ? Cell(coefficient_quadrature(s, trunc, word, *quad)) : Cell());
        }
        report.rows.push_back(std::move(row));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- potential

int run_potential(const std::string& in, double s, std::optional<int> trunc, const GlobalOptions& g, Report& report)
{
    const CylinderMeasure mu = read_measure(std::filesystem::path(in));
    const PotentialField field = potential(mu, s, trunc, g.threads);
    report.resolution = mu.levels();
    report.add_summary("s", s);
    report.add_summary("truncation", optional_cell(trunc));
    report.columns = {"cell", "mass", "potential"};
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        report.rows.push_back({static_cast<long long>(i), mu.masses()[i], field.values[i]});
    }
    return kExitOk;
}

// ---------------------------------------------------------------- energy

int run_energy(const std::string& in, const std::vector<double>& s_values, const std::string& method,
               std::optional<int> trunc, const GlobalOptions& g, Report& report)
{
    check_s_list(s_values);
    std::vector<EnergyMethod> methods;
    if (method == "all") {
        methods = {EnergyMethod::naive, EnergyMethod::hierarchical, EnergyMethod::spectral};
    } else {
        methods = {parse_method(method)};
    }
    const CylinderMeasure mu = read_measure(std::filesystem::path(in));
    if (mu.levels() > kNaiveMaxLevels &&
        std::find(methods.begin(), methods.end(), EnergyMethod::naive) != methods.end()) {
        throw UsageError("the naive method enumerates 4^N pairs and is refused at N = " +
                         std::to_string(mu.levels()) + " > " + std::to_string(kNaiveMaxLevels) +
                         "; use --method hierarchical or --method spectral");
    }
    report.resolution = mu.levels();
    report.columns = {"s", "n", "truncation", "method", "value", "seconds", "deviation"};
    double worst = 0.0;
    for (const double s : s_values) {
        std::vector<double> values;
        std::vector<std::vector<Cell>> rows;
        for (const EnergyMethod m : methods) {
            const auto start = std::chrono::steady_clock::now();
            const EnergyResult r = energy(mu, s, trunc, m, g.threads);
            const double secs = seconds_since(start);
            values.push_back(r.value);
            rows.push_back({s, static_cast<long long>(mu.levels()), optional_cell(trunc), std::string(method_name(m)),
                            r.value, secs, Cell()});
        }
        if (methods.size() > 1) {
            const double dev = max_relative_deviation(values);
            worst = std::max(worst, dev);
            for (auto& row : rows) {
                row.back() = dev;
            }
        }
        for (auto& row : rows) {
            report.rows.push_back(std::move(row));
        }
    }
    if (methods.size() > 1) {
        report.add_summary("max_deviation", worst);
        if (worst > kSelfCheckTolerance) {
            report.add_summary("status", std::string("invariant violation"));
            return kExitInvariant;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- dim

struct DimOptions {
    std::string in;
    double tol = 1.0 / 64.0;
    double eps_b = 0.01;
    double eps_d = 0.05;
    std::optional<int> window;
    int n_min = 1;
};

Cell verdict_cell(std::optional<Verdict> v) { return v ? Cell(std::string(verdict_name(*v))) : Cell(); }

int run_dim(const DimOptions& o, Report& report)
{
    const CylinderMeasure mu = read_measure(std::filesystem::path(o.in));
    const LevelMassTable table(mu);
    const Thresholds thresholds{o.eps_b, o.eps_d};
    const double box = box_counting_dim(table, o.n_min);
    report.resolution = mu.levels();
    report.columns = {"s", "verdict", "growth_ratio"};
    try {
        const DimensionEstimate est = dim_lower_bound(table, o.tol, thresholds, o.window);
        report.add_summary("status", std::string("resolved"));
        report.add_summary("lower_bound", est.lower_bound);
        report.add_summary("s_finite", est.s_finite);
        report.add_summary("s_divergent", est.s_divergent);
        report.add_summary("finite_verdict", verdict_cell(est.finite_verdict));
        report.add_summary("divergent_verdict", verdict_cell(est.divergent_verdict));
        report.add_summary("tolerance", o.tol);
        report.add_summary("box_dim", box);
        report.add_summary("sandwich", std::string(est.lower_bound <= box + 0.05 ? "ok" : "violated"));
        for (const Classification& c : est.probes) {
            report.rows.push_back({c.s, std::string(verdict_name(c.verdict)), c.growth_ratio});
        }
        return kExitOk;
    } catch (const InconclusiveError& e) {
        report.add_summary("status", std::string("inconclusive"));
        report.add_summary("box_dim", box);
        report.add_summary("message", std::string(e.what()));
        for (const EnergyProfile& p : e.profiles()) {
            report.rows.push_back({p.s, std::string("inconclusive"), p.growth_ratio});
        }
        return kExitInconclusive;
    }
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
    std::string n_range = "8..12";
    double s = 0.5;
    int repeats = 3;
    std::string methods = "naive,hierarchical,spectral";
    double sparsity = 0.0;
};

int run_bench(const BenchOptions& o, const GlobalOptions& g, Report& report)
{
    check_exponent(o.s);
    if (o.repeats < 1) {
        throw UsageError("--repeats must be >= 1");
    }
    const auto [n_lo, n_hi] = parse_range(o.n_range, "--n");
    if (n_lo < 1 || n_hi > kDefaultMaxLevels) {
        throw UsageError("bench --n must lie within [1, " + std::to_string(kDefaultMaxLevels) + "]");
    }
    std::vector<EnergyMethod> methods;
    for (const auto& name : split(o.methods, ',')) {
        methods.push_back(parse_method(name));
    }
    report.add_summary("s", o.s);
    report.add_summary("repeats", static_cast<long long>(o.repeats));
    report.columns = {"n", "method", "status", "median_seconds", "elements_per_second", "value", "deviation"};

    std::vector<std::vector<std::pair<double, double>>> timings(methods.size());  // (n, log2 seconds)
    double worst = 0.0;
    for (long long n = n_lo; n <= n_hi; ++n) {
        const CylinderMeasure mu = random_measure(g.seed + static_cast<std::uint64_t>(n), Resolution(static_cast<int>(n)), o.sparsity);
        std::vector<double> values;
        std::vector<std::vector<Cell>> rows;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const EnergyMethod m = methods[mi];
            if (m == EnergyMethod::naive && n > kNaiveMaxLevels) {
                rows.push_back({n, std::string(method_name(m)), std::string("refused"), Cell(), Cell(), Cell(), Cell()});
                continue;
            }
            std::vector<double> secs;
            double first_value = 0.0;
            for (int r = 0; r < o.repeats; ++r) {
                const auto start = std::chrono::steady_clock::now();
                const double v = energy(mu, o.s, std::nullopt, m, g.threads).value;
                secs.push_back(seconds_since(start));
                if (r == 0) {
                    first_value = v;
                } else if (v != first_value) {
                    throw InvariantViolation("bench: " + std::string(method_name(m)) +
                                             " returned different values across repeats");
                }
            }
            std::sort(secs.begin(), secs.end());
            const double median = secs[secs.size() / 2];
            values.push_back(first_value);
            timings[mi].emplace_back(static_cast<double>(n), std::log2(std::max(median, 1e-9)));
            rows.push_back({n, std::string(method_name(m)), std::string("ok"), median,
                            static_cast<double>(std::size_t{1} << n) / std::max(median, 1e-9), first_value, Cell()});
        }
        const double dev = max_relative_deviation(values);
        worst = std::max(worst, dev);
        for (auto& row : rows) {
            if (std::get<std::string>(row[2]) == "ok" && values.size() > 1) {
                row.back() = dev;
            }
            report.rows.push_back(std::move(row));
        }
    }
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto& pts = timings[mi];
        Cell slope;
        if (pts.size() >= 2) {
            double mx = 0.0;
            double my = 0.0;
            for (const auto& [x, y] : pts) {
                mx += x;
                my += y;
            }
            mx /= static_cast<double>(pts.size());
            my /= static_cast<double>(pts.size());
            double sxy = 0.0;
            double sxx = 0.0;
            for (const auto& [x, y] : pts) {
                sxy += (x - mx) * (y - my);
                sxx += (x - mx) * (x - mx);
            }
            slope = sxy / sxx;
        }
        report.add_summary("log2_time_slope_" + std::string(method_name(methods[mi])), slope);
    }
    report.add_summary("max_deviation", worst);
    return worst > kSelfCheckTolerance ? kExitInvariant : kExitOk;
}

void emit(const Report& report, const GlobalOptions& g, bool to_stdout)
{
    if (to_stdout || g.out.empty()) {
        g.format == "json" ? write_json(report, std::cout) : write_csv(report, std::cout);
        return;
    }
    std::ofstream out(g.out, std::ios::trunc);
    if (!out) {
        throw UsageError("cannot open '" + g.out + "' for writing");
    }
    g.format == "json" ? write_json(report, out) : write_csv(report, out);
}

int run(int argc, char** argv)
{
    CLI::App app{"Potential theory toolkit for the Cantor dyadic group"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kToolVersion));

    GlobalOptions g;
    app.add_option("--out", g.out, "Output path (report, or the measure file for gen)");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", g.threads, "Worker threads (1 = sequential reference path)")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", g.seed, "Seed for random measures");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a measure file");
    gen_cmd->add_option("kind", gen.kind, "haar | cylinder | pattern | bernoulli | random")
        ->required()
        ->check(CLI::IsMember({"haar", "cylinder", "pattern", "bernoulli", "random"}));
    gen_cmd->add_option("--n", gen.levels, "Resolution N")->required()->check(CLI::Range(1, kMaxLevels));
    gen_cmd->add_option("--level", gen.level, "Cylinder level (cylinder)");
    gen_cmd->add_option("--index", gen.index, "Cylinder index (cylinder)");
    auto* zeros_opt = gen_cmd->add_option("--zeros", gen.zeros, "Zeroed coordinates: list like 2,4,6 or 'even' (pattern)");
    auto* keep_opt = gen_cmd->add_option("--keep-every", gen.keep_every,
                                         "Zero every coordinate not divisible by P (pattern)");
    zeros_opt->excludes(keep_opt);
    keep_opt->excludes(zeros_opt);
    gen_cmd->add_option("--p", gen.p, "P(x_j = 1): one value or N comma-separated values (bernoulli)");
    gen_cmd->add_option("--sparsity", gen.sparsity, "Probability that a cell is empty (random)");
    gen_cmd->add_option("--encoding", gen.encoding, "Payload encoding")->check(CLI::IsMember({"f64le", "json"}));

    std::string in;
    std::string s_text;
    std::optional<int> trunc;

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Walsh-Fourier coefficients of a measure");
    std::optional<long long> kmax;
    spectrum_cmd->add_option("--in", in, "Measure file")->required();
    spectrum_cmd->add_option("--kmax", kmax, "Report k < kmax");

    auto* kernel_cmd = app.add_subcommand("kernel", "Walsh-Fourier coefficients of the s-kernel");
    double kernel_s = 0.5;
    std::string k_range = "0..15";
    std::optional<int> oracle;
    kernel_cmd->add_option("--s", kernel_s, "Exponent s in (0, 1)")->required();
    kernel_cmd->add_option("--trunc", trunc, "Truncation level n");
    kernel_cmd->add_option("--k", k_range, "Index or inclusive range a..b");
    kernel_cmd->add_option("--oracle", oracle, "Add a quadrature column at resolution R")->check(CLI::Range(1, 24));

    auto* potential_cmd = app.add_subcommand("potential", "s-potential on every cell");
    double potential_s = 0.5;
    potential_cmd->add_option("--in", in, "Measure file")->required();
    potential_cmd->add_option("--s", potential_s, "Exponent s in (0, 1)")->required();
    potential_cmd->add_option("--trunc", trunc, "Truncation level n");

    auto* energy_cmd = app.add_subcommand("energy", "s-energy by one or all methods");
    std::string method = "all";
    energy_cmd->add_option("--in", in, "Measure file")->required();
    energy_cmd->add_option("--s", s_text, "Exponent(s), comma-separated")->required();
    energy_cmd->add_option("--method", method, "naive | hierarchical | spectral | all")
        ->check(CLI::IsMember({"naive", "hierarchical", "spectral", "all"}));
    energy_cmd->add_option("--trunc", trunc, "Truncation level n");

    auto* dim_cmd = app.add_subcommand("dim", "Dimension lower bound from energy growth");
    DimOptions dim;
    dim_cmd->add_option("--in", dim.in, "Measure file")->required();
    dim_cmd->add_option("--tol", dim.tol, "Bracket width");
    dim_cmd->add_option("--eps-b", dim.eps_b, "Bounded threshold on the growth ratio");
    dim_cmd->add_option("--eps-d", dim.eps_d, "Divergent threshold on the growth ratio");
    dim_cmd->add_option("--window", dim.window, "Trailing levels used in the growth fit");
    dim_cmd->add_option("--n-min", dim.n_min, "First level of the box-counting fit");

    auto* bench_cmd = app.add_subcommand("bench", "Time the three energy algorithms");
    BenchOptions bench;
    bench_cmd->add_option("--n", bench.n_range, "Resolution range a..b");
    bench_cmd->add_option("--s", bench.s, "Exponent s in (0, 1)");
    bench_cmd->add_option("--repeats", bench.repeats, "Timed repeats per (N, method)");
    bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods");
    bench_cmd->add_option("--sparsity", bench.sparsity, "Sparsity of the random measures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Report report;
    for (int i = 1; i < argc; ++i) {
        report.args.emplace_back(argv[i]);
    }
    try {
        int code = kExitOk;
        bool to_stdout = false;
        if (*gen_cmd) {
            code = run_gen(gen, g, *gen_cmd, report);
            to_stdout = true;
        } else if (*spectrum_cmd) {
            code = run_spectrum(in, kmax, g, report);
        } else if (*kernel_cmd) {
            code = run_kernel(kernel_s, trunc, k_range, oracle, report);
        } else if (*potential_cmd) {
            code = run_potential(in, potential_s, trunc, g, report);
        } else if (*energy_cmd) {
            code = run_energy(in, parse_real_list(s_text, "--s"), method, trunc, g, report);
        } else if (*dim_cmd) {
            code = run_dim(dim, report);
        } else if (*bench_cmd) {
            code = run_bench(bench, g, report);
        }
        emit(report, g, to_stdout);
        if (code == kExitInvariant) {
            std::cerr << "error: cross-method deviation exceeds " << kSelfCheckTolerance << '\n';
        }
        return code;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvariantViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
}

}  // namespace
}  // namespace cantor::cli

int main(int argc, char** argv)
{
    try {
        return cantor::cli::run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
