#include <polyimage/complement.hpp>
#include <polyimage/errors.hpp>
#include <polyimage/interior_complement.hpp>
#include <polyimage/skyscraper.hpp>
#include <polyimage/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace polyimage;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kSynthesis = 2;
constexpr int kVerification = 3;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

void emit(const std::string& path, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text(path, text);
}

bool is_complement(const std::string& target) {
    if (target == "complement") return true;
    if (target == "interior-complement") return false;
    throw ValidationError("unknown target '" + target + "'");
}

std::string chain_target(const MapChain& chain, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (chain.meta.is_object() && chain.meta.contains("target")) return chain.meta["target"].get<std::string>();
    throw ValidationError("the chain carries no target; pass --target");
}

struct SynthesizeArgs {
    std::string input, target, out, trace, compact_base;
};

int run_synthesize(const SynthesizeArgs& a) {
    Polyhedron k = Polyhedron::from_json(read_json(a.input));
    CompactBaseProvider provider;
    if (!a.compact_base.empty()) provider = provider_from_json(read_json(a.compact_base));
    SynthesisResult r = is_complement(a.target) ? synthesize_complement(k, provider)
                                                : synthesize_interior_complement(k, provider);
    emit(a.out, r.chain.to_json());
    if (!a.trace.empty()) emit(a.trace, r.trace);
    return kOk;
}

struct EvaluateArgs {
    std::string chain, point;
};

int run_evaluate(const EvaluateArgs& a) {
    MapChain chain = MapChain::from_json(read_json(a.chain));
    Vec x = parse_point(a.point);
    if (x.size() != chain.dim())
        throw ValidationError("point has " + std::to_string(x.size()) + " coordinates, chain expects " +
                              std::to_string(chain.dim()));
    std::cout << format_point(chain.eval(x)) << "\n";
    return kOk;
}

struct VerifyArgs {
    std::string chain, poly, mode, report, target;
    std::size_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> window, grid_step, min_coverage;
    double sample_window = 20;
    bool timing = false;
};

int run_verify(const VerifyArgs& a) {
    Polyhedron k = Polyhedron::from_json(read_json(a.poly));
    VerificationReport rep;
    double min_cov = 0;
    bool coverage_gate = false;

    if (a.mode == "containment" || a.mode == "coverage") {
        if (a.chain.empty()) throw ValidationError("--chain is required for mode " + a.mode);
        MapChain chain = MapChain::from_json(read_json(a.chain));
        if (chain.dim() != k.dim) throw ValidationError("chain and polyhedron dimensions differ");
        bool comp = is_complement(chain_target(chain, a.target));
        SamplingOptions opts;
        opts.window = a.sample_window;
        std::size_t n = a.samples ? a.samples : 100000;
        RegionSpec domain = RegionSpec::universe(k.dim);
        if (a.mode == "containment") {
            RegionSpec forbidden{k, comp ? RegionMode::Closed : RegionMode::Interior, {}};
            rep = check_containment(chain, domain, forbidden, n, *a.seed, opts);
        } else {
            RegionSpec target{k, comp ? RegionMode::Complement : RegionMode::InteriorComplement, {}};
            Box box = Box::cube(k.dim, a.window.value_or(10));
            rep = check_coverage(chain, domain, target, box, a.grid_step.value_or(0.25), n, *a.seed, opts);
            min_cov = a.min_coverage.value_or(comp ? 0.98 : 0.99);
            coverage_gate = true;
        }
    } else if (a.mode == "lemma52") {
        LineProbeOptions opts;
        opts.window = a.window.value_or(opts.window);
        opts.grid_step = a.grid_step.value_or(opts.grid_step);
        opts.min_coverage = a.min_coverage.value_or(opts.min_coverage);
        rep = check_line_behavior(k, a.samples ? a.samples : 10, *a.seed, opts);
    } else if (a.mode == "levelcurve") {
        std::vector<Scalar> lambdas{Scalar(-3), Scalar(-1), Scalar(1), Scalar(3)};
        rep = check_level_curves(k, lambdas, a.samples ? a.samples : 100, a.window.value_or(10), *a.seed);
    } else {
        throw ValidationError("unknown mode '" + a.mode + "'");
    }

    if (coverage_gate) {
        rep.diagnostics["min_coverage"] = min_cov;
        rep.passed = rep.coverage_fraction && *rep.coverage_fraction >= min_cov;
    }
    emit(a.report, rep.to_json(a.timing));
    if (!rep.passed) {
        json err{{"error", "VerificationFailed"}, {"check", rep.check}, {"violations", rep.violation_count}};
        if (rep.coverage_fraction) err["coverage_fraction"] = *rep.coverage_fraction;
        std::cerr << err.dump() << "\n";
        return kVerification;
    }
    return kOk;
}

struct ProbeArgs {
    std::string poly, point;
};

int run_probe(const ProbeArgs& a) {
    Polyhedron k = Polyhedron::from_json(read_json(a.poly));
    Polyhedron km = minimal_presentation(k);
    json out{{"dim", k.dim}, {"minimal", km.to_json()}};
    out["implicit_equalities"] = implicit_equalities(km);
    out["bounded"] = is_bounded(km);
    out["degenerate"] = is_degenerate(km);
    out["layer"] = is_layer(km);
    out["bounded_position"] = in_bounded_position(km);
    if (km.dim >= 2 && !km.constraints.empty() && !is_degenerate(km)) out["delta"] = compute_delta(km).to_json();
    if (!a.point.empty()) {
        Vec x = parse_point(a.point);
        if (x.size() != k.dim) throw ValidationError("point dimension does not match the polyhedron");
        out["point"] = format_point(x);
        out["contains"] = k.contains(x);
        out["interior"] = k.contains_interior(x);
        try {
            out["region"] = to_string(classify_region(km, x));
        } catch (const Error& e) {
            out["region_error"] = e.to_json();
        }
    }
    emit("", out);
    return kOk;
}

struct PlotArgs {
    std::string chain, poly, out;
    double window = 10;
    double sample_window = 20;
    std::size_t samples = 20000;
    std::uint64_t seed = 1;
};

int run_plot(const PlotArgs& a) {
    MapChain chain = MapChain::from_json(read_json(a.chain));
    Polyhedron k = Polyhedron::from_json(read_json(a.poly));
    std::size_t n = chain.dim();
    if (k.dim != n) throw ValidationError("chain and polyhedron dimensions differ");
    if (n < 1 || n > 3) throw ValidationError("plot data is only produced for dimensions 1 to 3");
    CompiledChain cc(chain);
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> dom(-a.sample_window, a.sample_window);
    std::uniform_real_distribution<double> box(-a.window, a.window);

    std::ostringstream csv;
    csv.precision(10);
    const char* names[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < n; ++i) csv << names[i] << ",";
    csv << "tag\n";
    auto row = [&](const std::vector<double>& p, const char* tag) {
        for (double v : p) csv << v << ",";
        csv << tag << "\n";
    };
    auto inside = [&](const std::vector<double>& p) {
        for (double v : p)
            if (!(std::fabs(v) <= a.window)) return false;
        return true;
    };

    std::vector<double> x(n), y(n);
    for (std::size_t s = 0; s < a.samples; ++s) {
        for (auto& v : x) v = dom(rng);
        if (cc.eval(x.data(), y.data()) && inside(y)) row(y, "image");
    }
    // Boundary of K: window points pushed onto each constraint hyperplane.
    std::size_t per_facet = std::max<std::size_t>(a.samples / 10, 1);
    for (const auto& h : k.constraints) {
        std::vector<double> g(n);
        double gg = 0;
        for (std::size_t i = 0; i < n; ++i) gg += (g[i] = h.gradient[i].get_d()) * g[i];
        if (gg == 0) continue;
        for (std::size_t s = 0; s < per_facet; ++s) {
            for (auto& v : x) v = box(rng);
            double t = h(x.data()) / gg;
            for (std::size_t i = 0; i < n; ++i) x[i] -= t * g[i];
            bool ok = true;
            for (const auto& o : k.constraints) ok &= &o == &h || o(x.data()) >= 0;
            if (ok && inside(x)) row(x, "boundary");
        }
    }
    write_text(a.out, csv.str());
    return kOk;
}

int report_error(const Error& e, int code) {
    std::cerr << e.to_json().dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial maps onto complements of convex polyhedra"};
    app.require_subcommand(1);

    SynthesizeArgs sa;
    auto* syn = app.add_subcommand("synthesize", "Build a polynomial map chain for a polyhedron");
    syn->add_option("--input", sa.input, "Polyhedron JSON")->required()->check(CLI::ExistingFile);
    syn->add_option("--target", sa.target, "complement or interior-complement")
        ->required()
        ->check(CLI::IsMember({"complement", "interior-complement"}));
    syn->add_option("--out", sa.out, "Chain JSON output")->required();
    syn->add_option("--trace", sa.trace, "Synthesis trace JSON output");
    syn->add_option("--compact-base", sa.compact_base, "Provider JSON for compact recursion nodes")
        ->check(CLI::ExistingFile);

    EvaluateArgs ea;
    auto* ev = app.add_subcommand("evaluate", "Evaluate a chain exactly at a rational point");
    ev->add_option("--chain", ea.chain, "Chain JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("--point", ea.point, "Comma-separated rationals p/q")->required();

    VerifyArgs va;
    std::uint64_t seed = 0;
    double window = 0, grid = 0, min_cov = 0;
    auto* ver = app.add_subcommand("verify", "Check containment, coverage or diagnostic properties");
    ver->add_option("--chain", va.chain, "Chain JSON")->check(CLI::ExistingFile);
    ver->add_option("--poly", va.poly, "Polyhedron JSON")->required()->check(CLI::ExistingFile);
    ver->add_option("--mode", va.mode, "containment, coverage, lemma52 or levelcurve")
        ->required()
        ->check(CLI::IsMember({"containment", "coverage", "lemma52", "levelcurve"}));
    ver->add_option("--samples", va.samples, "Sample count (lines per case for lemma52)");
    auto* seed_opt = ver->add_option("--seed", seed, "Random seed")->required();
    auto* window_opt = ver->add_option("--window", window, "Half-width of the target window")->check(CLI::PositiveNumber);
    auto* grid_opt = ver->add_option("--grid-step", grid, "Coverage grid step")->check(CLI::PositiveNumber);
    auto* cov_opt = ver->add_option("--min-coverage", min_cov, "Coverage threshold")->check(CLI::Range(0.0, 1.0));
    ver->add_option("--sample-window", va.sample_window, "Half-width of the domain sampling box")
        ->check(CLI::PositiveNumber);
    ver->add_option("--target", va.target, "Override the chain's target")
        ->check(CLI::IsMember({"complement", "interior-complement"}));
    ver->add_option("--report", va.report, "Report JSON output (stdout if omitted)");
    ver->add_flag("--timing", va.timing, "Include runtime in the report");

    ProbeArgs pa;
    auto* pro = app.add_subcommand("probe", "Describe a polyhedron and optionally classify a point");
    pro->add_option("--poly", pa.poly, "Polyhedron JSON")->required()->check(CLI::ExistingFile);
    pro->add_option("--point", pa.point, "Comma-separated rationals p/q");

    PlotArgs pl;
    auto* plot = app.add_subcommand("plot-data", "Write image and boundary points as CSV");
    plot->add_option("--chain", pl.chain, "Chain JSON")->required()->check(CLI::ExistingFile);
    plot->add_option("--poly", pl.poly, "Polyhedron JSON")->required()->check(CLI::ExistingFile);
    plot->add_option("--window", pl.window, "Half-width of the plotted window")->check(CLI::PositiveNumber);
    plot->add_option("--out", pl.out, "CSV output")->required();
    plot->add_option("--samples", pl.samples, "Domain samples");
    plot->add_option("--sample-window", pl.sample_window, "Half-width of the domain sampling box")
        ->check(CLI::PositiveNumber);
    plot->add_option("--seed", pl.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*syn) return run_synthesize(sa);
        if (*ev) return run_evaluate(ea);
        if (*ver) {
            va.seed = seed;
            (void)seed_opt;
            if (*window_opt) va.window = window;
            if (*grid_opt) va.grid_step = grid;
            if (*cov_opt) va.min_coverage = min_cov;
            return run_verify(va);
        }
        if (*pro) return run_probe(pa);
        if (*plot) return run_plot(pl);
    } catch (const ValidationError& e) {
        return report_error(e, kValidation);
    } catch (const SynthesisError& e) {
        return report_error(e, kSynthesis);
    } catch (const VerificationError& e) {
        return report_error(e, kVerification);
    } catch (const Error& e) {
        return report_error(e, kValidation);
    } catch (const DegreeCapExceeded& e) {
        std::cerr << json{{"error", "DegreeCapExceeded"}, {"message", e.what()}}.dump() << "\n";
        return kSynthesis;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "ValidationError"}, {"message", e.what()}}.dump() << "\n";
        return kValidation;
    }
    return kValidation;
}
