// Acceptance run: one PASS/FAIL line per criterion. Every sample count,
// threshold and time budget is pinned below.

#include "support.hpp"

#include "polyimage/complement.hpp"
#include "polyimage/errors.hpp"
#include "polyimage/interior_complement.hpp"
#include "polyimage/separator.hpp"
#include "polyimage/skyscraper.hpp"
#include "polyimage/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace polyimage;
using namespace polyimage::test;

namespace {

constexpr std::size_t kSandwichSamples = 10000;
constexpr double kSandwichBudget = 60;
constexpr std::size_t kClosedFormSamples = 1000;
constexpr std::size_t kSignSamples = 10000;
constexpr std::size_t kHyperplaneSamples = 200;
constexpr std::size_t kLinesPerCase = 10;
constexpr double kLineBudget = 120;
constexpr std::size_t kLevelSamples = 100;
constexpr std::size_t kContainmentSamples = 100000;
constexpr std::size_t kCoverageSamples = 1000000;
constexpr double kCoverageWindow = 10;
constexpr double kCoverageGrid = 0.25;
constexpr double kInteriorComplementCoverage = 0.99;
constexpr double kInteriorComplementBudget = 600;
constexpr double kComplementCoverage = 0.98;
constexpr double kComplementBudget = 900;
constexpr double kHalfSpaceCoverage = 0.99;
constexpr double kBaseGrid = 0.1;
constexpr std::size_t kBaseCoverageSamples = 100000;
constexpr double kBaseCoverage = 0.99;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool passed = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& run) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = run();
    } catch (const std::exception& e) {
        o = {false, std::string("unexpected exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s %2d %-28s %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), since(t0));
    std::fflush(stdout);
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

Polyhedron wedge() { return polyhedron(2, {{{0, -1}, 0}, {{1, -1}, 0}, {{-1, -1}, 0}}); }
Polyhedron pyramid() {
    return polyhedron(3, {{{-1, 0, 1}, 0}, {{1, 0, 1}, 0}, {{0, -1, 1}, 0}, {{0, 1, 1}, 0}, {{0, 0, -1}, 1}});
}

// Interior point of {max y < min z}: y free, every z above max y.
Vec sandwich_sample(DyadicSampler& s, int r, int t) {
    Vec x = s.point(static_cast<std::size_t>(r), -8, 8);
    Scalar top = max_of(x);
    for (int j = 0; j < t; ++j) x.push_back(top + s.gap(6));
    return x;
}

Outcome separator_sandwich() {
    auto t0 = Clock::now();
    std::size_t bad = 0, total = 0;
    for (int r = 1; r <= 4; ++r)
        for (int t = 1; t <= 4; ++t) {
            const RationalSeparator& sep = build_separator(r, t);
            DyadicSampler s(static_cast<std::uint64_t>(1000 + 10 * r + t));
            for (std::size_t i = 0; i < kSandwichSamples; ++i) {
                Vec x = sandwich_sample(s, r, t);
                ++total;
                auto v = sep.value(x);
                Vec y(x.begin(), x.begin() + r), z(x.begin() + r, x.end());
                if (!v || !(max_of(y) < *v && *v < min_of(z))) ++bad;
            }
        }
    double secs = since(t0);
    return {bad == 0 && secs < kSandwichBudget,
            std::to_string(total) + " samples over 16 shapes, " + std::to_string(bad) + " failures, " + fmt(secs) +
                "s (budget " + fmt(kSandwichBudget) + "s)"};
}

Outcome phi22_closed_form() {
    RationalSeparator p = phi22();
    Poly num = p.num(), den = p.den();
    DyadicSampler s(2222);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < kClosedFormSamples; ++i) {
        Vec x = sandwich_sample(s, 2, 2);
        Scalar closed = (x[2] * x[3] - x[0] * x[1]) / ((x[2] + x[3]) - (x[0] + x[1]));
        Scalar d = den.eval(x);
        if (d == 0 || num.eval(x) / d != closed) ++bad;
    }
    std::size_t diag_bad = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        Scalar c = s.draw(-8, 8);
        if (p.eval(Vec(4, c)) != c) ++diag_bad;
    }
    return {bad == 0 && diag_bad == 0,
            std::to_string(kClosedFormSamples) + " interior points, " + std::to_string(bad) +
                " mismatches; all-equal extension " + std::to_string(diag_bad) + "/100 mismatches"};
}

// Regions are generated from the fixture's own floor/ceiling description,
// independently of the classifier in the library.
struct SignFixture {
    std::string name;
    Polyhedron k;
    std::function<Scalar(DyadicSampler&)> inside_projection;  // x1 in Int(P)
    std::function<std::optional<Scalar>(const Scalar&)> floor;    // max floor, none if no floor
    std::function<Scalar(const Scalar&)> ceiling;                 // min ceiling
};

Outcome skyscraper_signs() {
    std::vector<SignFixture> fixtures{
        {"tent", polyhedron(2, {{{-1, 1}, 0}, {{-1, -1}, 2}}), [](DyadicSampler& s) {
             Scalar x;
             do x = s.draw(-20, 1);
             while (x == 1);
             return x;
         },
         [](const Scalar& x) { return std::optional<Scalar>(x); }, [](const Scalar& x) { return 2 - x; }},
        {"box", polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 1}, {{0, 1}, 0}, {{0, -1}, 1}}), [](DyadicSampler& s) {
             Scalar x;
             do x = s.draw(0, 1);
             while (x == 0 || x == 1);
             return x;
         },
         [](const Scalar&) { return std::optional<Scalar>(Scalar(0)); }, [](const Scalar&) { return Scalar(1); }},
        {"ceiling-only", polyhedron(2, {{{1, -1}, 0}, {{-1, -1}, 0}}), [](DyadicSampler& s) { return s.draw(-20, 20); },
         [](const Scalar&) { return std::optional<Scalar>(); }, [](const Scalar& x) { return x < 0 ? x : -x; }},
    };
    std::ostringstream detail;
    std::size_t bad_total = 0;
    for (const auto& fx : fixtures) {
        SepPoly sp = build_sep_poly(fx.k);
        DyadicSampler s(std::hash<std::string>{}(fx.name));
        std::size_t bad = 0, basement = 0;
        for (std::size_t i = 0; i < kSignSamples; ++i) {
            Scalar x1 = fx.inside_projection(s);
            Vec xp{x1};
            if (!(sp.f1.eval(xp) > 0)) ++bad;
            if (!sp.bounded && !(-sp.f2.eval(xp) > 0)) ++bad;
            if (!(sp.P.eval(Vec{x1, fx.ceiling(x1) + s.gap(10)}) > 0)) ++bad;
            if (auto f = fx.floor(x1)) {
                ++basement;
                if (!(sp.P.eval(Vec{x1, *f - s.gap(10)}) < 0)) ++bad;
            }
        }
        // -f2 > 0 is claimed on all of R^{n-1} in the unbounded case.
        if (!sp.bounded)
            for (std::size_t i = 0; i < kSignSamples; ++i)
                if (!(-sp.f2.eval(Vec{s.draw(-1000, 1000)}) > 0)) ++bad;
        bad_total += bad;
        detail << fx.name << ": " << bad << " failures";
        detail << (basement ? "" : " (no basement)") << "; ";
    }
    return {bad_total == 0, detail.str() + std::to_string(kSignSamples) + " samples per region"};
}

Outcome identity_on_boundary() {
    std::ostringstream detail;
    std::size_t bad = 0, checked = 0;
    DyadicSampler s(404);
    // F: the hyperplanes of h_1..h_{m-1}, on which G vanishes.
    Polyhedron cut_cone = polyhedron(3, {{{1, 0, -1}, 0}, {{-1, 0, -1}, 0}, {{0, 1, -1}, 0}, {{0, -1, -1}, 0}});
    std::size_t flat_escapes = 0;
    for (const auto& k0 : {wedge(), cut_cone}) {
        PositionedStep ps = position_step(minimal_presentation(k0));
        InteriorStepPolys polys = build_QGP(ps.positioned);
        PolyMap f = build_F(polys);
        for (std::size_t c = 0; c < ps.positioned.constraints.size(); ++c) {
            const auto& h = ps.positioned.constraints[c];
            for (std::size_t i = 0; i < kHyperplaneSamples; ++i) {
                Vec x = point_on_hyperplane(h, s, 6);
                Vec y = f.apply(x);
                if (c == polys.distinguished) {
                    flat_escapes += y.back() != 0;
                    continue;
                }
                ++checked;
                bad += y != x;
            }
        }
    }
    detail << "F " << checked << " pts;";
    // F0: the walls of P x R for a segment and a square.
    {
        Poly x = Poly::variable(1, 0), one = Poly::constant(1, 1);
        Polyhedron seg = polyhedron(1, {{{1}, 1}, {{-1}, 1}});
        Poly a = Poly::variable(2, 0), b = Poly::variable(2, 1), one2 = Poly::constant(2, 1);
        Polyhedron sq = polyhedron(2, {{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}, {{0, -1}, 1}});
        std::vector<std::pair<Polyhedron, Poly>> bases{{seg, (x + one) * (one - x)},
                                                       {sq, (a + one2) * (one2 - a) * (b + one2) * (one2 - b)}};
        std::size_t before = checked;
        for (const auto& [p, h] : bases) {
            PolyMap f0 = build_F0(p, h);
            std::size_t n = p.dim + 1;
            for (const auto& c : p.constraints) {
                LinearForm wall{c.gradient, c.constant};
                wall.gradient.push_back(0);
                for (std::size_t i = 0; i < kHyperplaneSamples; ++i) {
                    Vec x = point_on_hyperplane(wall, s, 6);
                    if (x.size() != n) throw std::logic_error("wall sample has the wrong dimension");
                    ++checked;
                    bad += f0.apply(x) != x;
                }
            }
        }
        detail << " F0 " << checked - before << " pts;";
    }
    // T_K: every constraint hyperplane of bounded-position fixtures.
    {
        std::size_t before = checked;
        for (const auto& k : {pyramid(), polyhedron(2, {{{-1, 1}, 0}, {{1, 1}, 0}, {{0, -1}, 1}})}) {
            PolyMap t = build_TK(k, build_sep_poly(k));
            for (const auto& h : k.constraints)
                for (std::size_t i = 0; i < kHyperplaneSamples; ++i) {
                    Vec x = point_on_hyperplane(h, s, 5);
                    ++checked;
                    bad += t.apply(x) != x;
                }
        }
        detail << " T_K " << checked - before << " pts;";
    }
    detail << " " << bad << " moved; distinguished flat of F: " << flat_escapes << " left {x_n = 0}";
    return {bad == 0 && flat_escapes == 0, detail.str()};
}

Outcome line_behavior() {
    auto t0 = Clock::now();
    LineProbeOptions opts;
    opts.window = 15;
    opts.grid_step = 0.05;
    opts.min_coverage = 0.99;
    VerificationReport rep = check_line_behavior(pyramid(), kLinesPerCase, 52, opts);
    double secs = since(t0);
    std::size_t lines = 0, failed = 0;
    double worst = 1;
    for (const auto& p : rep.diagnostics.at("probes")) {
        ++lines;
        failed += !p.at("passed").get<bool>();
        if (p.at("claim") == "coverage") worst = std::min(worst, p.at("coverage").get<double>());
    }
    return {rep.passed && lines == 4 * kLinesPerCase && secs < kLineBudget,
            std::to_string(lines) + " lines, " + std::to_string(failed) + " failed, worst coverage " + fmt(worst) +
                ", " + fmt(secs) + "s (budget " + fmt(kLineBudget) + "s)"};
}

Outcome level_curves() {
    std::vector<Scalar> lambdas{Scalar(-3), Scalar(-1), Scalar(1), Scalar(3)};
    // The wedge has no vertical facet; the second fixture has two, so the
    // blow-up towards vertical abscissae is exercised as well.
    Polyhedron walls = polyhedron(2, {{{0, -1}, 0}, {{1, 0}, 1}, {{-1, 0}, 1}, {{-2, -1}, 1}});
    VerificationReport a = check_level_curves(wedge(), lambdas, kLevelSamples, 10, 6);
    VerificationReport b = check_level_curves(walls, lambdas, kLevelSamples, 10, 6);
    std::size_t blowups = 0, reached = 0;
    for (const auto& p : b.diagnostics.at("probes"))
        for (const auto& e : p.at("blowup")) {
            ++blowups;
            reached += e.at("reached").get<bool>();
        }
    bool ok = a.passed && b.passed && blowups > 0 && reached == blowups;
    return {ok, std::string("wedge ") + (a.passed ? "ok" : "failed") + ", walled fixture " + (b.passed ? "ok" : "failed") +
                    ", blow-up above 1e3 reached " + std::to_string(reached) + "/" + std::to_string(blowups)};
}

std::string coverage_note(const VerificationReport& rep) {
    auto d = rep.diagnostics;
    std::string s = "coverage " + fmt(rep.coverage_fraction.value_or(0)) + " (" +
                    std::to_string(d.value("covered_cells", 0)) + "/" + std::to_string(d.value("target_cells", 0)) +
                    " cells)";
    if (d.contains("uncovered_bounding_box"))
        s += ", gap box " + d.at("uncovered_bounding_box").at("lo").dump() + ".." +
             d.at("uncovered_bounding_box").at("hi").dump();
    return s;
}

Outcome end_to_end_interior_complement() {
    auto t0 = Clock::now();
    Polyhedron k = wedge();
    auto r = synthesize_interior_complement(k);
    RegionSpec domain = RegionSpec::universe(2);
    auto c = check_containment(r.chain, domain, {k, RegionMode::Interior, {}}, kContainmentSamples, 71);
    auto v = check_coverage(r.chain, domain, {k, RegionMode::InteriorComplement, {}}, Box::cube(2, kCoverageWindow),
                            kCoverageGrid, kCoverageSamples, 72);
    double secs = since(t0);
    bool ok = c.violation_count == 0 && *v.coverage_fraction >= kInteriorComplementCoverage &&
              secs < kInteriorComplementBudget;
    return {ok, "containment " + std::to_string(c.violation_count) + " violations; " + coverage_note(v) + " vs " +
                    fmt(kInteriorComplementCoverage) + "; " + fmt(secs) + "s"};
}

// Brute force over every index set: W = ⋂ H_S is parallel to H_t when a_t is
// in the span of a_S, and counts when h_t is negative on W.
struct DeltaOracle {
    bool infinite = true;
    Scalar delta_sq;
    std::size_t family = 0;
};

std::size_t rank_of(Matrix rows) {
    std::size_t rank = 0, cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && rows[i][c] != 0) {
                Scalar f = rows[i][c] / rows[rank][c];
                for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
            }
        ++rank;
    }
    return rank;
}

DeltaOracle delta_by_enumeration(const Polyhedron& k) {
    DeltaOracle out;
    std::size_t m = k.constraints.size(), n = k.dim;
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        Matrix a, aug;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1) {
                a.push_back(k.constraints[i].gradient);
                Vec row = k.constraints[i].gradient;
                row.push_back(k.constraints[i].constant);
                aug.push_back(row);
            }
        if (a.size() > n) continue;
        std::size_t ra = rank_of(a);
        if (rank_of(aug) != ra) continue;  // W is empty
        for (std::size_t t = 0; t < m; ++t) {
            if (mask >> t & 1) continue;
            Matrix with = a;
            with.push_back(k.constraints[t].gradient);
            if (rank_of(with) != ra) continue;  // not parallel
            // a_t = Σ μ_i a_i, so h_t on W equals b_t - Σ μ_i b_i. Solve for μ.
            std::size_t rows_n = n, unknowns = a.size();
            Matrix tr(rows_n, Vec(unknowns + 1));
            for (std::size_t d = 0; d < n; ++d) {
                for (std::size_t i = 0; i < unknowns; ++i) tr[d][i] = a[i][d];
                tr[d][unknowns] = k.constraints[t].gradient[d];
            }
            // Gauss-Jordan on tr to get one solution μ.
            Vec mu(unknowns, Scalar(0));
            std::size_t r = 0;
            std::vector<std::size_t> pivots;
            for (std::size_t c = 0; c < unknowns && r < rows_n; ++c) {
                std::size_t p = r;
                while (p < rows_n && tr[p][c] == 0) ++p;
                if (p == rows_n) continue;
                std::swap(tr[p], tr[r]);
                Scalar piv = tr[r][c];
                for (auto& v : tr[r]) v /= piv;
                for (std::size_t i = 0; i < rows_n; ++i)
                    if (i != r && tr[i][c] != 0) {
                        Scalar f = tr[i][c];
                        for (std::size_t j = 0; j <= unknowns; ++j) tr[i][j] -= f * tr[r][j];
                    }
                pivots.push_back(c);
                ++r;
            }
            for (std::size_t i = 0; i < pivots.size(); ++i) mu[pivots[i]] = tr[i][unknowns];
            Scalar value = k.constraints[t].constant;
            std::size_t idx = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (mask >> i & 1) value -= mu[idx++] * k.constraints[i].constant;
            if (!(value < 0)) continue;
            Scalar norm_sq = 0;
            for (const auto& g : k.constraints[t].gradient) norm_sq += g * g;
            Scalar d = value * value / norm_sq;
            ++out.family;
            if (out.infinite || d < out.delta_sq) out.delta_sq = d;
            out.infinite = false;
        }
    }
    return out;
}

Outcome end_to_end_complement() {
    auto t0 = Clock::now();
    Polyhedron k = wedge();
    auto r = synthesize_complement(k);
    DeltaOracle oracle = delta_by_enumeration(minimal_presentation(k));
    DeltaCertificate cert = compute_delta(minimal_presentation(k));
    // ε: largest power 2^-j with ε² < (δ²/4)·min ‖a_i‖²; any ε works when δ = ∞.
    Scalar expected_eps = 1;
    if (!oracle.infinite) {
        Scalar min_norm;
        bool first = true;
        for (const auto& h : minimal_presentation(k).constraints) {
            Scalar nn = 0;
            for (const auto& g : h.gradient) nn += g * g;
            if (first || nn < min_norm) min_norm = nn;
            first = false;
        }
        while (!(expected_eps * expected_eps < oracle.delta_sq / 4 * min_norm)) expected_eps /= 2;
    }
    bool delta_ok = cert.infinite == oracle.infinite && cert.family.size() == oracle.family &&
                    (oracle.infinite || cert.delta_sq == oracle.delta_sq) &&
                    r.trace.at("delta").at("delta_sq") == (oracle.infinite ? "inf" : format_scalar(oracle.delta_sq)) &&
                    r.trace.at("ladder").at("epsilon") == format_scalar(expected_eps);
    RegionSpec domain = RegionSpec::universe(2);
    auto c = check_containment(r.chain, domain, {k, RegionMode::Closed, {}}, kContainmentSamples, 81);
    auto v = check_coverage(r.chain, domain, {k, RegionMode::Complement, {}}, Box::cube(2, kCoverageWindow),
                            kCoverageGrid, kCoverageSamples, 82);
    double secs = since(t0);
    bool ok = delta_ok && c.violation_count == 0 && *v.coverage_fraction >= kComplementCoverage &&
              secs < kComplementBudget;
    return {ok, std::string("delta ") + (oracle.infinite ? "inf" : format_scalar(oracle.delta_sq)) + ", epsilon " +
                    format_scalar(expected_eps) + (delta_ok ? " reproduced" : " MISMATCH") + "; containment " +
                    std::to_string(c.violation_count) + " violations; " + coverage_note(v) + " vs " +
                    fmt(kComplementCoverage) + "; " + fmt(secs) + "s"};
}

Outcome half_space() {
    MapChain chain(2);
    chain.append(half_space_map(2), "half-space");
    Polyhedron right = polyhedron(2, {{{1, 0}, 0}});
    RegionSpec domain = RegionSpec::universe(2);
    auto c = check_containment(chain, domain, {right, RegionMode::InteriorComplement, {}}, kContainmentSamples, 91);
    auto v = check_coverage(chain, domain, {right, RegionMode::Interior, {}}, Box{{0, -10}, {10, 10}}, kCoverageGrid,
                            kCoverageSamples, 92);
    bool ok = c.violation_count == 0 && *v.coverage_fraction >= kHalfSpaceCoverage;
    return {ok, "containment " + std::to_string(c.violation_count) + " violations; " + coverage_note(v) + " vs " +
                    fmt(kHalfSpaceCoverage)};
}

Outcome line_base() {
    Polyhedron k = polyhedron(1, {{{-1}, 0}});
    auto r = synthesize_interior_complement(k);
    RegionSpec domain = RegionSpec::universe(1);
    auto c = check_containment(r.chain, domain, {k, RegionMode::Interior, {}}, kContainmentSamples, 101);
    auto v = check_coverage(r.chain, domain, {k, RegionMode::InteriorComplement, {}}, Box{{0}, {10}}, kBaseGrid,
                            kBaseCoverageSamples, 102);
    bool square = r.chain.eval(Vec{Scalar(-3)}) == Vec{Scalar(9)} && r.chain.eval(Vec{Scalar(1, 2)}) == Vec{Scalar(1, 4)};
    bool ok = square && c.violation_count == 0 && *v.coverage_fraction >= kBaseCoverage;
    return {ok, std::string("x -> x^2 ") + (square ? "confirmed" : "NOT confirmed") + "; containment " +
                    std::to_string(c.violation_count) + " violations; " + coverage_note(v) + " vs " + fmt(kBaseCoverage)};
}

Outcome negative_control() {
    Polyhedron k = wedge();
    auto r = synthesize_interior_complement(k);
    nlohmann::json j = r.chain.to_json();
    bool corrupted = false;
    for (auto& step : j.at("steps"))
        if (step.at("label") == "F") {
            // Negate the last component: the image is reflected through {x_n = 0}.
            auto& comps = step.at("components");
            Poly last = Poly::from_json(comps.back());
            comps.back() = (-last).to_json();
            corrupted = true;
        }
    if (!corrupted) return {false, "no F step found to corrupt"};
    MapChain bad = MapChain::from_json(j);
    auto c = check_containment(bad, RegionSpec::universe(2), {k, RegionMode::Interior, {}}, kContainmentSamples, 111);
    bool ok = !c.passed && c.violation_count >= 1 && !c.violations.empty();
    return {ok, "corrupted chain: " + std::to_string(c.violation_count) + " violations, " +
                    std::to_string(c.violations.size()) + " witnesses reported"};
}

Outcome error_taxonomy() {
    std::string layer_kind, compact_kind, detail;
    bool layer_node = false, compact_node = false;
    try {
        synthesize_interior_complement(polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 1}}));
    } catch (const SynthesisError& e) {
        layer_kind = e.kind();
        layer_node = e.payload().is_object() && e.payload().contains("polyhedron");
    }
    try {
        synthesize_interior_complement(
            polyhedron(3, {{{1, 0, 0}, 0}, {{-1, 0, 0}, 1}, {{0, 1, 0}, 0}, {{0, -1, 0}, 1}, {{0, 0, -1}, 0}}));
    } catch (const SynthesisError& e) {
        compact_kind = e.kind();
        compact_node = e.payload().value("kind", "") == "compact" && e.payload().contains("polyhedron") &&
                       e.payload().at("polyhedron").value("dim", 0) == 2;
    }
    bool ok = layer_kind == "LayerEncountered" && layer_node && compact_kind == "CompactBaseRequired" && compact_node;
    return {ok, "layer -> " + (layer_kind.empty() ? std::string("no error") : layer_kind) +
                    (layer_node ? " with node" : " without node") + "; case 2 -> " +
                    (compact_kind.empty() ? std::string("no error") : compact_kind) +
                    (compact_node ? " with dim-2 compact node" : " without expected node")};
}

}  // namespace

int main() {
    report(1, "separator-sandwich", separator_sandwich);
    report(2, "phi22-closed-form", phi22_closed_form);
    report(3, "skyscraper-signs", skyscraper_signs);
    report(4, "identity-on-boundary", identity_on_boundary);
    report(5, "line-behavior", line_behavior);
    report(6, "level-curves", level_curves);
    report(7, "interior-complement-wedge", end_to_end_interior_complement);
    report(8, "complement-wedge", end_to_end_complement);
    report(9, "half-space-map", half_space);
    report(10, "line-base-case", line_base);
    report(11, "negative-control", negative_control);
    report(12, "error-taxonomy", error_taxonomy);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
