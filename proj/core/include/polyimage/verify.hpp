#pragma once

#include "polyimage/chain.hpp"
#include "polyimage/geometry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polyimage {

enum class RegionMode {
    Universe,             // R^n
    Closed,               // K
    Interior,             // Int(K)
    Complement,           // R^n \ K
    InteriorComplement,   // R^n \ Int(K)
    ComplementMinusFaces  // R^n \ Int(K) without the relative interiors of the listed faces
};

std::string to_string(RegionMode m);
RegionMode region_mode_from_string(const std::string& s);

// A constraint-defined set with exact membership.
struct RegionSpec {
    Polyhedron base;
    RegionMode mode = RegionMode::Universe;
    std::vector<FaceDescriptor> faces;

    static RegionSpec universe(std::size_t n) { return {Polyhedron{n, {}, true}, RegionMode::Universe, {}}; }

    std::size_t dim() const { return base.dim; }
    bool contains(const Vec& x) const;
    // Floating membership, used only to classify coverage grid cells.
    bool contains(const double* x) const;

    nlohmann::json to_json() const;
};

struct Violation {
    Vec input;
    Vec image;
    std::string predicate;
};

struct VerificationReport {
    std::string check;
    std::size_t samples_used = 0;
    std::size_t violation_count = 0;
    std::vector<Violation> violations;  // witnesses, capped
    std::optional<double> coverage_fraction;
    nlohmann::json diagnostics = nlohmann::json::object();
    std::uint64_t seed = 0;
    double runtime_seconds = 0;
    bool passed = true;

    // The runtime is left out unless asked for, so reports of identical runs
    // compare byte for byte.
    nlohmann::json to_json(bool with_runtime = false) const;
};

struct SamplingOptions {
    double window = 20;           // domain samples come from [-window, window]^n
    int max_rescales = 3;         // window doublings before SamplingStarved
    double min_acceptance = 1e-3;
    unsigned threads = 0;         // 0: POLYIMAGE_THREADS or the hardware count
    std::size_t max_witnesses = 16;
    int denominator_bits = 20;    // exact samples are multiples of 2^-bits
};

// POLYIMAGE_THREADS when set to a positive integer, else the hardware count.
unsigned default_thread_count();

// Exact: n rational samples of domain, each image tested against forbidden.
VerificationReport check_containment(const MapChain& chain, const RegionSpec& domain, const RegionSpec& forbidden,
                                     std::size_t n, std::uint64_t seed, const SamplingOptions& opts = {});

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box cube(std::size_t n, double r) { return {std::vector<double>(n, -r), std::vector<double>(n, r)}; }
};

// Statistical: fraction of grid cells of target ∩ window whose centre lies
// within grid_step of the image of one of n domain samples.
VerificationReport check_coverage(const MapChain& chain, const RegionSpec& domain, const RegionSpec& target,
                                  const Box& window, double grid_step, std::size_t n, std::uint64_t seed,
                                  const SamplingOptions& opts = {});

// Real roots of Σ c_k t^k, each returned as a dyadic point within tol of a
// root whose value there is at most tol in absolute value when that is
// reachable in 400 bisection steps. Simple roots only are guaranteed.
std::vector<Scalar> real_roots(const Vec& coeffs, const Scalar& tol);
Scalar eval_univariate(const Vec& coeffs, const Scalar& t);

struct LineProbeOptions {
    double window = 15;
    double grid_step = 0.05;
    double min_coverage = 0.99;
};

struct LineProbe {
    int lemma_case = 0;  // 1..4
    std::string claim;   // "invariance", "coverage" or "identity"
    bool passed = false;
    std::size_t samples = 0;
    std::size_t escapes = 0;
    double coverage = 0;
    std::string note;

    nlohmann::json to_json() const;
};

// Checks the image of the vertical line through (a', 0) under t_k, built by
// build_TK for k, according to where a' sits relative to the projection of k.
LineProbe line_behavior_probe(const PolyMap& t_k, const Polyhedron& k, const Vec& a_prime,
                              const LineProbeOptions& opts = {});

struct LevelCurveOptions {
    Scalar tolerance{mpz_class(1), mpz_class(1) << 40};
    double blowup_threshold = 1e3;
    int max_halvings = 20;
};

struct LevelCurveProbe {
    Scalar lambda;
    std::string branch;  // "graph" for λ > 0, "band" for λ < 0
    std::vector<std::pair<Scalar, Scalar>> points;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::vector<std::string> failure_notes;
    nlohmann::json blowup = nlohmann::json::array();
    bool passed = false;

    nlohmann::json to_json() const;
};

// f2 and q are polynomials in (y, z). For λ > 0 traces the largest root of
// f2(y, ·) = λ and checks q > 0 there, plus divergence towards each vertical
// abscissa; for λ < 0 checks that every root lies in (λ - 1, 0) and that
// every sampled y carries one.
LevelCurveProbe level_curve_diagnostics(const Poly& f2, const Poly& q, const Scalar& lambda,
                                        const std::vector<Scalar>& ys, const std::vector<Scalar>& vertical_abscissae,
                                        const LevelCurveOptions& opts = {});

// Builds T_K for k as given (k must already satisfy e_n ∉ recession cone),
// then probes per_case lines for each of the four cases of the line lemma.
// Case-4 lines are drawn on facets of the projection with x_{n-1} > 0.
VerificationReport check_line_behavior(const Polyhedron& k, std::size_t per_case, std::uint64_t seed,
                                       const LineProbeOptions& opts = {});

// Level-curve diagnostics for the first induction step of a planar k: the
// step is positioned as in the synthesis, and count abscissae are spread
// over [-window, window] with seeded jitter.
VerificationReport check_level_curves(const Polyhedron& k, const std::vector<Scalar>& lambdas, std::size_t count,
                                      double window, std::uint64_t seed, const LevelCurveOptions& opts = {});

}  // namespace polyimage
