#pragma once

#include "polyimage/chain.hpp"
#include "polyimage/geometry.hpp"
#include "polyimage/interior_complement.hpp"
#include "polyimage/skyscraper.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace polyimage {

// One admissible index set: W = ⋂ H_{i_1..i_k} is parallel to H_{i_{k+1}}
// and lies strictly on its negative side.
struct DeltaWitness {
    std::vector<std::size_t> flats;  // i_1..i_k
    std::size_t target = 0;          // i_{k+1}
    Scalar dist_sq;                  // dist(W, H_target^+)²
};

struct DeltaCertificate {
    std::vector<DeltaWitness> family;
    Scalar delta_sq;  // meaningful only when !infinite
    bool infinite = true;

    nlohmann::json to_json() const;
};

// Exhaustive over index sets of size at most n. Expects k minimal.
DeltaCertificate compute_delta(const Polyhedron& k);

struct EnlargementLadder {
    Scalar epsilon;
    Polyhedron k;   // minimal presentation of the input
    Polyhedron k0;  // every constraint relaxed by epsilon

    std::size_t stages() const { return k.constraints.size(); }
    // Closure of G_i: constraints j < i original, j >= i relaxed.
    Polyhedron stage(std::size_t i) const;
    // Whether constraint j is relaxed (hence strict in G_i).
    bool relaxed(std::size_t i, std::size_t j) const { return j >= i; }

    nlohmann::json to_json() const;
};

// Largest ε in {1, 1/2, 1/4, ...} with ε² < (δ²/4)·min ‖a_i‖².
EnlargementLadder choose_epsilon(const DeltaCertificate& cert, const Polyhedron& k);

// (x', x_n - x_{n-1} h² P) with h the product of all constraints of k.
PolyMap build_TK(const Polyhedron& k, const SepPoly& sep);

struct StageResult {
    MapChain chain;
    nlohmann::json trace;
};

// The map carrying R^n \ G_i onto R^n \ G_{i+1}, in original coordinates.
StageResult step_maps(std::size_t i, const EnlargementLadder& ladder);

// The half-space map ((x1 x2 - 1)² + x1², x2 (x1 x2 - 1), x''), image {x1 > 0}.
PolyMap half_space_map(std::size_t n);

// Chain with image R^n \ k for n >= 2. Errors: UniversePolyhedron,
// LayerEncountered, CompactBaseRequired, FaceParallelContradiction.
SynthesisResult synthesize_complement(const Polyhedron& k, const CompactBaseProvider& provider = {});

}  // namespace polyimage
