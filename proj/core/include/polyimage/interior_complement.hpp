#pragma once

#include "polyimage/chain.hpp"
#include "polyimage/geometry.hpp"
#include "polyimage/poly.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>

namespace polyimage {

// Polynomials of one non-degenerate induction step.
struct InteriorStepPolys {
    Poly Q;
    Poly G;
    Poly P;  // 1 - Q·G²
    int r = 0;  // vertical facets
    int m = 0;  // facets, the last one being the distinguished facet on {x_n = 0}
    std::size_t distinguished = 0;  // index of that facet in the input polyhedron

    nlohmann::json to_json() const;
};

// Expects k minimal and non-degenerate with -e_n in the (relative) interior
// of its recession cone, one facet lying on {x_n = 0} with the origin in its
// relative interior and k ⊂ {x_n <= 0}. Throws BadPosition otherwise.
InteriorStepPolys build_QGP(const Polyhedron& k);

// Coordinates for one induction step on a minimal, non-degenerate, unbounded
// polyhedron: the recession cone is turned so -e_n sits in its (relative)
// interior and the first non-vertical facet is moved onto {x_n = 0} with the
// origin in its relative interior.
struct PositionedStep {
    AffineMap placement;    // y = placement(x)
    Polyhedron positioned;  // the polyhedron in y coordinates
    std::size_t facet = 0;  // the distinguished facet
    bool relative_interior = false;
};
PositionedStep position_step(const Polyhedron& k);

// (x'((P-1)² + P²), x_n P²)
PolyMap build_F(const InteriorStepPolys& polys);

// ((1 - x_n h²) x', x_n) with h a polynomial in x' that vanishes on the
// boundary of the bounded polyhedron p. Throws OriginNotInterior.
PolyMap build_F0(const Polyhedron& p, const Poly& h);

// Supplies a chain with image R^k \ Int(P) for a compact polyhedron P that
// the recursion cannot handle itself. Returning nullopt declines.
using CompactBaseProvider = std::function<std::optional<MapChain>(const Polyhedron&)>;

// Provider backed by a JSON array of {"polyhedron": ..., "chain": ...}
// entries matched by exact equality of minimal presentations.
CompactBaseProvider provider_from_json(const nlohmann::json& entries);

struct SynthesisResult {
    MapChain chain;
    nlohmann::json trace;
};

// Chain with image R^n \ Int(k). Errors: UniversePolyhedron,
// LayerEncountered, CompactBaseRequired (payload carries the node).
SynthesisResult synthesize_interior_complement(const Polyhedron& k, const CompactBaseProvider& provider = {});

}  // namespace polyimage
