#pragma once

#include "polyimage/chain.hpp"
#include "polyimage/errors.hpp"
#include "polyimage/linalg.hpp"
#include "polyimage/lp.hpp"
#include "polyimage/poly.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <vector>

namespace polyimage {

// h(x) = gradient·x + constant.
struct LinearForm {
    Vec gradient;
    Scalar constant;

    std::size_t dim() const { return gradient.size(); }
    Scalar operator()(const Vec& x) const { return dot(gradient, x) + constant; }
    double operator()(const double* x) const;
    Poly to_poly() const { return Poly::linear(gradient, constant); }
    // Form in new coordinates y, where x = inv(y).
    LinearForm pullback(const AffineMap& inv) const;
    bool operator==(const LinearForm&) const = default;
};

// The set of points where every constraint is >= 0.
struct Polyhedron {
    std::size_t dim = 0;
    std::vector<LinearForm> constraints;
    bool minimal = false;

    bool contains(const Vec& x) const;
    bool contains_interior(const Vec& x) const;  // every constraint strictly positive
    // The image of this polyhedron under y = map(x).
    Polyhedron transformed(const AffineMap& map) const;

    nlohmann::json to_json() const;
    static Polyhedron from_json(const nlohmann::json& j);
};

struct RecessionCone {
    std::size_t dim = 0;
    std::vector<Vec> gradients;  // the cone is ⋂ {g·v >= 0}

    bool contains(const Vec& v) const;
    bool is_trivial() const;  // cone == {0}
};

struct FaceDescriptor {
    std::vector<std::size_t> active;
    int dim = 0;
    bool vertical = false;

    nlohmann::json to_json() const;
    bool operator==(const FaceDescriptor&) const = default;
};

// Strict feasibility: a point where every constraint not in `equalities` is
// positive and every constraint in `equalities` vanishes. Maximizes the common
// slack (capped at 1), so the point is deterministic and well inside.
std::optional<Vec> relative_interior_point(const Polyhedron& p, const std::vector<std::size_t>& equalities = {});

// Indices of constraints that vanish on all of p.
std::vector<std::size_t> implicit_equalities(const Polyhedron& p);

Polyhedron minimal_presentation(const Polyhedron& p);
RecessionCone recession_cone(const Polyhedron& p);
bool is_bounded(const Polyhedron& p);
bool is_degenerate(const Polyhedron& p);  // contains a full line
bool is_layer(const Polyhedron& p);

struct LinealityDecomposition {
    Polyhedron factor;  // dimension k, non-degenerate
    AffineMap witness;  // y = witness(x) sends p onto factor × R^{n-k}
    std::size_t k = 0;
};
LinealityDecomposition lineality_decomposition(const Polyhedron& p);

struct Placement {
    AffineMap map;               // new coordinates y = map(x)
    bool relative_interior = false;  // only the relative-interior position was reachable
};

// Coordinates in which -e_n lies in the interior of the recession cone.
AffineMap place_recession_interior(const Polyhedron& p);
// Same, falling back to the relative interior of the cone when its interior
// is empty: then the constraints vanishing on the cone become vertical.
Placement place_recession_relative_interior(const Polyhedron& p);

// Coordinates in which the given facet lies on {x_{n-1} = 0}, p ⊂ {x_{n-1} <= 0}
// and every vertical line meets p in a bounded set.
AffineMap place_bounded_position(const Polyhedron& p, std::size_t facet);
// Weaker placement: facet on {x_{n-1} = 0}, p ⊂ {x_{n-1} <= 0}, and
// e_n outside the recession cone while -e_n lies in it.
AffineMap place_one_sided_position(const Polyhedron& p, std::size_t facet);
bool in_bounded_position(const Polyhedron& p);
int facet_count_of_facet(const Polyhedron& p, std::size_t facet);

Polyhedron project(const Polyhedron& p);
std::vector<FaceDescriptor> boundary_fiber_faces(const Polyhedron& p);
FaceDescriptor describe_face(const Polyhedron& p, const std::vector<std::size_t>& active);

}  // namespace polyimage
