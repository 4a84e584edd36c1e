#pragma once

#include "polyimage/geometry.hpp"
#include "polyimage/poly.hpp"

#include <string>

namespace polyimage {

// Constraints of K sorted by the sign of their x_n coefficient, normalized so
// floors read x_n - a(x') >= 0, ceilings b(x') - x_n >= 0 and walls c(x') >= 0.
// All forms live in R^{n-1}.
struct FacetSplit {
    std::vector<LinearForm> floor;
    std::vector<LinearForm> ceiling;
    std::vector<LinearForm> walls;
    std::vector<std::size_t> floor_index, ceiling_index, wall_index;

    // The constraints of K rebuilt from the split (normalized scaling).
    std::vector<LinearForm> reconstruct() const;
};

// Splits without checking the bounded-position requirement.
FacetSplit split_constraints(const Polyhedron& k);
// Throws NotBoundedPosition when the floor or the ceiling is empty.
FacetSplit split_facets(const Polyhedron& k);

// P(x) = f1(x')·x_n - f2(x') separating attic and basement.
struct SepPoly {
    Poly f1;       // in x'
    Poly f2;       // in x'
    Poly f1_root;  // f1 = f1_root², f2 carries f1_root as a factor
    Poly P;        // in (x', x_n)
    int r = 0;
    int s = 0;
    bool bounded = true;
    bool reflected = false;  // unbounded case built after x_n ↦ -x_n

    nlohmann::json to_json() const;
};

SepPoly build_sep_poly_bounded(const Polyhedron& k);
// Ceiling-only polyhedra directly, floor-only ones through the reflection.
SepPoly build_sep_poly_unbounded(const Polyhedron& k);
// Bounded construction when the split has both sides, unbounded otherwise.
SepPoly build_sep_poly(const Polyhedron& k);

enum class RegionTag { Basement, Attic, Inside, Boundary, OutsidePrism };
std::string to_string(RegionTag t);

class RegionClassifier {
public:
    explicit RegionClassifier(const Polyhedron& k);
    RegionTag operator()(const Vec& x) const;
    const Polyhedron& projection() const { return proj_; }

private:
    Polyhedron k_;
    Polyhedron proj_;
    FacetSplit split_;
};

RegionTag classify_region(const Polyhedron& k, const Vec& x);

}  // namespace polyimage
