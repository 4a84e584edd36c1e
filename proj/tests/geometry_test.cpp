#include "support.hpp"

#include "polyimage/errors.hpp"

#include <gtest/gtest.h>

using namespace polyimage;
using namespace polyimage::test;

namespace {

// Same half-spaces up to positive scaling, in any order.
bool same_halfspaces(const Polyhedron& a, const Polyhedron& b) {
    auto proportional = [](const LinearForm& f, const LinearForm& g) {
        Scalar ratio;
        bool have = false;
        for (std::size_t i = 0; i <= f.dim(); ++i) {
            const Scalar& x = i < f.dim() ? f.gradient[i] : f.constant;
            const Scalar& y = i < g.dim() ? g.gradient[i] : g.constant;
            if ((x == 0) != (y == 0)) return false;
            if (x == 0) continue;
            Scalar r = x / y;
            if (r <= 0 || (have && r != ratio)) return false;
            ratio = r;
            have = true;
        }
        return true;
    };
    if (a.constraints.size() != b.constraints.size()) return false;
    for (const auto& f : a.constraints) {
        bool found = false;
        for (const auto& g : b.constraints) found |= proportional(f, g);
        if (!found) return false;
    }
    return true;
}

Polyhedron wedge() { return polyhedron(2, {{{0, -1}, 0}, {{1, -1}, 0}, {{-1, -1}, 0}}); }
Polyhedron quadrant() { return polyhedron(2, {{{-1, 0}, 0}, {{0, -1}, 0}}); }

Polyhedron inverted_pyramid() {
    return polyhedron(3, {{{-1, 0, 1}, 0}, {{1, 0, 1}, 0}, {{0, -1, 1}, 0}, {{0, 1, 1}, 0}, {{0, 0, -1}, 1}});
}

}  // namespace

TEST(MinimalPresentation, DropsRedundantAndDuplicateConstraints) {
    auto p = polyhedron(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{1, 1}, 1}});
    EXPECT_TRUE(same_halfspaces(minimal_presentation(p), polyhedron(2, {{{1, 0}, 0}, {{0, 1}, 0}})));
    EXPECT_TRUE(same_halfspaces(minimal_presentation(quadrant()), quadrant()));
    auto dup = polyhedron(1, {{{1}, 0}, {{2}, 0}});
    EXPECT_TRUE(same_halfspaces(minimal_presentation(dup), polyhedron(1, {{{1}, 0}})));
}

TEST(MinimalPresentation, RejectsEmptyInterior) {
    auto p = polyhedron(1, {{{1}, 0}, {{-1}, 0}});
    EXPECT_THROW(minimal_presentation(p), SynthesisError);
}

TEST(MinimalPresentation, PreservesMembership) {
    DyadicSampler s(3, 2);
    auto p = polyhedron(2, {{{1, 0}, 2}, {{0, 1}, 2}, {{1, 1}, 5}, {{-1, 2}, 9}, {{2, 1}, 1}, {{-1, -1}, 6}});
    Polyhedron m = minimal_presentation(p);
    EXPECT_LT(m.constraints.size(), p.constraints.size());
    for (int i = 0; i < 2000; ++i) {
        Vec x = s.point(2, -8, 8);
        EXPECT_EQ(p.contains(x), m.contains(x));
    }
}

TEST(RecessionCone, HandExamples) {
    auto square = polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 1}, {{0, 1}, 0}, {{0, -1}, 1}});
    EXPECT_TRUE(recession_cone(square).is_trivial());
    EXPECT_TRUE(is_bounded(square));

    RecessionCone c = recession_cone(quadrant());
    EXPECT_TRUE(c.contains(vec({-1, -3})));
    EXPECT_FALSE(c.contains(vec({1, 0})));

    RecessionCone d = recession_cone(polyhedron(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{1, 1}, -3}}));
    EXPECT_TRUE(d.contains(vec({1, 0})));
    EXPECT_TRUE(d.contains(vec({0, 5})));
    EXPECT_FALSE(d.contains(vec({-1, 2})));
}

TEST(Layer, HandExamples) {
    EXPECT_TRUE(is_layer(polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 1}})));
    EXPECT_FALSE(is_layer(quadrant()));
    EXPECT_FALSE(is_layer(polyhedron(2, {{{-1, 0}, 0}})));
}

TEST(Lineality, HalfPlaneHasOneFactorDimension) {
    auto p = polyhedron(2, {{{-1, -1}, 0}});
    LinealityDecomposition d = lineality_decomposition(p);
    EXPECT_EQ(d.k, 1u);
    EXPECT_TRUE(is_degenerate(p));
    // The witness sends p onto factor × R.
    DyadicSampler s(9, 3);
    for (int i = 0; i < 500; ++i) {
        Vec x = s.point(2, -5, 5);
        Vec y = d.witness.apply(x);
        EXPECT_EQ(p.contains(x), d.factor.contains(Vec{y[0]}));
    }
}

TEST(Lineality, NonDegenerateAndEmpty) {
    LinealityDecomposition w = lineality_decomposition(wedge());
    EXPECT_EQ(w.k, 2u);
    EXPECT_FALSE(is_degenerate(wedge()));
    EXPECT_EQ(lineality_decomposition(Polyhedron{2, {}, true}).k, 0u);
}

TEST(Lineality, PropertyOnThreeDimensionalSlab) {
    auto p = polyhedron(3, {{{1, 2, 0}, 1}, {{-2, -4, 0}, 7}, {{1, 2, 0}, 3}});
    LinealityDecomposition d = lineality_decomposition(p);
    EXPECT_EQ(d.k, 1u);
    DyadicSampler s(21, 3);
    for (int i = 0; i < 500; ++i) {
        Vec x = s.point(3, -6, 6);
        Vec y = d.witness.apply(x);
        EXPECT_EQ(p.contains(x), d.factor.contains(Vec{y[0]}));
    }
}

TEST(Projection, HandExamples) {
    EXPECT_TRUE(project(wedge()).constraints.empty());
    auto strip = polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 1}, {{0, -1}, 0}});
    EXPECT_TRUE(same_halfspaces(project(strip), polyhedron(1, {{{1}, 0}, {{-1}, 1}})));
    EXPECT_TRUE(project(polyhedron(2, {{{0, -1}, 0}})).constraints.empty());
}

TEST(Projection, MatchesFibreNonEmptiness) {
    // x' is in the projection iff the vertical line through it meets p.
    Polyhedron p = inverted_pyramid();
    Polyhedron proj = project(p);
    DyadicSampler s(4, 3);
    for (int i = 0; i < 300; ++i) {
        Vec xp = s.point(2, -3, 3);
        Scalar lo = std::max<Scalar>(abs(xp[0]), abs(xp[1]));
        bool fibre = lo <= 1;
        EXPECT_EQ(proj.contains(xp), fibre);
    }
}

TEST(BoundaryFiberFaces, HandExamples) {
    auto strip = polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 1}, {{0, -1}, 0}});
    auto faces = boundary_fiber_faces(strip);
    ASSERT_EQ(faces.size(), 2u);
    for (const auto& f : faces) {
        EXPECT_EQ(f.dim, 1);
        EXPECT_TRUE(f.vertical);
        ASSERT_EQ(f.active.size(), 1u);
    }
    EXPECT_NE(faces[0].active[0], faces[1].active[0]);

    EXPECT_TRUE(boundary_fiber_faces(wedge()).empty());

    auto corner = polyhedron(2, {{{-1, 0}, 0}, {{0, -1}, 0}});
    auto one = boundary_fiber_faces(corner);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].active, std::vector<std::size_t>{0});
    EXPECT_EQ(one[0].dim, 1);
}

TEST(InteriorPoint, IsStrictlyInside) {
    for (const auto& p : {wedge(), quadrant(), inverted_pyramid()}) {
        auto x = relative_interior_point(p);
        ASSERT_TRUE(x.has_value());
        EXPECT_TRUE(p.contains_interior(*x));
    }
    auto thin = polyhedron(2, {{{1, 0}, 0}, {{-1, 0}, 0}, {{0, -1}, 0}});
    auto eq = implicit_equalities(thin);
    EXPECT_EQ(eq.size(), 2u);
}

TEST(Placement, RecessionInteriorPostcondition) {
    Polyhedron open_pyramid = polyhedron(3, {{{-1, 0, 1}, 0}, {{1, 0, 1}, 0}, {{0, -1, 1}, 0}, {{0, 1, 1}, 0}});
    for (const auto& p : {wedge(), quadrant(), open_pyramid}) {
        AffineMap a = place_recession_interior(p);
        Polyhedron t = p.transformed(a);
        Vec down(p.dim, Scalar(0));
        down.back() = -1;
        for (const auto& h : t.constraints) EXPECT_GT(dot(h.gradient, down), 0);
        // The map is a bijection of the polyhedron onto its image.
        DyadicSampler s(1, 3);
        for (int i = 0; i < 100; ++i) {
            Vec x = s.point(p.dim, -4, 4);
            EXPECT_EQ(p.contains(x), t.contains(a.apply(x)));
        }
    }
}

TEST(Placement, BoundedPositionOnPyramidTop) {
    Polyhedron p = inverted_pyramid();
    AffineMap a = place_bounded_position(p, 4);
    Polyhedron t = p.transformed(a);
    EXPECT_TRUE(in_bounded_position(t));
    const LinearForm& f = t.constraints[4];
    EXPECT_EQ(f.constant, 0);
    EXPECT_EQ(f.gradient[0], 0);
    EXPECT_LT(f.gradient[1], 0);
    EXPECT_EQ(f.gradient[2], 0);
}

TEST(Placement, AlreadyPlacedIsIdentity) {
    auto placed = polyhedron(3, {{{0, 0, 1}, 1}, {{0, 0, -1}, 1}, {{0, -1, 0}, 0}, {{1, 0, 0}, 1}, {{-1, 0, 0}, 1}});
    EXPECT_TRUE(place_bounded_position(placed, 2).is_identity());
}

TEST(Placement, RayFacetIsTooThin) {
    // Each facet of the wedge is a ray with a single facet of its own.
    EXPECT_THROW(place_bounded_position(wedge(), 1), SynthesisError);
    EXPECT_EQ(facet_count_of_facet(wedge(), 1), 1);
    EXPECT_EQ(facet_count_of_facet(inverted_pyramid(), 4), 4);
}

TEST(Polyhedron, JsonRoundTrip) {
    Polyhedron p = inverted_pyramid();
    p.constraints[0].constant = q("-3/7");
    Polyhedron back = Polyhedron::from_json(nlohmann::json::parse(p.to_json().dump()));
    EXPECT_EQ(back.constraints, p.constraints);
    EXPECT_EQ(back.dim, p.dim);
}
