#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyprec/geometry.hpp"
#include "hyprec/rng.hpp"
#include "test_util.hpp"

using namespace hyprec;
using testutil::random_hyperboloid_coords;
using testutil::random_hyperboloid_point;

namespace {

// frozen closed-form reference values
constexpr double kCosh1 = 1.5430806348152438;
constexpr double kSinh1 = 1.1752011936438015;
constexpr double kInvSinh1 = 0.85091812823932155;

Vec origin(int dim) {
    Vec o(static_cast<std::size_t>(dim) + 1, 0.0);
    o[0] = 1.0;
    return o;
}

// point at arc length alpha along the first spatial axis
Vec axis_point(int dim, double alpha) {
    Vec x(static_cast<std::size_t>(dim) + 1, 0.0);
    x[0] = std::cosh(alpha);
    x[1] = std::sinh(alpha);
    return x;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("minkowski inner product and axis distances") {
    Vec o = origin(2);
    CHECK(minkowski_inner(o, o) == doctest::Approx(-1.0).epsilon(1e-15));

    Vec x = axis_point(2, 1.0);
    CHECK(x[0] == doctest::Approx(kCosh1).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(kSinh1).epsilon(1e-15));
    // d(origin, x) = alpha exactly
    CHECK(hyperboloid_distance(o.data(), x.data(), o.size()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // antipodal along the axis: d = 2 alpha
    Vec y = axis_point(2, -1.0);
    CHECK(hyperboloid_distance(x.data(), y.data(), x.size()) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("self distance is exactly zero despite round-off") {
    Rng rng(7, 1);
    for (int t = 0; t < 1000; ++t) {
        Vec x = random_hyperboloid_coords(rng, 5, 2.0);
        CHECK(hyperboloid_distance(x.data(), x.data(), x.size()) == 0.0);
    }
}

TEST_CASE("distance symmetry and triangle inequality") {
    Rng rng(11, 2);
    for (int t = 0; t < 500; ++t) {
        Vec a = random_hyperboloid_coords(rng, 4);
        Vec b = random_hyperboloid_coords(rng, 4);
        Vec c = random_hyperboloid_coords(rng, 4);
        double dab = hyperboloid_distance(a.data(), b.data(), a.size());
        double dba = hyperboloid_distance(b.data(), a.data(), a.size());
        double dac = hyperboloid_distance(a.data(), c.data(), a.size());
        double dcb = hyperboloid_distance(c.data(), b.data(), a.size());
        CHECK(dab == doctest::Approx(dba).epsilon(1e-12));
        CHECK(dab <= dac + dcb + 1e-9);
    }
}

TEST_CASE("klein and poincare round trips stay on the sheet") {
    Rng rng(13, 3);
    for (int t = 0; t < 1000; ++t) {
        HyperboloidPoint x = random_hyperboloid_point(rng, 3, 2.5);
        HyperboloidPoint via_k = klein_to_hyperboloid(hyperboloid_to_klein(x));
        HyperboloidPoint via_p =
            poincare_to_hyperboloid(hyperboloid_to_poincare(x));
        for (std::size_t c = 0; c < x.coords.size(); ++c) {
            CHECK(std::abs(via_k.coords[c] - x.coords[c]) <= 1e-9);
            CHECK(std::abs(via_p.coords[c] - x.coords[c]) <= 1e-9);
        }
        CHECK(on_hyperboloid(via_k.coords));
        CHECK(on_hyperboloid(via_p.coords));
    }
}

TEST_CASE("cross-model distance agreement") {
    Rng rng(17, 4);
    for (int t = 0; t < 1000; ++t) {
        HyperboloidPoint u = random_hyperboloid_point(rng, 3, 2.0);
        HyperboloidPoint v = random_hyperboloid_point(rng, 3, 2.0);
        double dh = hyperboloid_distance(u, v);
        double dp = poincare_distance(hyperboloid_to_poincare(u),
                                      hyperboloid_to_poincare(v));
        CHECK(std::abs(dh - dp) <= 1e-6);
    }
}

TEST_CASE("exp map: metric property, inverse of log, small-vector identity") {
    Rng rng(19, 5);
    for (int t = 0; t < 500; ++t) {
        HyperboloidPoint x = random_hyperboloid_point(rng, 4, 1.5);
        Vec ambient(x.coords.size());
        for (auto& c : ambient) c = rng.uniform(-1.0, 1.0);
        TangentVector v = project_to_tangent(x, ambient);

        // tangency: <x, v>_H == 0
        CHECK(std::abs(minkowski_inner(x.coords, v.coords)) <= 1e-9);

        HyperboloidPoint y = exp_map(x, v);
        CHECK(on_hyperboloid(y.coords));
        double vn = tangent_norm(v.coords.data(), v.coords.size());
        CHECK(std::abs(hyperboloid_distance(x, y) - vn) <= 1e-6);

        // log inverts exp
        TangentVector back = log_map(x, y);
        for (std::size_t c = 0; c < v.coords.size(); ++c)
            CHECK(std::abs(back.coords[c] - v.coords[c]) <= 1e-6);
    }

    HyperboloidPoint x = random_hyperboloid_point(rng, 4, 1.5);
    TangentVector tiny = project_to_tangent(x, Vec(x.coords.size(), 1e-14));
    HyperboloidPoint same = exp_map(x, tiny);
    CHECK(same.coords == x.coords);
}

TEST_CASE("validating constructors reject off-model points") {
    CHECK_THROWS_AS(make_hyperboloid(Vec{1.0, 1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(make_hyperboloid(Vec{-1.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(make_klein(Vec{0.8, 0.8}), std::domain_error);
    CHECK_THROWS_AS(make_poincare(Vec{1.0, 0.0}), std::domain_error);
    CHECK_NOTHROW(make_klein(Vec{0.3, -0.2}));

    HyperboloidPoint x = make_hyperboloid(origin(2));
    CHECK_THROWS_AS(make_tangent(x, Vec{1.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("distance gradient matches the worked axis example") {
    // u at the origin, v at arc length 1 along the first axis:
    // grad_v d = (1/sinh 1, 0, 0)
    HyperboloidPoint u = make_hyperboloid(origin(2));
    HyperboloidPoint v = make_hyperboloid(axis_point(2, 1.0));
    Vec g = distance_gradient(u, v);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == doctest::Approx(kInvSinh1).epsilon(1e-12));
    CHECK(std::abs(g[1]) <= 1e-12);
    CHECK(std::abs(g[2]) <= 1e-12);

    // moving v along the gradient direction increases distance
    Vec moved = v.coords;
    for (std::size_t c = 0; c < moved.size(); ++c) moved[c] += 1e-4 * g[c];
    double before = hyperboloid_distance(u.coords.data(), v.coords.data(), 3);
    double after = hyperboloid_distance(u.coords.data(), moved.data(), 3);
    CHECK(after > before);
}

TEST_CASE("distance gradient matches central finite differences") {
    Rng rng(23, 6);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        Vec u = random_hyperboloid_coords(rng, 3, 1.5);
        Vec v = random_hyperboloid_coords(rng, 3, 1.5);
        double d = hyperboloid_distance(u.data(), v.data(), u.size());
        if (d < 0.1) continue;  // keep clear of the d->0 singularity
        ++checked;
        Vec g(u.size());
        distance_gradient(u.data(), v.data(), u.size(), 1e-12, g.data());
        auto f = [&](const Vec& vv) {
            return hyperboloid_distance(u.data(), vv.data(), u.size());
        };
        for (std::size_t c = 0; c < v.size(); ++c) {
            double fd = testutil::central_diff(f, v, c);
            CHECK(testutil::grad_err(g[c], fd) <= 1e-4);
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("einstein midpoint equals the geodesic midpoint for two points") {
    Rng rng(29, 7);
    for (int t = 0; t < 300; ++t) {
        // 1-D hyperboloid embedded in 2-D coords: closed form tanh((a+b)/2)
        double a = rng.uniform(-2.0, 2.0);
        double b = rng.uniform(-2.0, 2.0);
        HyperboloidPoint xa =
            make_hyperboloid(Vec{std::cosh(a), std::sinh(a)});
        HyperboloidPoint xb =
            make_hyperboloid(Vec{std::cosh(b), std::sinh(b)});
        KleinPoint mid = einstein_midpoint(
            {hyperboloid_to_klein(xa), hyperboloid_to_klein(xb)});
        CHECK(mid.coords[0] ==
              doctest::Approx(std::tanh((a + b) / 2.0)).epsilon(1e-12));

        // same thing in 3 dimensions via exp/log halfway point
        HyperboloidPoint p = random_hyperboloid_point(rng, 3, 1.5);
        HyperboloidPoint q = random_hyperboloid_point(rng, 3, 1.5);
        TangentVector full = log_map(p, q);
        TangentVector half = full;
        for (auto& c : half.coords) c *= 0.5;
        HyperboloidPoint geo = exp_map(p, half);
        HyperboloidPoint ein = klein_to_hyperboloid(einstein_midpoint(
            {hyperboloid_to_klein(p), hyperboloid_to_klein(q)}));
        // coordinates, not distance: acosh(1 + round-off) cannot resolve
        // separations below ~1e-8, while the coords agree to round-off
        for (std::size_t c = 0; c < geo.coords.size(); ++c)
            CHECK(std::abs(geo.coords[c] - ein.coords[c]) <= 1e-9);
    }
}

TEST_CASE("einstein midpoint: weights, permutation invariance, degenerate") {
    Rng rng(31, 8);
    std::vector<KleinPoint> pts;
    for (int i = 0; i < 5; ++i)
        pts.push_back(hyperboloid_to_klein(random_hyperboloid_point(rng, 3)));

    KleinPoint unweighted = einstein_midpoint(pts);
    KleinPoint ones = einstein_midpoint(pts, {1, 1, 1, 1, 1});
    for (std::size_t c = 0; c < unweighted.coords.size(); ++c)
        CHECK(unweighted.coords[c] ==
              doctest::Approx(ones.coords[c]).epsilon(1e-14));

    std::vector<KleinPoint> rev(pts.rbegin(), pts.rend());
    KleinPoint reversed = einstein_midpoint(rev);
    for (std::size_t c = 0; c < unweighted.coords.size(); ++c)
        CHECK(std::abs(unweighted.coords[c] - reversed.coords[c]) <= 1e-12);

    KleinPoint single = einstein_midpoint({pts[0]});
    for (std::size_t c = 0; c < single.coords.size(); ++c)
        CHECK(single.coords[c] ==
              doctest::Approx(pts[0].coords[c]).epsilon(1e-14));

    CHECK_THROWS_AS(einstein_midpoint({}), std::domain_error);
    CHECK_THROWS_AS(einstein_midpoint(pts, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(einstein_midpoint(pts, {1, 1, 1, 1, -1}),
                    std::invalid_argument);
}

TEST_CASE("lorentz gamma equals the lifted timelike coordinate") {
    Rng rng(37, 9);
    for (int t = 0; t < 200; ++t) {
        HyperboloidPoint x = random_hyperboloid_point(rng, 3, 2.0);
        KleinPoint k = hyperboloid_to_klein(x);
        CHECK(lorentz_gamma(k) == doctest::Approx(x.coords[0]).epsilon(1e-10));
    }
}

TEST_CASE("frechet mean of two points sits midway on the geodesic") {
    Rng rng(41, 10);
    for (int t = 0; t < 50; ++t) {
        HyperboloidPoint a = random_hyperboloid_point(rng, 3, 1.5);
        HyperboloidPoint b = random_hyperboloid_point(rng, 3, 1.5);
        HyperboloidPoint m = frechet_mean({a, b}, 60, 0.3);
        double da = hyperboloid_distance(m, a);
        double db = hyperboloid_distance(m, b);
        double dab = hyperboloid_distance(a, b);
        CHECK(std::abs(da - db) <= 1e-6);
        CHECK(da + db == doctest::Approx(dab).epsilon(1e-6));
    }
}

TEST_CASE("minkowski metric application is an involution") {
    MinkowskiMetric g{4};
    Rng rng(43, 11);
    Vec v(5);
    for (auto& c : v) c = rng.uniform(-2.0, 2.0);
    Vec gv = g.apply(v);
    CHECK(gv[0] == doctest::Approx(-v[0]).epsilon(1e-15));
    for (std::size_t c = 1; c < v.size(); ++c)
        CHECK(gv[c] == doctest::Approx(v[c]).epsilon(1e-15));
    Vec ggv = g.apply(gv);
    for (std::size_t c = 0; c < v.size(); ++c)
        CHECK(ggv[c] == doctest::Approx(v[c]).epsilon(1e-15));
}

TEST_CASE("renormalize restores the constraint after drift") {
    Rng rng(47, 12);
    for (int t = 0; t < 200; ++t) {
        Vec x = random_hyperboloid_coords(rng, 4, 2.0);
        for (auto& c : x) c *= 1.0 + rng.uniform(-1e-3, 1e-3);
        // perturbed x is still timelike; renormalize rescales onto the sheet
        renormalize(x.data(), x.size());
        CHECK(on_hyperboloid(x));
    }
}
