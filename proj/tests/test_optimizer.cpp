#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hyprec/geometry.hpp"
#include "hyprec/losses.hpp"
#include "hyprec/optimizer.hpp"
#include "hyprec/rng.hpp"
#include "test_util.hpp"

using namespace hyprec;
using testutil::random_hyperboloid_point;

TEST_CASE("rsgd keeps iterates exactly on the manifold") {
    Rng rng(61, 300);
    RsgdConfig cfg;
    cfg.learning_rate = 0.2;
    for (int t = 0; t < 100; ++t) {
        HyperboloidPoint x = random_hyperboloid_point(rng, 4, 1.5);
        for (int step = 0; step < 20; ++step) {
            Vec g(x.coords.size());
            for (auto& c : g) c = rng.uniform(-2.0, 2.0);
            x = rsgd_step(x, g, cfg);
            CHECK(on_hyperboloid(x.coords));
        }
    }
}

TEST_CASE("rsgd descends the squared-distance objective to the target") {
    Rng rng(67, 301);
    RsgdConfig cfg;
    cfg.learning_rate = 0.05;
    for (int trial = 0; trial < 20; ++trial) {
        HyperboloidPoint x = random_hyperboloid_point(rng, 3, 1.5);
        HyperboloidPoint y = random_hyperboloid_point(rng, 3, 1.5);
        double prev = hyperboloid_distance(x, y);
        for (int step = 0; step < 300 && prev > 1e-6; ++step) {
            double d = hyperboloid_distance(x, y);
            // ambient gradient of d(x,y)^2 with respect to x
            Vec g = distance_gradient(y, x);
            for (auto& c : g) c *= 2.0 * d;
            x = rsgd_step(x, g, cfg);
            double now = hyperboloid_distance(x, y);
            // monotone while above the acosh(1 + round-off) noise floor
            if (now > 1e-6) CHECK(now <= prev + 1e-12);
            prev = now;
        }
        CHECK(prev <= 1e-6);
    }
}

TEST_CASE("rsgd rejects non-finite gradients") {
    HyperboloidPoint x = make_hyperboloid(Vec{1.0, 0.0, 0.0});
    Vec bad{0.0, std::numeric_limits<double>::quiet_NaN(), 0.0};
    RsgdConfig cfg;
    CHECK_THROWS_AS(rsgd_step(x, bad, cfg), std::runtime_error);
    Vec inf{0.0, std::numeric_limits<double>::infinity(), 0.0};
    CHECK_THROWS_AS(rsgd_step(x, inf, cfg), std::runtime_error);
}

TEST_CASE("clip disabled lets large steps through, enabled caps them") {
    HyperboloidPoint x = make_hyperboloid(Vec{1.0, 0.0, 0.0});
    // norm 8 is far beyond any clip yet still numerically representable
    // (a double hyperboloid point only satisfies the constraint to
    // ~eps * cosh^2(r), so sane step sizes stay well below r ~ 10)
    Vec g{0.0, 8.0, 0.0};

    RsgdConfig capped;
    capped.learning_rate = 1.0;
    capped.clip_norm = 1.0;
    HyperboloidPoint moved = rsgd_step(x, g, capped);
    // clipped tangent has norm 1, so the step moves exactly distance 1
    CHECK(hyperboloid_distance(x, moved) == doctest::Approx(1.0).epsilon(1e-9));

    RsgdConfig open = capped;
    open.clip_norm = 0.0;  // disabled
    HyperboloidPoint far = rsgd_step(x, g, open);
    CHECK(hyperboloid_distance(x, far) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("clip_tangent preserves direction and respects the threshold") {
    Rng rng(71, 302);
    HyperboloidPoint x = random_hyperboloid_point(rng, 3, 1.0);
    Vec ambient(x.coords.size());
    for (auto& c : ambient) c = rng.uniform(-3.0, 3.0);
    TangentVector v = project_to_tangent(x, ambient);
    double n = tangent_norm(v.coords.data(), v.coords.size());
    REQUIRE(n > 0.5);

    TangentVector clipped = clip_tangent(v, 0.5);
    double cn = tangent_norm(clipped.coords.data(), clipped.coords.size());
    CHECK(cn == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t c = 0; c < v.coords.size(); ++c)
        CHECK(clipped.coords[c] ==
              doctest::Approx(v.coords[c] * 0.5 / n).epsilon(1e-12));

    TangentVector untouched = clip_tangent(v, n * 2.0);
    CHECK(untouched.coords == v.coords);
    CHECK_THROWS_AS(clip_tangent(v, 0.0), std::invalid_argument);
}

TEST_CASE("plain sgd step with and without clipping") {
    Vec x{1.0, 2.0};
    Vec g{0.5, -1.0};
    sgd_step(x.data(), g.data(), 2, 0.1, 0.0);
    CHECK(x[0] == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(2.1).epsilon(1e-15));

    Vec y{0.0, 0.0};
    Vec big{3.0, 4.0};  // norm 5, clipped to 1 -> (0.6, 0.8)
    sgd_step(y.data(), big.data(), 2, 1.0, 1.0);
    CHECK(y[0] == doctest::Approx(-0.6).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(-0.8).epsilon(1e-12));
}

TEST_CASE("embedding init is deterministic and salt-separated") {
    std::vector<std::int64_t> freq(8, 1);
    InitConfig cfg;
    cfg.scheme = InitScheme::cube_lift;
    cfg.width = 0.001;

    EmbeddingTable a =
        init_embeddings(8, 5, Geometry::hyperboloid, cfg, freq, 42, 0);
    EmbeddingTable b =
        init_embeddings(8, 5, Geometry::hyperboloid, cfg, freq, 42, 0);
    CHECK(a.items == b.items);

    EmbeddingTable users =
        init_embeddings(8, 5, Geometry::hyperboloid, cfg, freq, 42, 1);
    CHECK(a.items != users.items);

    EmbeddingTable other =
        init_embeddings(8, 5, Geometry::hyperboloid, cfg, freq, 43, 0);
    CHECK(a.items != other.items);

    // per-index streams: a longer table extends a shorter one
    std::vector<std::int64_t> freq3(3, 1);
    EmbeddingTable prefix =
        init_embeddings(3, 5, Geometry::hyperboloid, cfg, freq3, 42, 0);
    for (std::size_t c = 0; c < prefix.items.size(); ++c)
        CHECK(prefix.items[c] == a.items[c]);
}

TEST_CASE("init schemes produce valid points with the advertised shape") {
    std::vector<std::int64_t> freq{1, 2, 10, 1000};
    for (InitScheme scheme : {InitScheme::cube_lift, InitScheme::poincare_ball,
                              InitScheme::frequency_radius}) {
        InitConfig cfg;
        cfg.scheme = scheme;
        cfg.width = 0.01;
        EmbeddingTable t =
            init_embeddings(4, 3, Geometry::hyperboloid, cfg, freq, 7, 0);
        CHECK(t.dim == 3);
        CHECK(t.item_count() == 4);
        for (std::size_t i = 0; i < t.item_count(); ++i) {
            Vec row(t.item(i), t.item(i) + t.row_len());
            CHECK(on_hyperboloid(row));
        }
    }

    // cube_lift spatial coordinates live in [-width, width]
    InitConfig cube;
    cube.scheme = InitScheme::cube_lift;
    cube.width = 0.001;
    EmbeddingTable t =
        init_embeddings(50, 4, Geometry::hyperboloid, cube, freq, 7, 0);
    for (std::size_t i = 0; i < t.item_count(); ++i)
        for (std::size_t c = 1; c < t.row_len(); ++c)
            CHECK(std::abs(t.item(i)[c]) <= 0.001);

    // frequency_radius shrinks with popularity
    InitConfig fr;
    fr.scheme = InitScheme::frequency_radius;
    fr.width = 0.1;
    EmbeddingTable ft = init_embeddings(4, 3, Geometry::hyperboloid, fr,
                                        std::vector<std::int64_t>{2, 1000, 2, 2},
                                        9, 0);
    PoincarePoint popular =
        hyperboloid_to_poincare(make_hyperboloid(Vec(ft.item(1), ft.item(1) + 4)));
    PoincarePoint rare =
        hyperboloid_to_poincare(make_hyperboloid(Vec(ft.item(0), ft.item(0) + 4)));
    auto radius = [](const PoincarePoint& p) {
        double s = 0.0;
        for (double c : p.coords) s += c * c;
        return std::sqrt(s);
    };
    CHECK(radius(popular) < radius(rare));
}

TEST_CASE("init rejects invalid configurations") {
    std::vector<std::int64_t> freq{2, 2};
    InitConfig fr;
    fr.scheme = InitScheme::frequency_radius;
    fr.width = 0.8;  // radius 0.8/ln(2) > 1: outside the ball
    CHECK_THROWS_AS(
        init_embeddings(2, 3, Geometry::hyperboloid, fr, freq, 1, 0),
        std::domain_error);

    InitConfig cube;
    CHECK_THROWS_AS(init_embeddings(0, 3, Geometry::hyperboloid, cube, {}, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        init_embeddings(2, 1, Geometry::hyperboloid, cube, freq, 1, 0),
        std::invalid_argument);
    // frequency_radius needs a frequency per row
    CHECK_THROWS_AS(init_embeddings(3, 3, Geometry::hyperboloid, fr,
                                    std::vector<std::int64_t>{1}, 1, 0),
                    std::invalid_argument);
}

TEST_CASE("euclidean init uses the same spatial draws without the lift") {
    std::vector<std::int64_t> freq(6, 1);
    InitConfig cfg;
    cfg.scheme = InitScheme::cube_lift;
    cfg.width = 0.5;
    EmbeddingTable hyp =
        init_embeddings(6, 4, Geometry::hyperboloid, cfg, freq, 21, 0);
    EmbeddingTable euc =
        init_embeddings(6, 4, Geometry::euclidean, cfg, freq, 21, 0);
    CHECK(euc.row_len() == 4);
    CHECK(hyp.row_len() == 5);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(euc.item(i)[c] ==
                  doctest::Approx(hyp.item(i)[c + 1]).epsilon(1e-15));
}
