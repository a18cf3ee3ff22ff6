#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "extlab/experiments.hpp"
#include "extlab/grid.hpp"
#include "extlab/rng.hpp"

using namespace extlab;

namespace {
Field constant_field(std::size_t n, cplx value, double cell_volume = 1.0) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {static_cast<double>(2 * i), 0.0};
    Field f;
    f.pts = SpatialPointSet::make(1e9, std::move(pts), cell_volume);
    f.values.assign(n, value);
    return f;
}
}  // namespace

TEST_CASE("grid nodes tile the interval") {
    const FrequencyGrid g = FrequencyGrid::uniform(-1.0, 1.0, 0.25);
    CHECK(g.count == 8);
    CHECK(g.node(0) == doctest::Approx(-0.875));
    CHECK(g.node(7) == doctest::Approx(0.875));
    CHECK_THROWS(FrequencyGrid::uniform(-1.0, 1.0, 0.3));  // non-integer count
    CHECK_THROWS(FrequencyGrid::uniform(-1.0, 1.0, -0.5));
}

TEST_CASE("norm: stated examples") {
    CHECK(norm(constant_field(4, {1.0, 0.0}), 2.0) == doctest::Approx(2.0));
    Field f = constant_field(2, {0.0, 0.0});
    f.values = {cplx{3.0, 0.0}, cplx{0.0, 4.0}};
    CHECK(norm(f, 2.0) == doctest::Approx(5.0));
    CHECK(norm(f, kInfinity) == doctest::Approx(4.0));
    CHECK_THROWS_WITH(norm(Field{}, 2.0), "empty domain");
    CHECK_THROWS_WITH(norm(f, 0.5), "invalid exponent");
}

TEST_CASE("norm homogeneity over random fields") {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng.below(30);
        Field f = constant_field(n, {0.0, 0.0});
        for (auto& v : f.values) v = {rng.normal(), rng.normal()};
        const double p = 1.0 + 3.0 * rng.uniform();
        const cplx c{rng.normal(), rng.normal()};
        Field cf = f;
        for (auto& v : cf.values) v *= c;
        const double lhs = norm(cf, p);
        const double rhs = std::abs(c) * norm(f, p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("Hoelder consistency") {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng.below(20);
        Field f = constant_field(n, {0.0, 0.0});
        for (auto& v : f.values) v = {rng.normal(), rng.normal()};
        const double p = 1.0 + 2.0 * rng.uniform();
        const double q = p + 0.2 + 2.0 * rng.uniform();
        const double m = static_cast<double>(n);  // total measure, cell volume 1
        CHECK(norm(f, p) <= std::pow(m, 1.0 / p - 1.0 / q) * norm(f, q) * (1.0 + 1e-12));
    }
}

TEST_CASE("mixed norm: stated examples") {
    // u == 1 on 10 x-nodes, any t-grid, q = 2 -> sqrt(10)
    std::vector<double> x(10), t(3);
    for (int i = 0; i < 10; ++i) x[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < 3; ++i) t[static_cast<std::size_t>(i)] = i;
    std::vector<cplx> v(30, cplx{1.0, 0.0});
    const ProductField u = ProductField::make(x, t, 1.0, v);
    CHECK(mixed_norm(u, 2.0) == doctest::Approx(std::sqrt(10.0)));

    // u(x,t) = t on t in {0,1}, one x-node, q = 3 -> 1
    const ProductField w =
        ProductField::make({0.0}, {0.0, 1.0}, 1.0, {cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    CHECK(mixed_norm(w, 3.0) == doctest::Approx(1.0));

    CHECK_THROWS(ProductField::make({0.0, 1.0}, {0.0}, 1.0, {cplx{1.0, 0.0}}));  // ragged
}

TEST_CASE("mixed norm composes with norm over the sup field") {
    Rng rng(13);
    std::vector<double> x(7), t(5);
    for (int i = 0; i < 7; ++i) x[static_cast<std::size_t>(i)] = 2.0 * i;
    for (int i = 0; i < 5; ++i) t[static_cast<std::size_t>(i)] = i;
    std::vector<cplx> v(35);
    for (auto& z : v) z = {rng.normal(), rng.normal()};
    const ProductField u = ProductField::make(x, t, 1.0, v);

    Field sup = constant_field(7, {0.0, 0.0});
    for (std::size_t ix = 0; ix < 7; ++ix) {
        double m = 0.0;
        for (std::size_t it = 0; it < 5; ++it) m = std::max(m, std::abs(u.at(ix, it)));
        sup.values[ix] = {m, 0.0};
    }
    CHECK(mixed_norm(u, 2.0) == doctest::Approx(norm(sup, 2.0)).epsilon(1e-13));

    // single t-node: mixed norm equals the plain norm with the same exponent
    std::vector<cplx> v1(7);
    for (std::size_t i = 0; i < 7; ++i) v1[i] = v[i * 5];
    const ProductField one_t = ProductField::make(x, {0.0}, 1.0, v1);
    Field plain = constant_field(7, {0.0, 0.0});
    plain.values = v1;
    CHECK(mixed_norm(one_t, 3.0) == doctest::Approx(norm(plain, 3.0)).epsilon(1e-13));
}

TEST_CASE("density norms: constants and the arithmetic example") {
    const FrequencyGrid g = FrequencyGrid::uniform(-1.0, 1.0, 1.0 / 512.0);
    std::vector<cplx> ones(static_cast<std::size_t>(g.count), cplx{1.0, 0.0});
    const SampledDensity f = SampledDensity::from_dense(g, ones);
    CHECK(density_lp_norm(f, 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(density_lp_norm(f, 1.0) == doctest::Approx(2.0));

    // Gauss-example density at R = 4096: ||f||_2^2 = (sqrt(R)+1)/(50 R),
    // frozen from the count-times-width oracle below
    const GaussExample ex = make_gauss_example(4);
    const double R = 4096.0;
    const double oracle = std::sqrt((std::sqrt(R) + 1.0) * 2.0 / (100.0 * R));
    CHECK(oracle == doctest::Approx(0.01781568).epsilon(1e-6));
    CHECK(density_lp_norm(ex.density, 2.0) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("weight set validation and weighted norm") {
    WeightSet w;
    w.R = 10.0;
    w.centers = {{0.0, 0.0}, {2.0, 0.0}, {0.0, 3.0}};
    w.validate();

    Field f;
    f.pts = w.to_point_set();
    f.values = {cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{1.0, 0.0}};
    // 3 unit balls of area pi each
    CHECK(norm(f, 2.0, w) == doctest::Approx(std::sqrt(3.0 * 3.14159265358979)));

    WeightSet bad = w;
    bad.centers.push_back({0.1, 0.0});
    CHECK_THROWS(bad.validate());
}
