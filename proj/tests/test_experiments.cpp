#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "extlab/experiments.hpp"
#include "extlab/rng.hpp"

using namespace extlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("exponent fit: exact, constant, noisy") {
    {
        std::vector<std::pair<double, double>> pairs;
        for (double x : {1.0, 2.0, 5.0, 11.0, 30.0}) pairs.emplace_back(x, 3.0 * std::sqrt(x));
        const ExponentFit fit = exponent_fit(pairs);
        CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-10));
    }
    {
        std::vector<std::pair<double, double>> pairs;
        for (double x : {1.0, 4.0, 9.0}) pairs.emplace_back(x, 7.5);
        CHECK(exponent_fit(pairs).slope == doctest::Approx(0.0));
    }
    {
        Rng rng(17);
        std::vector<std::pair<double, double>> pairs;
        for (double x = 1.0; x <= 4096.0; x *= 4.0)
            pairs.emplace_back(x, std::pow(x, 1.0 / 6.0) * (1.0 + 0.05 * (rng.uniform() - 0.5)));
        const double slope = exponent_fit(pairs).slope;
        CHECK(slope >= 0.14);
        CHECK(slope <= 0.19);
    }
    CHECK_THROWS(exponent_fit(std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 2.0}}));
    CHECK_THROWS(exponent_fit(
        std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, -2.0}, {3.0, 3.0}}));
}

TEST_CASE("weighted ratios: zero density, single ball, homogeneity") {
    const double R = 256.0;
    const FrequencyGrid grid = evaluation_grid(R);
    const WeightSet X = generate_weight(WeightKind::random_katz_tao, R, 2,
                                        WeightParams{.count = 128, .q0 = 0});
    SampledDensity zero;
    zero.grid = grid;
    CHECK(weighted_l2_ratio(zero, X, 4.0, 2, Curve::parabola()) == 0.0);

    const SampledDensity f = make_random_density(grid, 256, 3);
    const double r1 = weighted_l2_ratio(f, X, 4.0, 2, Curve::parabola());
    const double r2 = weighted_l2_ratio(f.scaled(cplx{0.0, -3.0}), X, 4.0, 2, Curve::parabola());
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));

    // |Br_A Ef| <= ||f||_1 pointwise, single-ball sanity
    WeightSet one;
    one.R = R;
    one.centers = {{5.0, 5.0}};
    const double ratio = weighted_l2_ratio(f, one, 4.0, 2, Curve::parabola());
    const double bound = std::sqrt(kPi) * density_lp_norm(f, 1.0) /
                         (std::pow(one.area(), 2.0 / 9.0) * density_lp_norm(f, 2.0));
    CHECK(ratio <= bound * (1.0 + 1e-12));

    // single-cap f vanishes under Br_A for A >= 2
    const SampledDensity fcap = make_random_density(grid, 64, 4, -0.95, -0.9);
    CHECK(weighted_l2_ratio(fcap, X, 4.0, 2, Curve::parabola()) <= 1e-14);

    CHECK_THROWS_WITH(weighted_lq_ratio(f, X, 4.0, 2, 3.0, Curve::parabola()),
                      "q below 18/5 requires the exploration override");
    CHECK(weighted_lq_ratio(f, X, 4.0, 2, 3.0, Curve::parabola(), true) >= 0.0);
}

TEST_CASE("katz-tao precheck rejects concentrated weights") {
    const double R = 256.0;
    WeightSet bad;
    bad.R = R;
    // a half-spaced 32x32 block is 2-dimensional: counts grow like r^2, far
    // above the 8 log R allowance
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) bad.centers.push_back({0.5 * i, 0.5 * j});
    const FrequencyGrid grid = evaluation_grid(R);
    const SampledDensity f = make_random_density(grid, 64, 5);
    CHECK_THROWS(weighted_l2_ratio(f, bad, 4.0, 2, Curve::parabola()));
}

TEST_CASE("circular means: point mass and segment closed form") {
    {
        const FrostmanMeasure point =
            FrostmanMeasure::from_atoms({{{0.0, 0.0}, cplx{1.0, 0.0}, 1.0}});
        const double m = circular_means(point, 64.0, 2.0);
        CHECK(m == doctest::Approx(std::pow(2.0 * kPi, 0.5)).epsilon(1e-6));
        const double m3 = circular_means(point, 64.0, 3.0);
        CHECK(m3 == doctest::Approx(std::pow(2.0 * kPi, 1.0 / 3.0)).epsilon(1e-6));
    }
    {
        // uniform measure on [0,1] x {0}: |mu_hat(R xi)| = |sinc(R xi_1 / 2)|
        const double R = 128.0;
        const auto n = static_cast<std::size_t>(10 * R);
        std::vector<FrostmanMeasure::Atom> atoms;
        for (std::size_t k = 0; k < n; ++k)
            atoms.push_back({{(static_cast<double>(k) + 0.5) / static_cast<double>(n), 0.0},
                             cplx{1.0 / static_cast<double>(n), 0.0},
                             1.0 / static_cast<double>(n)});
        const FrostmanMeasure seg = FrostmanMeasure::from_atoms(std::move(atoms));
        const double computed = circular_means(seg, R, 2.0);
        // quadrature of the closed form over the same angle grid
        const auto n_ang = static_cast<std::int64_t>(std::ceil(2.0 * kPi * 10.0 * R));
        double acc = 0.0;
        for (std::int64_t a = 0; a < n_ang; ++a) {
            const double th = 2.0 * kPi * (static_cast<double>(a) + 0.5) / static_cast<double>(n_ang);
            const double u = R * std::cos(th) / 2.0;
            const double v = std::abs(u) < 1e-12 ? 1.0 : std::abs(std::sin(u) / u);
            acc += v * v * (2.0 * kPi / static_cast<double>(n_ang));
        }
        CHECK(computed == doctest::Approx(std::sqrt(acc)).epsilon(1e-4));
    }
}

TEST_CASE("mt weight: tube, single ball, finer-direction cross-check") {
    {
        const WeightSet tube = generate_weight(WeightKind::tube, 256.0, 0);
        CHECK(mt_weight(tube) >= 0.9 * kPi * 256.0);
    }
    {
        WeightSet one;
        one.R = 64.0;
        one.centers = {{3.0, -2.0}};
        CHECK(mt_weight(one) == doctest::Approx(kPi));
    }
    {
        // weight is monotone under adding balls
        WeightSet w = generate_weight(WeightKind::random_katz_tao, 128.0, 9,
                                      WeightParams{.count = 96, .q0 = 0});
        const double before = mt_weight(w);
        w.centers.push_back({0.0, 0.0});
        CHECK(mt_weight(w) >= before - 1e-12);
    }
}

TEST_CASE("mt weight on the arithmetic set matches a 4x finer direction scan") {
    // spec convention: direction grid 1/(4R); the finer 1/(16R) scan may only
    // move the sup by a bounded factor
    const WeightSet X = generate_weight(WeightKind::gauss_rational, 4096.0, 0);
    const double coarse = mt_weight(X);
    const double fine = mt_weight_with_direction_spacing(X, 1.0 / (16.0 * X.R));
    CHECK(fine >= coarse - 1e-9);  // finer grid can only find more
    CHECK(fine <= 1.5 * coarse);
}

TEST_CASE("weighted lq with the sup exponent stays under the L1 bound") {
    const double R = 128.0;
    const FrequencyGrid grid = evaluation_grid(R);
    const WeightSet X = generate_weight(WeightKind::random_katz_tao, R, 6,
                                        WeightParams{.count = 96, .q0 = 0});
    const SampledDensity f = make_random_density(grid, 128, 7);
    // q = infinity analog: max_X Br_A Ef <= ||f||_1
    const Field br = broad_field(f, Curve::parabola(), CapDecomposition::disjoint_cover(4.0), 2,
                                 X.to_point_set());
    CHECK(norm(br, kInfinity) <= density_lp_norm(f, 1.0) * (1.0 + 1e-12));
}

TEST_CASE("gauss dilates pass the Katz-Tao check across scales") {
    for (int q0 : {3, 5}) {
        const GaussExample ex = make_gauss_example(q0);
        CHECK(ex.weight.katz_tao_C <= 8.0 * std::log(ex.scale));
    }
}

TEST_CASE("mt ratio: zero density and exponent gate") {
    const double R = 256.0;
    const FrequencyGrid grid = evaluation_grid(R);
    const WeightSet X = generate_weight(WeightKind::random_katz_tao, R, 11,
                                        WeightParams{.count = 128, .q0 = 0});
    SampledDensity zero;
    zero.grid = grid;
    CHECK(mt_ratio(zero, X, 3.6) == 0.0);
    const SampledDensity f = make_random_density(grid, 128, 12);
    CHECK_THROWS(mt_ratio(f, X, 3.0));
    CHECK(mt_ratio(f, X, 3.0, true) >= 0.0);
    const double r1 = mt_ratio(f, X, 3.6);
    const double r2 = mt_ratio(f.scaled(cplx{2.0, 1.0}), X, 3.6);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("maximal Schrodinger record: homogeneity and direct cross-check") {
    const double R = 64.0;
    const FrequencyGrid grid = schrodinger_grid(R);
    const SampledDensity fhat = make_random_density(grid, 48, 13);
    const double q = 3.6, p = 1.0 / (1.0 - 2.0 / q);
    const MaxSchrodingerRecord rec = maximal_schrodinger_norm(fhat, R, q, p);
    CHECK(rec.lhs > 0.0);
    CHECK(rec.bound > 0.0);

    const MaxSchrodingerRecord rec2 =
        maximal_schrodinger_norm(fhat.scaled(cplx{0.0, 2.5}), R, q, p);
    CHECK(rec2.ratio == doctest::Approx(rec.ratio).epsilon(1e-12));

    // FFT fast path agrees with the direct definition at sampled (x, t)
    Rng rng(14);
    for (int t = 0; t < 5; ++t) {
        const double tt = std::floor(rng.uniform(-R, R));
        const double xx = std::floor(rng.uniform(-4.0 * R, 4.0 * R));
        const cplx direct = extension_point(fhat, Curve::parabola(), xx, tt);
        // recompute the same value through the lattice evaluator by brute
        // force over the support (the wrapper path)
        cplx acc{0.0, 0.0};
        for (const auto& e : fhat.entries) {
            const double xi = fhat.grid.node(e.node);
            const double ph = xx * xi + tt * xi * xi;
            acc += e.value * cplx{std::cos(ph), std::sin(ph)};
        }
        acc *= fhat.grid.step;
        CHECK(std::abs(direct - acc) <= 1e-12 * (1.0 + std::abs(direct)));
    }

    CHECK_THROWS(maximal_schrodinger_norm(
        make_random_density(FrequencyGrid::uniform(-1.0, 1.0, 0.25), 4, 1), R, q, p));
}

TEST_CASE("maximal Schrodinger fast path equals the mixed norm of the wrapper") {
    // dual route: the FFT lattice evaluation against the bit-exact
    // schrodinger_evaluate wrapper composed with mixed_norm
    const double R = 64.0;
    const FrequencyGrid grid = schrodinger_grid(R);
    const SampledDensity fhat = make_random_density(grid, 40, 23);
    const double q = 3.6, p = 1.0 / (1.0 - 2.0 / q);
    const MaxSchrodingerRecord rec = maximal_schrodinger_norm(fhat, R, q, p);

    std::vector<double> xs, ts;
    for (double x = -4.0 * R; x <= 4.0 * R; x += 1.0) xs.push_back(x);
    for (double t = -R; t <= R; t += 1.0) ts.push_back(t);
    const ProductField u = schrodinger_evaluate(fhat, xs, ts);
    CHECK(rec.lhs == doctest::Approx(mixed_norm(u, q)).epsilon(1e-9));
}

TEST_CASE("gauss sweep on the small prefix stays near the sharp exponents") {
    const std::vector<int> q0 = {3, 4, 5};
    const GaussSweepResult res = gauss_sharpness_sweep(q0, 2);
    CHECK(res.rows.size() == 3);
    for (const auto& r : res.rows) {
        CHECK(r.oracle_max_rel_err <= 0.05);
        CHECK(r.pointwise_fraction >= 0.5);
        CHECK(r.X_area >= r.R / 64.0);
        CHECK(r.X_area <= 64.0 * r.R);
    }
    CHECK(res.ratio_vs_area.slope >= 0.05);
    CHECK(res.ratio_vs_area.slope <= 0.3);
    CHECK(res.median_vs_R.slope >= -0.75);
    CHECK(res.median_vs_R.slope <= -0.45);
}
