#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "extlab/broad.hpp"
#include "extlab/experiments.hpp"
#include "extlab/rng.hpp"

using namespace extlab;

namespace {
SpatialPointSet seeded_pts(double R, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec2> p;
    while (p.size() < n) {
        const Vec2 v{rng.uniform(-R, R), rng.uniform(-R, R)};
        if (v.norm() <= R) p.push_back(v);
    }
    return SpatialPointSet::make(R, std::move(p), 1.0);
}
}  // namespace

TEST_CASE("ath_largest: stated examples") {
    const std::vector<double> v = {5.0, 3.0, 2.0};
    CHECK(ath_largest(v, 1) == 5.0);
    CHECK(ath_largest(v, 2) == 3.0);  // size-2 subsets have mins 3, 2, 2
    CHECK(ath_largest(v, 4) == 0.0);
    CHECK_THROWS(ath_largest(v, 0));
    CHECK_THROWS(ath_largest(v, -2));
}

TEST_CASE("cap decomposition covers and assigns leftward") {
    const CapDecomposition caps = CapDecomposition::disjoint_cover(8.0);
    CHECK(caps.size() == 16);
    CHECK(caps.caps.front().halfwidth == doctest::Approx(1.0 / 16.0));
    // boundary between caps 0 and 1 belongs to cap 0
    const double edge = -1.0 + 2.0 / 16.0;
    CHECK(caps.cap_index_of(edge) == 0);
    CHECK(caps.cap_index_of(edge + 1e-9) == 1);
    CHECK(caps.cap_index_of(-1.0) == 0);
    CHECK(caps.cap_index_of(1.0) == 15);

    const CapDecomposition over = CapDecomposition::overlapping_cover(8.0);
    CHECK_FALSE(over.disjoint);
    // pointwise multiplicity 1 or 2
    for (double xi = -0.999; xi < 1.0; xi += 0.013) {
        int mult = 0;
        for (const auto& c : over.caps)
            if (xi >= c.lo() && xi <= c.hi()) ++mult;
        CHECK(mult >= 1);
        CHECK(mult <= 2);
    }
}

TEST_CASE("broad field matches subset enumeration at A extremes") {
    const double R = 64.0;
    const FrequencyGrid g = evaluation_grid(R);
    const SampledDensity f = make_random_density(g, 160, 61);
    const CapDecomposition caps = CapDecomposition::disjoint_cover(8.0);
    const SpatialPointSet pts = seeded_pts(R, 25, 62);
    const Curve parab = Curve::parabola();

    const auto mags = cap_field_magnitudes(f, parab, caps, pts);
    const Field br1 = broad_field(f, parab, caps, 1, pts);
    const Field brN = broad_field(f, parab, caps, static_cast<int>(caps.size()), pts);
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        const double mx = *std::max_element(mags[i].begin(), mags[i].end());
        const double mn = *std::min_element(mags[i].begin(), mags[i].end());
        CHECK(br1.values[i].real() == mx);
        CHECK(brN.values[i].real() == mn);
    }
}

namespace {
double subset_definition(const std::vector<double>& values, int A) {
    const int n = static_cast<int>(values.size());
    if (A > n) return 0.0;
    std::vector<int> idx(static_cast<std::size_t>(A));
    for (int i = 0; i < A; ++i) idx[static_cast<std::size_t>(i)] = i;
    double best = 0.0;
    while (true) {
        double mn = values[static_cast<std::size_t>(idx[0])];
        for (int i = 1; i < A; ++i) mn = std::min(mn, values[static_cast<std::size_t>(idx[i])]);
        best = std::max(best, mn);
        int i = A - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - A + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < A; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}
}  // namespace

TEST_CASE("broad field equals the subset definition to 0 ulps") {
    const double R = 64.0;
    const FrequencyGrid g = evaluation_grid(R);
    const SampledDensity f = make_random_density(g, 180, 66);
    const CapDecomposition caps = CapDecomposition::disjoint_cover(8.0);
    const SpatialPointSet pts = seeded_pts(R, 50, 67);
    const auto mags = cap_field_magnitudes(f, Curve::parabola(), caps, pts);
    const Field br = broad_field(f, Curve::parabola(), caps, 2, pts);
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        CHECK(br.values[i].real() == subset_definition(mags[i], 2));  // exact
    }
}

TEST_CASE("broad-narrow residual is numerically zero") {
    const double R = 64.0;
    const FrequencyGrid g = evaluation_grid(R);
    const Curve parab = Curve::parabola();
    const CapDecomposition caps = CapDecomposition::disjoint_cover(8.0);
    const SpatialPointSet pts = seeded_pts(R, 100, 63);

    const SampledDensity f = make_random_density(g, 200, 64);
    CHECK(broad_narrow_residual(f, parab, caps, 1, pts) <= 1e-9);
    CHECK(broad_narrow_residual(f, parab, caps, 3, pts) <= 1e-9);

    // single-cap f: only one term survives
    const SampledDensity fcap = make_random_density(g, 40, 65, -0.95, -0.9);
    CHECK(broad_narrow_residual(fcap, parab, caps, 2, pts) <= 1e-12);

    // the sorted-sum identity is curve-independent
    CHECK(broad_narrow_residual(f, Curve::circle_graph(), caps, 2, pts) <= 1e-9);

    const CapDecomposition over = CapDecomposition::overlapping_cover(8.0);
    CHECK_THROWS_WITH(broad_narrow_residual(f, parab, over, 2, pts),
                      "exact check needs disjoint caps");
}

TEST_CASE("broad triangle inequality is exact") {
    const double R = 64.0;
    const FrequencyGrid g = evaluation_grid(R);
    const Curve parab = Curve::parabola();
    const CapDecomposition caps = CapDecomposition::disjoint_cover(16.0);
    const SpatialPointSet pts = seeded_pts(R, 60, 71);

    const SampledDensity f1 = make_random_density(g, 150, 72);
    const SampledDensity f2 = make_random_density(g, 150, 73);
    CHECK(broad_triangle_residual(f1, f2, parab, caps, 2, 2, pts) <= 1e-9);

    // f2 = 0
    SampledDensity zero;
    zero.grid = g;
    CHECK(broad_triangle_residual(f1, zero, parab, caps, 2, 1, pts) == 0.0);

    // f1 = f2, A1 = A2 = 1: 2 (2nd largest) <= 2 (1st largest)
    CHECK(broad_triangle_residual(f1, f1, parab, caps, 1, 1, pts) == 0.0);
}

TEST_CASE("broad properties: monotone in A, bounded by the max, homogeneous") {
    const double R = 64.0;
    const FrequencyGrid g = evaluation_grid(R);
    const Curve parab = Curve::parabola();
    const CapDecomposition caps = CapDecomposition::disjoint_cover(8.0);
    const SpatialPointSet pts = seeded_pts(R, 40, 81);
    const SampledDensity f = make_random_density(g, 180, 82);

    const auto mags = cap_field_magnitudes(f, parab, caps, pts);
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        double prev = kInfinity;
        double sum = 0.0;
        for (const auto& m : mags[i]) sum += m;
        for (int A = 1; A <= static_cast<int>(caps.size()); ++A) {
            const double cur = ath_largest(mags[i], A);
            CHECK(cur <= prev);
            CHECK(cur <= sum);
            prev = cur;
        }
    }

    const cplx c{-2.5, 1.0};
    const Field br = broad_field(f, parab, caps, 2, pts);
    const Field brc = broad_field(f.scaled(c), parab, caps, 2, pts);
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        CHECK(brc.values[i].real() ==
              doctest::Approx(std::abs(c) * br.values[i].real()).epsilon(1e-12));
    }
}
