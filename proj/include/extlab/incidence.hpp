#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "extlab/geometry.hpp"

namespace extlab {

// Line through `point` with unit direction at `angle` from the vertical.
struct Line {
    double angle = 0.0;
    Vec2 point;

    Vec2 dir() const { return {std::sin(angle), std::cos(angle)}; }
    Vec2 normal() const { return {std::cos(angle), -std::sin(angle)}; }
    // half-length of the chord cut out of B(0,1), 0 if the line misses it
    double chord_half() const;
};

// Direction-delta-separated lines with shadings Y(l): delta-ball centers in
// N_delta(l) cap B(0,1).
struct LineShading {
    double delta = 0.0;
    std::vector<Line> lines;
    std::vector<std::vector<Vec2>> shading;  // ball centers per line

    void validate() const;
};

// min over lines of |Y(l)| / |N_delta(l)|, areas by the ball-count and
// 2 delta x chord conventions.
double shading_density(const LineShading& ls);

// worst ratio max_{l, J} |Y(l) cap J| / |Y(l)| over delta x delta^{eps1}
// sub-tubes J slid along the line in delta/2 steps.
double two_ends_statistic(const LineShading& ls, double eps1);

struct FurstenbergRecord {
    double union_area = 0.0;  // rasterized at delta/2
    double sum_area = 0.0;    // sum over lines, same rasterization
    double lambda = 0.0;
    double lower = 0.0;  // delta^{eps1/2} lambda^{1/2} sum_l |Y(l)|
    double ratio = 0.0;
};
FurstenbergRecord furstenberg_ratio(const LineShading& ls, double eps1);

// delta x 1 tube for the dual corollary, direction angle + signed offset
struct DualTube {
    double angle = 0.0;
    double offset = 0.0;
};

struct DualTubeRecord {
    std::int64_t distinct = 0;
    double lower = 0.0;  // delta^{eps1/2} M^{3/2} delta^{1/2} #Q
    double ratio = 0.0;
    double worst_arc_concentration = 0.0;  // max_sigma #T_sigma(Q) / #T(Q)
};

// Counts distinct tubes (deduplicated at delta granularity in direction and
// offset) against the corollary's lower expression. Throws unless every
// #T(Q) >= M and every delta^{eps1}-arc holds at most C delta^{eps2} #T(Q).
DualTubeRecord dual_tube_count(const std::vector<Vec2>& balls, double delta,
                               const std::vector<std::vector<DualTube>>& tubes_per_ball,
                               double eps1, double eps2, std::int64_t M,
                               double concentration_constant = 4.0);

// configuration generators for the experiments
LineShading make_random_two_ends(double delta, double lambda, std::uint64_t seed);
LineShading make_bush_shading(double delta, const Vec2& root);
LineShading make_train_tracks(double delta, std::uint64_t seed);

// rasterized union of all shadings at delta/2 resolution as a binary PGM
void write_union_pgm(const LineShading& ls, const std::string& path);

}  // namespace extlab
