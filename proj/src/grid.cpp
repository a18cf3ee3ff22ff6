#include "extlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extlab {

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(hi > lo)) throw std::invalid_argument("grid requires hi > lo");
    const double ratio = (hi - lo) / step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("(hi - lo) / step is not an integer");
    FrequencyGrid g;
    g.lo = lo;
    g.hi = hi;
    g.step = step;
    g.count = static_cast<std::int64_t>(rounded);
    return g;
}

FrequencyGrid FrequencyGrid::centered(std::int64_t n, double step) {
    if (n <= 0 || !(step > 0.0)) throw std::invalid_argument("bad centered grid parameters");
    FrequencyGrid g;
    g.step = step;
    g.count = n;
    g.lo = -0.5 * static_cast<double>(n) * step;
    g.hi = -g.lo;
    return g;
}

std::int64_t FrequencyGrid::cell_of(double xi) const {
    auto idx = static_cast<std::int64_t>(std::floor((xi - lo) / step));
    return std::clamp<std::int64_t>(idx, 0, count - 1);
}

SampledDensity SampledDensity::from_dense(const FrequencyGrid& g, const std::vector<cplx>& values) {
    if (static_cast<std::int64_t>(values.size()) != g.count)
        throw std::invalid_argument("dense density size does not match grid");
    SampledDensity f;
    f.grid = g;
    for (std::int64_t i = 0; i < g.count; ++i) {
        const cplx v = values[static_cast<std::size_t>(i)];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("density values must be finite");
        if (v != cplx{0.0, 0.0}) f.entries.push_back({i, v});
    }
    return f;
}

SampledDensity SampledDensity::from_entries(const FrequencyGrid& g, std::vector<Entry> entries) {
    SampledDensity f;
    f.grid = g;
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.node < b.node; });
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const Entry& e = entries[k];
        if (e.node < 0 || e.node >= g.count) throw std::invalid_argument("density node out of grid");
        if (k > 0 && entries[k - 1].node == e.node)
            throw std::invalid_argument("duplicate density node");
        if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()))
            throw std::invalid_argument("density values must be finite");
        if (e.value != cplx{0.0, 0.0}) f.entries.push_back(e);
    }
    return f;
}

double SampledDensity::support_radius() const {
    double r = 0.0;
    for (const auto& e : entries) r = std::max(r, std::abs(grid.node(e.node)));
    return r;
}

bool SampledDensity::supported_in(double lo, double hi) const {
    for (const auto& e : entries) {
        const double xi = grid.node(e.node);
        if (xi < lo || xi > hi) return false;
    }
    return true;
}

SampledDensity SampledDensity::scaled(cplx c) const {
    SampledDensity g = *this;
    if (c == cplx{0.0, 0.0}) {
        g.entries.clear();
        return g;
    }
    for (auto& e : g.entries) e.value *= c;
    return g;
}

SampledDensity SampledDensity::plus(const SampledDensity& other) const {
    if (grid.count != other.grid.count || grid.lo != other.grid.lo || grid.step != other.grid.step)
        throw std::invalid_argument("density sum requires identical grids");
    SampledDensity out;
    out.grid = grid;
    std::size_t a = 0, b = 0;
    while (a < entries.size() || b < other.entries.size()) {
        if (b == other.entries.size() ||
            (a < entries.size() && entries[a].node < other.entries[b].node)) {
            out.entries.push_back(entries[a++]);
        } else if (a == entries.size() || other.entries[b].node < entries[a].node) {
            out.entries.push_back(other.entries[b++]);
        } else {
            const cplx v = entries[a].value + other.entries[b].value;
            if (v != cplx{0.0, 0.0}) out.entries.push_back({entries[a].node, v});
            ++a;
            ++b;
        }
    }
    return out;
}

SampledDensity SampledDensity::restricted(double a, double b) const {
    SampledDensity out;
    out.grid = grid;
    for (const auto& e : entries) {
        const double xi = grid.node(e.node);
        if (xi >= a && xi < b) out.entries.push_back(e);
    }
    return out;
}

SpatialPointSet SpatialPointSet::make(double R, std::vector<Vec2> points, double cell_volume) {
    SpatialPointSet s;
    s.R = R;
    s.cell_volume = cell_volume;
    for (const auto& p : points) {
        if (p.norm() > R + 1.0) throw std::invalid_argument("point outside ball of radius R");
    }
    s.points = std::move(points);
    return s;
}

ProductField ProductField::make(std::vector<double> x, std::vector<double> t, double dx,
                                std::vector<cplx> values) {
    if (values.size() != x.size() * t.size())
        throw std::invalid_argument("ragged product grid: values size != #x * #t");
    ProductField f;
    f.x_nodes = std::move(x);
    f.t_nodes = std::move(t);
    f.dx = dx;
    f.values = std::move(values);
    return f;
}

SpatialPointSet WeightSet::to_point_set() const {
    SpatialPointSet s;
    s.R = R;
    s.points = centers;
    s.cell_volume = 3.14159265358979323846;
    return s;
}

void WeightSet::validate() const {
    for (const auto& c : centers)
        if (c.norm() > R + 1.0) throw std::invalid_argument("weight center outside B_R");
    // Separation >= 1/2 via a bucket grid; unit balls stay finite-overlapping.
    const double cell = 0.5;
    struct Key {
        std::int64_t x, y;
        bool operator<(const Key& o) const { return x < o.x || (x == o.x && y < o.y); }
    };
    std::vector<std::pair<Key, std::size_t>> buckets;
    buckets.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        buckets.push_back({{static_cast<std::int64_t>(std::floor(centers[i].x / cell)),
                            static_cast<std::int64_t>(std::floor(centers[i].y / cell))},
                           i});
    }
    std::sort(buckets.begin(), buckets.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto find_range = [&](Key k) {
        return std::equal_range(
            buckets.begin(), buckets.end(), std::make_pair(k, std::size_t{0}),
            [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const Key k{static_cast<std::int64_t>(std::floor(centers[i].x / cell)),
                    static_cast<std::int64_t>(std::floor(centers[i].y / cell))};
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto [lo, hi] = find_range({k.x + dx, k.y + dy});
                for (auto it = lo; it != hi; ++it) {
                    if (it->second == i) continue;
                    if (dist(centers[i], centers[it->second]) < 0.5)
                        throw std::invalid_argument("weight centers closer than 1/2");
                }
            }
        }
    }
}

namespace {
double checked_exponent(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("invalid exponent");
    return p;
}
}  // namespace

double norm(const Field& field, double p) {
    if (field.values.empty()) throw std::invalid_argument("empty domain");
    checked_exponent(p);
    if (p == kInfinity) {
        double m = 0.0;
        for (const auto& v : field.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (const auto& v : field.values) acc += std::pow(std::abs(v), p) * field.pts.cell_volume;
    return std::pow(acc, 1.0 / p);
}

double norm(const Field& field, double p, const WeightSet& weight) {
    if (field.values.empty()) throw std::invalid_argument("empty domain");
    if (field.pts.points.size() != weight.centers.size())
        throw std::invalid_argument("field points do not match weight centers");
    for (std::size_t i = 0; i < weight.centers.size(); ++i) {
        if (dist(field.pts.points[i], weight.centers[i]) > 1e-9)
            throw std::invalid_argument("field points do not match weight centers");
    }
    Field tmp{field.pts, field.values};
    tmp.pts.cell_volume = 3.14159265358979323846;
    return norm(tmp, p);
}

double mixed_norm(const ProductField& field, double q) {
    checked_exponent(q);
    if (field.values.empty()) throw std::invalid_argument("empty domain");
    double acc = 0.0;
    const std::size_t nt = field.t_nodes.size();
    for (std::size_t ix = 0; ix < field.x_nodes.size(); ++ix) {
        double sup = 0.0;
        for (std::size_t it = 0; it < nt; ++it) sup = std::max(sup, std::abs(field.at(ix, it)));
        if (q == kInfinity)
            acc = std::max(acc, sup);
        else
            acc += std::pow(sup, q) * field.dx;
    }
    return q == kInfinity ? acc : std::pow(acc, 1.0 / q);
}

double density_lp_norm(const SampledDensity& f, double p) {
    checked_exponent(p);
    if (p == kInfinity) {
        double m = 0.0;
        for (const auto& e : f.entries) m = std::max(m, std::abs(e.value));
        return m;
    }
    double acc = 0.0;
    for (const auto& e : f.entries) acc += std::pow(std::abs(e.value), p) * f.grid.step;
    return std::pow(acc, 1.0 / p);
}

}  // namespace extlab
