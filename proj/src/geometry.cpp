#include "uavnet/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavnet/rng.hpp"

namespace uavnet {

double transmission_range(double n, double c_r) {
    if (n < 2) throw std::invalid_argument("transmission_range: n must be >= 2");
    if (c_r <= 0) throw std::invalid_argument("transmission_range: c_r must be > 0");
    return c_r * std::cbrt(std::log(n) / n);
}

CubeGrid build_cube_grid(double n, double c1, double c_r) {
    double side = c1 * transmission_range(n, c_r);
    CubeGrid grid;
    if (side >= 1.0) {
        grid.side = side;
        grid.K = 1;
        grid.degenerate = true;
        return grid;
    }
    grid.side = side;
    grid.K = static_cast<int>(std::ceil(1.0 / side));
    return grid;
}

CubeGrid build_cube_grid(const NetworkConfig& cfg) {
    cfg.validate();
    return build_cube_grid(static_cast<double>(cfg.n), cfg.c1, cfg.c_r);
}

namespace {
int fold_axis(double coord, double side, int K) {
    if (coord < 0.0 || coord > 1.0)
        throw std::domain_error("cube_index: coordinate outside [0,1]");
    int idx = static_cast<int>(coord / side);
    return idx >= K ? K - 1 : idx;
}
}  // namespace

CubeIndex cube_index(const Point3& p, const CubeGrid& grid) {
    return {fold_axis(p.x, grid.side, grid.K),
            fold_axis(p.y, grid.side, grid.K),
            fold_axis(p.z, grid.side, grid.K)};
}

int cube_l1_distance(const CubeIndex& a, const CubeIndex& b) {
    return std::abs(a.i - b.i) + std::abs(a.j - b.j) + std::abs(a.k - b.k);
}

int max_hops(const CubeGrid& grid) { return 3 * (grid.K - 1); }

std::vector<Point3> place_nodes(int n, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("place_nodes: n must be >= 2");
    std::vector<Point3> pts(n);
    for (auto& p : pts) {
        p.x = uniform01(rng);
        p.y = uniform01(rng);
        p.z = uniform01(rng);
    }
    return pts;
}

BaseStationGrid place_base_stations(double n, double c_r) {
    double r = transmission_range(n, c_r);
    int side = static_cast<int>(std::lround(1.0 / r));
    if (side < 1) side = 1;
    BaseStationGrid bs;
    bs.side = side;
    bs.m = side * side;
    bs.centers.reserve(bs.m);
    // row-major: index = j * side + i, centers at ((i+1/2)/side, (j+1/2)/side)
    for (int j = 0; j < side; ++j)
        for (int i = 0; i < side; ++i)
            bs.centers.push_back({(i + 0.5) / side, (j + 0.5) / side});
    return bs;
}

int associate_bs(const Point3& p, const BaseStationGrid& bs) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int idx = 0; idx < bs.m; ++idx) {
        double dx = p.x - bs.centers[idx][0];
        double dy = p.y - bs.centers[idx][1];
        double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = idx;
        }
    }
    return best;
}

}  // namespace uavnet
