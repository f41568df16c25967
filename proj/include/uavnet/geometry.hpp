#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "uavnet/config.hpp"

namespace uavnet {

struct Point3 {
    double x = 0, y = 0, z = 0;
};

/// Uniform partition of the unit cube into K x K x K cells of side `side`.
/// K = ceil(1/side), so the last cell along each axis may be truncated.
struct CubeGrid {
    double side = 1.0;
    int K = 1;
    bool degenerate = false;  ///< side >= 1 collapsed the grid to one cube
};

struct CubeIndex {
    int i = 0, j = 0, k = 0;
    bool operator==(const CubeIndex&) const = default;
};

/// sqrt(m) x sqrt(m) lattice of base stations on the unit square.
struct BaseStationGrid {
    int side = 1;  ///< sqrt(m)
    int m = 1;
    std::vector<std::array<double, 2>> centers;
};

/// r(n) = c_r * (ln n / n)^(1/3). Accepts real n >= 2.
double transmission_range(double n, double c_r);

CubeGrid build_cube_grid(const NetworkConfig& cfg);
CubeGrid build_cube_grid(double n, double c1, double c_r);

/// Cell of p, coordinates folded into the last cell at the upper boundary.
CubeIndex cube_index(const Point3& p, const CubeGrid& grid);

int cube_l1_distance(const CubeIndex& a, const CubeIndex& b);

/// Largest possible L1 distance on the grid: 3(K-1).
int max_hops(const CubeGrid& grid);

/// n i.i.d. uniform points in the unit cube; deterministic under the rng state.
std::vector<Point3> place_nodes(int n, std::mt19937_64& rng);

/// Lattice with sqrt(m) = round(1/r(n)).
BaseStationGrid place_base_stations(double n, double c_r);

/// Index of the nearest base station to the ground projection of p;
/// ties resolve to the lowest index.
int associate_bs(const Point3& p, const BaseStationGrid& bs);

}  // namespace uavnet
