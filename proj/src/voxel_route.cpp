#include "uavnet/voxel_route.hpp"

#include <cmath>
#include <limits>

namespace uavnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<CubeIndex> route_segment(const Point3& a, const Point3& b, const CubeGrid& grid) {
    const CubeIndex start = cube_index(a, grid);
    const CubeIndex end = cube_index(b, grid);

    std::vector<CubeIndex> path;
    path.reserve(cube_l1_distance(start, end) + 1);
    path.push_back(start);
    if (start == end) return path;

    const double s = grid.side;
    double pos[3] = {a.x, a.y, a.z};
    double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
    int cur[3] = {start.i, start.j, start.k};
    const int dst[3] = {end.i, end.j, end.k};

    int step[3];
    double t_max[3], t_delta[3];
    for (int ax = 0; ax < 3; ++ax) {
        if (dir[ax] > 0) step[ax] = 1;
        else if (dir[ax] < 0) step[ax] = -1;
        else step[ax] = 0;
        if (step[ax] == 0 || cur[ax] == dst[ax]) {
            t_max[ax] = kInf;
            t_delta[ax] = kInf;
        } else {
            double plane = (cur[ax] + (step[ax] > 0 ? 1 : 0)) * s;
            t_max[ax] = (plane - pos[ax]) / dir[ax];
            t_delta[ax] = s / std::fabs(dir[ax]);
        }
    }

    // Each step crosses exactly one cube face; an axis freezes once it
    // reaches the destination coordinate, which also absorbs the float
    // noise of corner-degenerate crossings.
    const int guard = 3 * grid.K + 3;
    for (int iter = 0; iter < guard; ++iter) {
        int ax = 0;
        if (t_max[1] < t_max[ax]) ax = 1;
        if (t_max[2] < t_max[ax]) ax = 2;
        if (t_max[ax] == kInf) break;
        cur[ax] += step[ax];
        if (cur[ax] == dst[ax]) t_max[ax] = kInf;
        else t_max[ax] += t_delta[ax];
        path.push_back({cur[0], cur[1], cur[2]});
        if (cur[0] == dst[0] && cur[1] == dst[1] && cur[2] == dst[2]) return path;
    }
    // Numerical corner case: finish with axis-aligned steps toward the
    // destination cube.
    while (!(cur[0] == dst[0] && cur[1] == dst[1] && cur[2] == dst[2])) {
        for (int ax = 0; ax < 3; ++ax) {
            if (cur[ax] != dst[ax]) {
                cur[ax] += cur[ax] < dst[ax] ? 1 : -1;
                break;
            }
        }
        path.push_back({cur[0], cur[1], cur[2]});
    }
    return path;
}

}  // namespace uavnet
