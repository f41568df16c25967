#pragma once

#include <vector>

#include "uavnet/geometry.hpp"

namespace uavnet {

/// Cubes crossed by the segment from a to b, in traversal order, starting at
/// a's cube and ending at b's cube. Parametric grid stepping: one axis per
/// step (the one with the smallest crossing parameter, ties x then y then z),
/// so consecutive cubes are face-adjacent and the path length is
/// L1(a_cube, b_cube) + 1.
std::vector<CubeIndex> route_segment(const Point3& a, const Point3& b, const CubeGrid& grid);

}  // namespace uavnet
