#pragma once

#include <span>
#include <vector>

namespace wardwalk {

// Shared-boundary segments shorter than this (in map units) are treated as
// point touches and excluded from adjacency.
inline constexpr double kLengthEpsilon = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Simple polygon ring as an open point sequence; the closing edge from the
// last point back to the first is implicit.
using Ring = std::vector<Point>;

// One simply connected polygon: an outer ring and zero or more hole rings.
struct PolygonPart {
  Ring outer;
  std::vector<Ring> holes;
};

double ring_signed_area(const Ring& ring);
double ring_length(const Ring& ring);

// Enclosed area of the part: outer ring area minus hole areas, orientation
// ignored.
double part_area(const PolygonPart& part);
double parts_area(std::span<const PolygonPart> parts);

// Total boundary length of the part, hole rings included.
double part_boundary_length(const PolygonPart& part);

// Area-weighted centroid of a set of parts, holes subtracted.
Point parts_centroid(std::span<const PolygonPart> parts);

// True iff the point lies inside the ring or on its boundary.
bool point_in_ring(Point p, const Ring& ring);

// True iff every outer-ring vertex of `inner` lies inside (or on) some outer
// ring of `outer`, and `inner` encloses strictly less area. Holes are
// ignored, so a part sitting in another's hole still counts as contained.
bool parts_contain(std::span<const PolygonPart> outer,
                   std::span<const PolygonPart> inner);

// Total length of collinear boundary overlap between the two parts' rings
// (outer rings and holes alike). Overlaps of at most kLengthEpsilon, such as
// corner touches, contribute nothing.
double shared_boundary_length(const PolygonPart& a, const PolygonPart& b);
double shared_boundary_length(std::span<const PolygonPart> a,
                              std::span<const PolygonPart> b);

}  // namespace wardwalk
