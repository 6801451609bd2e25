#include "wardwalk/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wardwalk/error.hpp"

namespace wardwalk {

namespace {

// Signed area and signed-area-weighted centroid of one ring, computed
// together from the shoelace terms.
struct RingMoments {
  double signed_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

RingMoments ring_moments(const Ring& ring) {
  RingMoments m;
  const std::size_t n = ring.size();
  double area2 = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    const double cross = a.x * b.y - b.x * a.y;
    area2 += cross;
    sx += (a.x + b.x) * cross;
    sy += (a.y + b.y) * cross;
  }
  m.signed_area = 0.5 * area2;
  if (m.signed_area != 0.0) {
    m.cx = sx / (3.0 * area2);
    m.cy = sy / (3.0 * area2);
  }
  return m;
}

// Length of the collinear overlap between segments p1-p2 and q1-q2; zero
// when the segments are not collinear within kLengthEpsilon.
double segment_overlap(Point p1, Point p2, Point q1, Point q2) {
  const double dx = p2.x - p1.x;
  const double dy = p2.y - p1.y;
  const double len = std::hypot(dx, dy);
  if (len <= kLengthEpsilon) return 0.0;

  const auto line_distance = [&](Point q) {
    return std::fabs((q.x - p1.x) * dy - (q.y - p1.y) * dx) / len;
  };
  if (line_distance(q1) > kLengthEpsilon || line_distance(q2) > kLengthEpsilon) {
    return 0.0;
  }

  const auto arc = [&](Point q) {
    return ((q.x - p1.x) * dx + (q.y - p1.y) * dy) / len;
  };
  const double t1 = arc(q1);
  const double t2 = arc(q2);
  const double lo = std::max(0.0, std::min(t1, t2));
  const double hi = std::min(len, std::max(t1, t2));
  return hi > lo ? hi - lo : 0.0;
}

double rings_shared_length(const Ring& a, const Ring& b) {
  double total = 0.0;
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < na; ++i) {
    const Point& p1 = a[i];
    const Point& p2 = a[(i + 1) % na];
    for (std::size_t j = 0; j < nb; ++j) {
      const double overlap = segment_overlap(p1, p2, b[j], b[(j + 1) % nb]);
      if (overlap > kLengthEpsilon) total += overlap;
    }
  }
  return total;
}

void for_each_ring(const PolygonPart& part, auto&& fn) {
  fn(part.outer);
  for (const Ring& hole : part.holes) fn(hole);
}

}  // namespace

double ring_signed_area(const Ring& ring) {
  double area2 = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    area2 += a.x * b.y - b.x * a.y;
  }
  return 0.5 * area2;
}

double ring_length(const Ring& ring) {
  double length = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    length += std::hypot(b.x - a.x, b.y - a.y);
  }
  return length;
}

double part_area(const PolygonPart& part) {
  double area = std::fabs(ring_signed_area(part.outer));
  for (const Ring& hole : part.holes) area -= std::fabs(ring_signed_area(hole));
  return area;
}

double parts_area(std::span<const PolygonPart> parts) {
  double area = 0.0;
  for (const PolygonPart& part : parts) area += part_area(part);
  return area;
}

double part_boundary_length(const PolygonPart& part) {
  double length = 0.0;
  for_each_ring(part, [&](const Ring& ring) { length += ring_length(ring); });
  return length;
}

Point parts_centroid(std::span<const PolygonPart> parts) {
  double weight = 0.0, sx = 0.0, sy = 0.0;
  for (const PolygonPart& part : parts) {
    const RingMoments outer = ring_moments(part.outer);
    const double outer_area = std::fabs(outer.signed_area);
    weight += outer_area;
    sx += outer_area * outer.cx;
    sy += outer_area * outer.cy;
    for (const Ring& hole : part.holes) {
      const RingMoments hm = ring_moments(hole);
      const double hole_area = std::fabs(hm.signed_area);
      weight -= hole_area;
      sx -= hole_area * hm.cx;
      sy -= hole_area * hm.cy;
    }
  }
  if (!(weight > 0.0) || !std::isfinite(sx) || !std::isfinite(sy)) {
    throw Error("centroid of zero-area geometry");
  }
  return {sx / weight, sy / weight};
}

bool point_in_ring(Point p, const Ring& ring) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    if (len <= kLengthEpsilon) continue;
    const double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (len * len);
    if (t >= 0.0 && t <= 1.0) {
      const double dist =
          std::fabs((p.x - a.x) * dy - (p.y - a.y) * dx) / len;
      if (dist <= kLengthEpsilon) return true;
    }
  }

  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double t = (p.y - a.y) / (b.y - a.y);
      const double x_intersect = a.x + t * (b.x - a.x);
      if (p.x < x_intersect) inside = !inside;
    }
  }
  return inside;
}

bool parts_contain(std::span<const PolygonPart> outer,
                   std::span<const PolygonPart> inner) {
  if (!(parts_area(inner) < parts_area(outer))) return false;
  for (const PolygonPart& inner_part : inner) {
    for (const Point& vertex : inner_part.outer) {
      bool covered = false;
      for (const PolygonPart& outer_part : outer) {
        if (point_in_ring(vertex, outer_part.outer)) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
  }
  return true;
}

double shared_boundary_length(const PolygonPart& a, const PolygonPart& b) {
  double total = 0.0;
  for_each_ring(a, [&](const Ring& ring_a) {
    for_each_ring(b, [&](const Ring& ring_b) {
      total += rings_shared_length(ring_a, ring_b);
    });
  });
  return total;
}

double shared_boundary_length(std::span<const PolygonPart> a,
                              std::span<const PolygonPart> b) {
  double total = 0.0;
  for (const PolygonPart& pa : a) {
    for (const PolygonPart& pb : b) total += shared_boundary_length(pa, pb);
  }
  return total;
}

}  // namespace wardwalk
