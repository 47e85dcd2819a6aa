// scribble/geometry.cc

// Copyright 2026  The scribbletext Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "scribble/geometry.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace scribble {

namespace bg = boost::geometry;

namespace {

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*ClockWise=*/false,
                                     /*Closed=*/false>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

BgPolygon ToBoost(const std::vector<Point2D>& vertices) {
  BgPolygon out;
  out.outer().reserve(vertices.size());
  for (const Point2D& p : vertices) out.outer().emplace_back(p.x, p.y);
  return out;
}

double Cross(Point2D o, Point2D a, Point2D b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double SignedArea(const std::vector<Point2D>& v) {
  double twice = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2D& a = v[i];
    const Point2D& b = v[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2;
}

// Drops repeated vertices (including an explicit closing vertex) and
// vertices where the boundary doubles back on itself.
std::vector<Point2D> CleanRing(std::vector<Point2D> v) {
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    std::vector<Point2D> out;
    out.reserve(v.size());
    for (const Point2D& p : v) {
      if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    if (out.size() != v.size()) changed = true;
    v = std::move(out);
    const std::size_t n = v.size();
    if (n < 3) break;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2D& prev = v[(i + n - 1) % n];
      const Point2D& cur = v[i];
      const Point2D& next = v[(i + 1) % n];
      const double dot =
          (cur.x - prev.x) * (next.x - cur.x) + (cur.y - prev.y) * (next.y - cur.y);
      if (Cross(prev, cur, next) == 0.0 && dot < 0.0) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return v;
}

}  // namespace

bool Point2D::IsFinite() const { return std::isfinite(x) && std::isfinite(y); }

Polyline::Polyline(std::vector<Point2D> points) : points_(std::move(points)) {
  if (points_.size() < 2)
    throw std::invalid_argument("polyline needs at least two points");
  for (const Point2D& p : points_) {
    if (!p.IsFinite()) throw std::invalid_argument("polyline point not finite");
  }
  if (!(Length() > 0.0))
    throw std::invalid_argument("polyline has zero arc length");
}

double Polyline::Length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    total += std::hypot(points_[i].x - points_[i - 1].x,
                        points_[i].y - points_[i - 1].y);
  }
  return total;
}

Polygon::Polygon(std::vector<Point2D> vertices) {
  for (const Point2D& p : vertices) {
    if (!p.IsFinite()) throw std::invalid_argument("polygon vertex not finite");
  }
  vertices_ = CleanRing(std::move(vertices));
  if (vertices_.size() < 3)
    throw std::invalid_argument("polygon needs at least three distinct vertices");
  const double area = SignedArea(vertices_);
  if (area == 0.0 || !std::isfinite(area))
    throw std::invalid_argument("degenerate polygon (zero area)");
  if (area < 0) std::reverse(vertices_.begin(), vertices_.end());
  bg::validity_failure_type failure;
  if (!bg::is_valid(ToBoost(vertices_), failure) &&
      failure != bg::failure_wrong_orientation) {
    throw std::invalid_argument("polygon is not simple (validity failure " +
                                std::to_string(static_cast<int>(failure)) + ")");
  }
}

double Polygon::Area() const { return SignedArea(vertices_); }

double Polygon::Perimeter() const {
  double total = 0.0;
  for (std::size_t i = 0, n = vertices_.size(); i < n; ++i) {
    const Point2D& a = vertices_[i];
    const Point2D& b = vertices_[(i + 1) % n];
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

bool Polygon::Contains(Point2D p) const {
  bool inside = false;
  for (std::size_t i = 0, n = vertices_.size(), j = n - 1; i < n; j = i++) {
    const Point2D& a = vertices_[i];
    const Point2D& b = vertices_[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool AxisAlignedBox::IsValid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
         std::isfinite(y2) && x1 < x2 && y1 < y2;
}

RasterGrid::RasterGrid(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("raster grid dimensions must be positive");
  if (!(fill >= 0.0 && fill <= 1.0))
    throw std::invalid_argument("raster grid value outside [0, 1]");
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

RasterGrid::RasterGrid(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("raster grid dimensions must be positive");
  if (values_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("raster grid value count != width * height");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("raster grid value outside [0, 1]");
  }
}

void RasterGrid::set(int col, int row, double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument("raster grid value outside [0, 1]");
  values_[Index(col, row)] = value;
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("mask dimensions must be positive");
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t BinaryMask::Count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  if (other.width_ != width_ || other.height_ != height_)
    throw std::invalid_argument("mask dimensions differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

BinaryMask& BinaryMask::Subtract(const BinaryMask& other) {
  if (other.width_ != width_ || other.height_ != height_)
    throw std::invalid_argument("mask dimensions differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (other.bits_[i]) bits_[i] = 0;
  }
  return *this;
}

double DistanceSquaredToSegment(Point2D p, Point2D a, Point2D b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
  return ex * ex + ey * ey;
}

double DistanceToPolyline(Point2D p, std::span<const Point2D> points) {
  if (points.empty()) throw std::invalid_argument("empty point list");
  double best = DistanceSquaredToSegment(p, points[0], points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    best = std::min(best, DistanceSquaredToSegment(p, points[i - 1], points[i]));
  }
  return std::sqrt(best);
}

bool SegmentIntersectsBox(Point2D a, Point2D b, const AxisAlignedBox& box) {
  // Liang-Barsky against the closed box.
  double t0 = 0.0, t1 = 1.0;
  const std::array<double, 2> start = {a.x, a.y};
  const std::array<double, 2> delta = {b.x - a.x, b.y - a.y};
  const std::array<double, 2> lo = {box.x1, box.y1};
  const std::array<double, 2> hi = {box.x2, box.y2};
  for (int axis = 0; axis < 2; ++axis) {
    if (delta[axis] == 0.0) {
      if (start[axis] < lo[axis] || start[axis] > hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - start[axis]) / delta[axis];
    double tb = (hi[axis] - start[axis]) / delta[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

bool BoxPolylineIntersects(const AxisAlignedBox& box, const Polyline& line) {
  const auto& pts = line.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (SegmentIntersectsBox(pts[i - 1], pts[i], box)) return true;
  }
  return false;
}

bool BoxPolygonIntersects(const AxisAlignedBox& box, const Polygon& polygon) {
  const auto& v = polygon.vertices();
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    if (SegmentIntersectsBox(v[i], v[(i + 1) % n], box)) return true;
  }
  // No edge touches the box: either the box is inside or disjoint.
  return polygon.Contains({box.x1, box.y1});
}

double BoxMaskOverlapArea(const AxisAlignedBox& box, const BinaryMask& mask) {
  // Cell [c, c+1) overlaps [x1, x2] with positive length iff c < x2 && c+1 > x1.
  const int c_lo = std::max(0, static_cast<int>(std::floor(box.x1)));
  const int c_hi =
      std::min(mask.width() - 1, static_cast<int>(std::ceil(box.x2)) - 1);
  const int r_lo = std::max(0, static_cast<int>(std::floor(box.y1)));
  const int r_hi =
      std::min(mask.height() - 1, static_cast<int>(std::ceil(box.y2)) - 1);
  std::size_t count = 0;
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      if (mask.Get(c, r)) ++count;
    }
  }
  return static_cast<double>(count);
}

double PolygonIntersectionArea(const Polygon& a, const Polygon& b) {
  BgMultiPolygon out;
  bg::intersection(ToBoost(a.vertices()), ToBoost(b.vertices()), out);
  return std::max(0.0, bg::area(out));
}

double PolygonIou(const Polygon& a, const Polygon& b) {
  const double area_a = a.Area(), area_b = b.Area();
  const double inter = PolygonIntersectionArea(a, b);
  const double uni = area_a + area_b - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Polygon BufferPolygon(const Polygon& polygon, double distance,
                      int chords_per_circle) {
  if (!(distance >= 0.0))
    throw std::invalid_argument("buffer distance must be non-negative");
  if (chords_per_circle < 4)
    throw std::invalid_argument("need at least four chords per circle");
  if (distance == 0.0) return polygon;

  BgMultiPolygon out;
  bg::buffer(ToBoost(polygon.vertices()), out,
             bg::strategy::buffer::distance_symmetric<double>(distance),
             bg::strategy::buffer::side_straight(),
             bg::strategy::buffer::join_round(chords_per_circle),
             bg::strategy::buffer::end_round(chords_per_circle),
             bg::strategy::buffer::point_circle(chords_per_circle));
  if (out.empty()) throw std::runtime_error("buffer produced no geometry");
  const auto largest = std::max_element(
      out.begin(), out.end(), [](const BgPolygon& x, const BgPolygon& y) {
        return bg::area(x) < bg::area(y);
      });
  std::vector<Point2D> ring;
  ring.reserve(largest->outer().size());
  for (const BgPoint& p : largest->outer()) ring.push_back({p.x(), p.y()});
  return Polygon(std::move(ring));
}

BinaryMask RasterizeStroke(std::span<const Point2D> points, double thickness,
                           int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("raster dimensions must be positive");
  if (!(thickness > 0.0))
    throw std::invalid_argument("stroke thickness must be positive");
  if (points.empty()) throw std::invalid_argument("empty stroke");
  BinaryMask mask(width, height);
  const double radius = thickness / 2;
  const double r2 = radius * radius;
  auto draw = [&](Point2D a, Point2D b) {
    const double min_x = std::min(a.x, b.x) - radius;
    const double max_x = std::max(a.x, b.x) + radius;
    const double min_y = std::min(a.y, b.y) - radius;
    const double max_y = std::max(a.y, b.y) + radius;
    const int c0 = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
    const int c1 = std::min(width - 1, static_cast<int>(std::floor(max_x - 0.5)));
    const int r0 = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
    const int r1 = std::min(height - 1, static_cast<int>(std::floor(max_y - 0.5)));
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        if (mask.Get(c, r)) continue;
        if (DistanceSquaredToSegment({c + 0.5, r + 0.5}, a, b) <= r2)
          mask.Set(c, r);
      }
    }
  };
  if (points.size() == 1) draw(points[0], points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) draw(points[i - 1], points[i]);
  return mask;
}

BinaryMask RasterizePolyline(const Polyline& line, double thickness, int width,
                             int height) {
  return RasterizeStroke(line.points(), thickness, width, height);
}

BinaryMask RasterizeRing(std::span<const Point2D> ring, int width, int height) {
  BinaryMask mask(width, height);
  const std::size_t n = ring.size();
  if (n < 3) return mask;
  std::vector<double> xs;
  for (int r = 0; r < height; ++r) {
    const double y = r + 0.5;
    xs.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2D& a = ring[i];
      const Point2D& b = ring[j];
      if ((a.y > y) != (b.y > y))
        xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Centers c + 0.5 in [xs[k], xs[k+1]).
      const int c0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      const int c1 = std::min(width - 1,
                              static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
      for (int c = c0; c <= c1; ++c) mask.Set(c, r);
    }
  }
  return mask;
}

BinaryMask Binarize(const RasterGrid& grid, double threshold) {
  BinaryMask mask(grid.width(), grid.height());
  const auto values = grid.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= threshold) mask.SetIndex(i);
  }
  return mask;
}

std::vector<BinaryMask> ConnectedComponents(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> label(mask.size(), -1);
  std::vector<BinaryMask> components;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask.GetIndex(seed) || label[seed] >= 0) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back(w, h);
    BinaryMask& comp = components.back();
    label[seed] = id;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      comp.SetIndex(cur);
      const int c = static_cast<int>(cur % w), r = static_cast<int>(cur / w);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int nc = c + dc, nr = r + dr;
          if (nc < 0 || nr < 0 || nc >= w || nr >= h) continue;
          const std::size_t ni = mask.Index(nc, nr);
          if (mask.GetIndex(ni) && label[ni] < 0) {
            label[ni] = id;
            queue.push_back(ni);
          }
        }
      }
    }
  }
  return components;
}

namespace {

// A unit boundary edge between a set cell and a clear one, oriented so the
// set cell is on its left in the positive-area orientation.
struct LatticeEdge {
  int from;  // vertex index
  int to;
  int dx, dy;
  int cell;  // owning set cell (local index)
};

}  // namespace

Polygon ExtractContour(const BinaryMask& component) {
  const int w = component.width(), h = component.height();
  int c_min = w, c_max = -1, r_min = h, r_max = -1;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!component.Get(c, r)) continue;
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
      r_min = std::min(r_min, r);
      r_max = std::max(r_max, r);
    }
  }
  if (c_max < 0) throw std::invalid_argument("cannot trace an empty component");

  // Local lattice over the bounding box; vertex (i, j) sits at corner
  // (c_min + i, r_min + j).
  const int bw = c_max - c_min + 1, bh = r_max - r_min + 1;
  const int vw = bw + 1;
  auto set = [&](int lc, int lr) {
    return lc >= 0 && lr >= 0 && lc < bw && lr < bh &&
           component.Get(c_min + lc, r_min + lr);
  };
  auto vid = [&](int i, int j) { return j * vw + i; };

  std::vector<LatticeEdge> edges;
  for (int lr = 0; lr < bh; ++lr) {
    for (int lc = 0; lc < bw; ++lc) {
      if (!set(lc, lr)) continue;
      const int cell = lr * bw + lc;
      if (!set(lc, lr - 1))
        edges.push_back({vid(lc, lr), vid(lc + 1, lr), 1, 0, cell});
      if (!set(lc + 1, lr))
        edges.push_back({vid(lc + 1, lr), vid(lc + 1, lr + 1), 0, 1, cell});
      if (!set(lc, lr + 1))
        edges.push_back({vid(lc + 1, lr + 1), vid(lc, lr + 1), -1, 0, cell});
      if (!set(lc - 1, lr))
        edges.push_back({vid(lc, lr + 1), vid(lc, lr), 0, -1, cell});
    }
  }

  // Up to two outgoing edges per vertex (two only at diagonal pinches).
  std::vector<std::array<int, 2>> outgoing(
      static_cast<std::size_t>(vw) * (bh + 1), {-1, -1});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    auto& slot = outgoing[edges[e].from];
    (slot[0] < 0 ? slot[0] : slot[1]) = e;
  }

  constexpr double kPinchNudge = 1e-3;
  std::vector<char> used(edges.size(), 0);
  std::vector<Point2D> best_ring;
  double best_area = 0.0;
  for (int start = 0; start < static_cast<int>(edges.size()); ++start) {
    if (used[start]) continue;
    std::vector<Point2D> ring;
    int e = start;
    while (!used[e]) {
      used[e] = 1;
      const LatticeEdge& in = edges[e];
      const auto& slot = outgoing[in.to];
      int next = slot[0];
      bool pinch = false;
      if (slot[1] >= 0) {
        // 8-connectivity: leave through the other cell of the pinch.
        pinch = true;
        next = edges[slot[0]].cell != in.cell ? slot[0] : slot[1];
      }
      const LatticeEdge& out = edges[next];
      Point2D v{static_cast<double>(c_min + in.to % vw),
                static_cast<double>(r_min + in.to / vw)};
      if (pinch) {
        v.x += kPinchNudge * (out.dx - in.dx);
        v.y += kPinchNudge * (out.dy - in.dy);
        ring.push_back(v);
      } else if (in.dx != out.dx || in.dy != out.dy) {
        ring.push_back(v);  // corners only; straight runs collapse
      }
      e = next;
    }
    const double area = SignedArea(ring);
    if (area > best_area) {
      best_area = area;
      best_ring = std::move(ring);
    }
  }
  return Polygon(std::move(best_ring));
}

}  // namespace scribble
