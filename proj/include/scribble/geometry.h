// scribble/geometry.h

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

#ifndef SCRIBBLE_GEOMETRY_H_
#define SCRIBBLE_GEOMETRY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scribble {

// Pixel model used throughout: pixel (c, r) is the half-open unit cell
// [c, c+1) x [r, r+1) with center (c + 0.5, r + 0.5). x grows rightward,
// y grows downward.

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  bool IsFinite() const;
  friend bool operator==(const Point2D&, const Point2D&) = default;
};

/// An ordered list of at least two points with positive total arc length.
class Polyline {
 public:
  /// Throws std::invalid_argument if the invariants do not hold.
  explicit Polyline(std::vector<Point2D> points);

  const std::vector<Point2D>& points() const { return points_; }
  double Length() const;

 private:
  std::vector<Point2D> points_;
};

/// Simple polygon with nonzero area, stored counter-clockwise (positive
/// shoelace area in the x/y frame as given). Construction drops repeated
/// vertices, an explicit closing vertex and zero-width spikes, and reverses
/// clockwise input. Input that is still self-intersecting is rejected.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2D> vertices);

  const std::vector<Point2D>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  double Area() const;
  double Perimeter() const;
  /// Even-odd test; points exactly on the boundary may go either way.
  bool Contains(Point2D p) const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point2D> vertices_;
};

struct AxisAlignedBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  bool IsValid() const;
  double Width() const { return x2 - x1; }
  double Height() const { return y2 - y1; }
  double Area() const { return Width() * Height(); }
  Point2D Center() const { return {(x1 + x2) / 2, (y1 + y2) / 2}; }

  friend bool operator==(const AxisAlignedBox&,
                         const AxisAlignedBox&) = default;
};

/// Row-major grid of probabilities in [0, 1].
class RasterGrid {
 public:
  RasterGrid(int width, int height, double fill = 0.0);
  RasterGrid(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int col, int row) const { return values_[Index(col, row)]; }
  /// Throws std::invalid_argument when value is outside [0, 1].
  void set(int col, int row, double value);
  std::span<const double> values() const { return values_; }

  std::size_t Index(int col, int row) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  friend bool operator==(const RasterGrid&, const RasterGrid&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

class BinaryMask {
 public:
  BinaryMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool Get(int col, int row) const { return bits_[Index(col, row)] != 0; }
  void Set(int col, int row, bool value = true) {
    bits_[Index(col, row)] = value ? 1 : 0;
  }
  bool GetIndex(std::size_t index) const { return bits_[index] != 0; }
  void SetIndex(std::size_t index, bool value = true) {
    bits_[index] = value ? 1 : 0;
  }
  std::size_t size() const { return bits_.size(); }
  std::size_t Count() const;
  bool Empty() const { return Count() == 0; }

  std::size_t Index(int col, int row) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  BinaryMask& operator|=(const BinaryMask& other);
  /// Clears every bit that is set in `other`.
  BinaryMask& Subtract(const BinaryMask& other);

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// Distances and predicates.

double DistanceSquaredToSegment(Point2D p, Point2D a, Point2D b);
double DistanceToPolyline(Point2D p, std::span<const Point2D> points);

bool SegmentIntersectsBox(Point2D a, Point2D b, const AxisAlignedBox& box);

/// True iff some segment of `line` meets the closed box; an endpoint inside
/// the box counts.
bool BoxPolylineIntersects(const AxisAlignedBox& box, const Polyline& line);

/// True iff the closed box and the closed polygon region share a point.
bool BoxPolygonIntersects(const AxisAlignedBox& box, const Polygon& polygon);

/// Number of set pixels whose cell overlaps the box with positive area.
double BoxMaskOverlapArea(const AxisAlignedBox& box, const BinaryMask& mask);

// ---------------------------------------------------------------------------
// Polygon operations (Boost.Geometry underneath).

double PolygonIntersectionArea(const Polygon& a, const Polygon& b);

/// area(a ∩ b) / area(a ∪ b).
double PolygonIou(const Polygon& a, const Polygon& b);

inline constexpr int kDefaultChordsPerCircle = 32;

/// Minkowski sum with a disk of radius `distance`, round joins with
/// `chords_per_circle` segments per full turn. Holes in the result are
/// dropped. distance == 0 returns the input unchanged; distance < 0 throws.
Polygon BufferPolygon(const Polygon& polygon, double distance,
                      int chords_per_circle = kDefaultChordsPerCircle);

// ---------------------------------------------------------------------------
// Raster operations.

/// Sets pixel (c, r) iff its center lies within thickness / 2 of the line.
BinaryMask RasterizePolyline(const Polyline& line, double thickness, int width,
                             int height);

/// Same predicate over an arbitrary point sequence; a single point
/// rasterizes as a disk.
BinaryMask RasterizeStroke(std::span<const Point2D> points, double thickness,
                           int width, int height);

/// Sets pixel (c, r) iff its center is inside the ring (even-odd rule).
/// The ring need not be simple.
BinaryMask RasterizeRing(std::span<const Point2D> ring, int width, int height);

/// Pixel set iff value >= threshold.
BinaryMask Binarize(const RasterGrid& grid, double threshold);

/// 8-connected components, ordered by their first pixel in row-major order.
std::vector<BinaryMask> ConnectedComponents(const BinaryMask& mask);

/// Outer boundary of the set pixels, traced along pixel edges. For a mask
/// with several 8-connected pieces the largest outer ring is returned.
/// Holes are ignored. Throws std::invalid_argument for an empty mask.
Polygon ExtractContour(const BinaryMask& component);

}  // namespace scribble

#endif  // SCRIBBLE_GEOMETRY_H_
