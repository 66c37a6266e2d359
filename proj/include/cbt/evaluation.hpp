#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

#include "cbt/error.hpp"
#include "cbt/geometry.hpp"

namespace cbt {

struct RasterGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  RasterGrid() = default;
  RasterGrid(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t count_nonzero() const {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return v != 0.0; }));
  }
};

namespace detail {

inline void draw_line(RasterGrid& grid, int x0, int y0, int x1, int y1) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    grid.at(x0, y0) = 1.0;
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

inline int to_pixel(double v, int size) {
  return static_cast<int>(std::lround(std::clamp(v, 0.0, static_cast<double>(size - 1))));
}

// Squared 1-D distance transform of `f` (lower envelope of parabolas).
inline void edt_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -inf : ((f[q] + double(q) * q) - (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) /
                               (2.0 * q - 2.0 * v[k - 1]);
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double diff = q - v[j];
    d[q] = diff * diff + f[v[j]];
  }
}

}  // namespace detail

/// Binary image of the polygon outline (1 on the boundary, interior left 0).
/// Vertices are rounded to the nearest pixel and clamped into the frame.
inline RasterGrid rasterize_boundary(const Polygon& p, int width, int height) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidConfig, "raster size must be positive");
  RasterGrid grid(width, height);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [a, b] = p.edge(i);
    detail::draw_line(grid, detail::to_pixel(a.x, width), detail::to_pixel(a.y, height),
                      detail::to_pixel(b.x, width), detail::to_pixel(b.y, height));
  }
  return grid;
}

/// Exact Euclidean distance from every pixel to the nearest nonzero pixel of
/// `mask` (separable two-pass transform).
inline RasterGrid distance_transform(const RasterGrid& mask) {
  if (mask.count_nonzero() == 0) throw Error(ErrorCode::EmptyMask, "distance transform of an empty mask");
  const double inf = std::numeric_limits<double>::infinity();
  const int w = mask.width, h = mask.height;
  RasterGrid out(w, h);
  const int longest = std::max(w, h);
  std::vector<double> f(longest), d(longest), z(longest + 1);
  std::vector<int> v(longest);

  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = mask.at(x, y) != 0.0 ? 0.0 : inf;
    detail::edt_1d(std::span<const double>(f.data(), h), std::span<double>(d.data(), h), v, z);
    for (int y = 0; y < h; ++y) out.at(x, y) = d[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = out.at(x, y);
    detail::edt_1d(std::span<const double>(f.data(), w), std::span<double>(d.data(), w), v, z);
    for (int x = 0; x < w; ++x) out.at(x, y) = std::sqrt(d[x]);
  }
  return out;
}

/// Sum of `dist` over the set pixels of `boundary`, over `perimeter`.
inline double directed_alignment(const RasterGrid& boundary, const RasterGrid& dist, double perimeter) {
  double sum = 0.0;
  for (std::size_t i = 0; i < boundary.values.size(); ++i) sum += boundary.values[i] * dist.values[i];
  return sum / perimeter;
}

/// Alignment error between a tracked and a ground-truth boundary: the larger
/// of the two perimeter-normalised boundary-to-distance-map sums.
inline double alignment_error(const Polygon& tracked, const Polygon& truth, int width, int height) {
  validate_polygon(tracked, 0.0);
  validate_polygon(truth, 0.0);
  const RasterGrid b_tracked = rasterize_boundary(tracked, width, height);
  const RasterGrid b_truth = rasterize_boundary(truth, width, height);
  const RasterGrid d_tracked = distance_transform(b_tracked);
  const RasterGrid d_truth = distance_transform(b_truth);
  return std::max(directed_alignment(b_tracked, d_truth, polygon_perimeter(tracked)),
                  directed_alignment(b_truth, d_tracked, polygon_perimeter(truth)));
}

/// Fraction of frames with error strictly below e_p. Lost frames are passed
/// as +inf.
inline double success_rate(std::span<const double> errors, double e_p) {
  if (errors.empty()) throw Error(ErrorCode::EmptyList, "success rate of an empty error list");
  if (!(e_p > 0.0)) throw Error(ErrorCode::InvalidConfig, "e_p must be positive");
  const auto hits = std::count_if(errors.begin(), errors.end(), [&](double e) { return e < e_p; });
  return static_cast<double>(hits) / static_cast<double>(errors.size());
}

struct SuccessCurve {
  std::vector<double> thresholds;
  std::vector<double> rates;
};

inline SuccessCurve success_curve(std::span<const double> errors, std::vector<double> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  SuccessCurve curve;
  curve.thresholds = std::move(thresholds);
  for (double t : curve.thresholds) curve.rates.push_back(success_rate(errors, t));
  return curve;
}

/// Grid "first:last:step", inclusive of `last` up to rounding.
inline std::vector<double> threshold_grid(double first, double last, double step) {
  if (!(step > 0.0) || last < first) throw Error(ErrorCode::InvalidConfig, "bad threshold grid");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(first + static_cast<double>(i) * step);
  return out;
}

}  // namespace cbt
