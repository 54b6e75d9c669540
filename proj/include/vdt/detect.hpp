#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vdt/clustering.hpp"
#include "vdt/image.hpp"
#include "vdt/morphology.hpp"

namespace vdt {

struct DetectConfig {
  int threshold = 30;     // binarization cutoff on the difference image
  int se_size = 3;        // square structuring element side, odd
  double epsilon = 15.0;  // DBSCAN neighborhood radius, pixels
  int min_pts = 40;       // DBSCAN density threshold
  int stride = 2;         // foreground subsampling step in both axes
  std::optional<PixelRect> roi;
};

/// Validates a config against the frame dimensions it will be applied to.
inline void validate(const DetectConfig& cfg, Eigen::Index width, Eigen::Index height) {
  if (cfg.threshold < 0 || cfg.threshold > 255) {
    throw std::invalid_argument("detect config: threshold must be in [0, 255]");
  }
  if (cfg.se_size < 1 || cfg.se_size % 2 == 0) {
    throw std::invalid_argument("detect config: se_size must be odd and >= 1");
  }
  if (cfg.epsilon <= 0.0) throw std::invalid_argument("detect config: epsilon must be > 0");
  if (cfg.min_pts < 1) throw std::invalid_argument("detect config: min_pts must be >= 1");
  if (cfg.stride < 1) throw std::invalid_argument("detect config: stride must be >= 1");
  if (cfg.roi) {
    const auto& r = *cfg.roi;
    if (r.width < 1 || r.height < 1 || r.x < 0 || r.y < 0 || r.x + r.width > width ||
        r.y + r.height > height) {
      throw std::invalid_argument("detect config: roi does not fit inside the frame");
    }
  }
}

struct VehicleCluster {
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  std::int64_t pixel_count = 0;
  // Inclusive bounding box of member pixels.
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double radius = 0.0;  // max centroid-to-member distance
};

struct DetectionResult {
  std::int64_t frame_id = 0;
  std::int64_t vehicle_count = 0;
  std::vector<VehicleCluster> clusters;
  std::int64_t foreground_pixel_count = 0;
};

/// The per-frame foreground operator: difference against the background,
/// grayscale, threshold, then open with a square structuring element.
inline BinaryImage extract_foreground(const RgbImage& frame, const RgbImage& background,
                                      const DetectConfig& cfg) {
  detail::require_same_size(frame.width(), frame.height(), background.width(),
                            background.height(), "extract_foreground");
  return morph_open(binarize(to_grayscale(abs_diff(frame, background)), cfg.threshold),
                    StructuringElement::square(cfg.se_size));
}

/// Coordinates of white mask pixels in row-major order, keeping every
/// stride-th pixel in both axes (anchored at the image origin) and dropping
/// pixels outside the ROI when one is set. Columns are (x, y).
inline PointSet foreground_points(const BinaryImage& mask, const DetectConfig& cfg) {
  std::vector<double> coords;
  for (Eigen::Index y = 0; y < mask.height(); y += cfg.stride) {
    for (Eigen::Index x = 0; x < mask.width(); x += cfg.stride) {
      if (mask.v(y, x) != kWhite) continue;
      if (cfg.roi && !cfg.roi->contains(static_cast<int>(x), static_cast<int>(y))) continue;
      coords.push_back(static_cast<double>(x));
      coords.push_back(static_cast<double>(y));
    }
  }
  PointSet points(static_cast<Eigen::Index>(coords.size() / 2), 2);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    points(i, 0) = coords[2 * i];
    points(i, 1) = coords[2 * i + 1];
  }
  return points;
}

/// Full per-frame pipeline: foreground extraction, point sampling, DBSCAN,
/// cluster summaries. Noise points are excluded; the vehicle count is the
/// number of clusters.
inline DetectionResult detect_frame(const RgbImage& frame, const RgbImage& background,
                                    const DetectConfig& cfg, std::int64_t frame_id = 0) {
  validate(cfg, frame.width(), frame.height());
  const BinaryImage mask = extract_foreground(frame, background, cfg);

  DetectionResult result;
  result.frame_id = frame_id;
  for (Eigen::Index y = 0; y < mask.height(); ++y) {
    for (Eigen::Index x = 0; x < mask.width(); ++x) {
      if (mask.v(y, x) != kWhite) continue;
      if (cfg.roi && !cfg.roi->contains(static_cast<int>(x), static_cast<int>(y))) continue;
      ++result.foreground_pixel_count;
    }
  }

  const PointSet points = foreground_points(mask, cfg);
  const ClusterLabeling labeling = dbscan(points, {cfg.epsilon, cfg.min_pts});

  result.clusters.resize(static_cast<std::size_t>(labeling.cluster_count));
  std::vector<double> sum_x(result.clusters.size(), 0.0);
  std::vector<double> sum_y(result.clusters.size(), 0.0);
  for (std::size_t c = 0; c < result.clusters.size(); ++c) {
    result.clusters[c].min_x = std::numeric_limits<int>::max();
    result.clusters[c].min_y = std::numeric_limits<int>::max();
    result.clusters[c].max_x = std::numeric_limits<int>::min();
    result.clusters[c].max_y = std::numeric_limits<int>::min();
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int label = labeling.labels[i];
    if (label == ClusterLabeling::kNoise) continue;
    auto& cluster = result.clusters[static_cast<std::size_t>(label)];
    const int px = static_cast<int>(points(i, 0));
    const int py = static_cast<int>(points(i, 1));
    ++cluster.pixel_count;
    sum_x[label] += points(i, 0);
    sum_y[label] += points(i, 1);
    cluster.min_x = std::min(cluster.min_x, px);
    cluster.min_y = std::min(cluster.min_y, py);
    cluster.max_x = std::max(cluster.max_x, px);
    cluster.max_y = std::max(cluster.max_y, py);
  }
  for (std::size_t c = 0; c < result.clusters.size(); ++c) {
    auto& cluster = result.clusters[c];
    cluster.centroid_x = sum_x[c] / static_cast<double>(cluster.pixel_count);
    cluster.centroid_y = sum_y[c] / static_cast<double>(cluster.pixel_count);
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int label = labeling.labels[i];
    if (label == ClusterLabeling::kNoise) continue;
    auto& cluster = result.clusters[static_cast<std::size_t>(label)];
    const double dx = points(i, 0) - cluster.centroid_x;
    const double dy = points(i, 1) - cluster.centroid_y;
    cluster.radius = std::max(cluster.radius, std::sqrt(dx * dx + dy * dy));
  }
  result.vehicle_count = labeling.cluster_count;
  return result;
}

namespace detail {

template <typename Put>
inline void midpoint_circle(int cx, int cy, int radius, Put&& put) {
  int x = radius;
  int y = 0;
  int err = 1 - radius;
  while (x >= y) {
    put(cx + x, cy + y);
    put(cx - x, cy + y);
    put(cx + x, cy - y);
    put(cx - x, cy - y);
    put(cx + y, cy + x);
    put(cx - y, cy + x);
    put(cx + y, cy - x);
    put(cx - y, cy - x);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

}  // namespace detail

/// Copy of the frame with a midpoint circle drawn around each cluster
/// centroid, radius at least 5 px, clipped to the image bounds.
inline RgbImage annotate(const RgbImage& frame, const DetectionResult& result, Color color) {
  RgbImage out = frame;
  const Eigen::Index w = frame.width();
  const Eigen::Index h = frame.height();
  for (const auto& cluster : result.clusters) {
    const int cx = static_cast<int>(std::llround(cluster.centroid_x));
    const int cy = static_cast<int>(std::llround(cluster.centroid_y));
    const int radius = std::max(static_cast<int>(std::llround(cluster.radius)), 5);
    detail::midpoint_circle(cx, cy, radius, [&](int px, int py) {
      if (px < 0 || py < 0 || px >= w || py >= h) return;
      out.set(px, py, color);
    });
  }
  return out;
}

}  // namespace vdt
