#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "vdt/image.hpp"

namespace vdt {

/// Structuring element: a set of (dx, dy) offsets probed relative to the
/// anchor pixel. Must be nonempty and contain the origin, which makes
/// dilation extensive and erosion anti-extensive.
class StructuringElement {
 public:
  explicit StructuringElement(std::vector<Eigen::Vector2i> offsets)
      : offsets_(std::move(offsets)) {
    if (offsets_.empty()) {
      throw std::invalid_argument("StructuringElement: offset set is empty");
    }
    std::sort(offsets_.begin(), offsets_.end(), [](const auto& a, const auto& b) {
      return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
    });
    offsets_.erase(std::unique(offsets_.begin(), offsets_.end(),
                               [](const auto& a, const auto& b) { return a == b; }),
                   offsets_.end());
    const bool has_origin = std::any_of(offsets_.begin(), offsets_.end(), [](const auto& o) {
      return o.x() == 0 && o.y() == 0;
    });
    if (!has_origin) {
      throw std::invalid_argument("StructuringElement: offset set must contain the origin");
    }
  }

  /// Full square of odd side length centered on the origin.
  static StructuringElement square(int size) {
    if (size < 1 || size % 2 == 0) {
      throw std::invalid_argument("StructuringElement::square: size must be odd and >= 1");
    }
    const int radius = size / 2;
    std::vector<Eigen::Vector2i> offs;
    offs.reserve(static_cast<std::size_t>(size) * size);
    for (int dy = -radius; dy <= radius; ++dy) {
      for (int dx = -radius; dx <= radius; ++dx) {
        offs.emplace_back(dx, dy);
      }
    }
    return StructuringElement(std::move(offs));
  }

  /// Mirror through the origin (the hat operator used by dilation).
  StructuringElement reflected() const {
    std::vector<Eigen::Vector2i> offs;
    offs.reserve(offsets_.size());
    for (const auto& o : offsets_) offs.emplace_back(-o.x(), -o.y());
    return StructuringElement(std::move(offs));
  }

  const std::vector<Eigen::Vector2i>& offsets() const { return offsets_; }

  /// Chebyshev extent, handy for border-safe test regions.
  int radius() const {
    int r = 0;
    for (const auto& o : offsets_) r = std::max({r, std::abs(o.x()), std::abs(o.y())});
    return r;
  }

 private:
  std::vector<Eigen::Vector2i> offsets_;  // sorted (y, x), deduplicated
};

/// Erosion with zero padding: output pixel is white iff every offset of the
/// structuring element lands on a white pixel; out-of-bounds counts black.
inline BinaryImage erode(const BinaryImage& img, const StructuringElement& se) {
  const Eigen::Index h = img.height();
  const Eigen::Index w = img.width();
  BinaryImage out(w, h);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      bool all_white = true;
      for (const auto& o : se.offsets()) {
        const Eigen::Index xx = x + o.x();
        const Eigen::Index yy = y + o.y();
        if (xx < 0 || yy < 0 || xx >= w || yy >= h || img.v(yy, xx) == kBlack) {
          all_white = false;
          break;
        }
      }
      if (all_white) out.v(y, x) = kWhite;
    }
  }
  return out;
}

/// Dilation: output pixel is white iff the reflected structuring element,
/// translated there, overlaps at least one white pixel. Output is clipped to
/// the image bounds.
inline BinaryImage dilate(const BinaryImage& img, const StructuringElement& se) {
  const Eigen::Index h = img.height();
  const Eigen::Index w = img.width();
  BinaryImage out(w, h);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      for (const auto& o : se.offsets()) {
        // reflected offset -o probed at (x, y) means reading (x - dx, y - dy)
        const Eigen::Index xx = x - o.x();
        const Eigen::Index yy = y - o.y();
        if (xx >= 0 && yy >= 0 && xx < w && yy < h && img.v(yy, xx) == kWhite) {
          out.v(y, x) = kWhite;
          break;
        }
      }
    }
  }
  return out;
}

/// Opening: erosion followed by dilation. Removes specks smaller than the
/// structuring element while approximately preserving larger shapes.
inline BinaryImage morph_open(const BinaryImage& img, const StructuringElement& se) {
  return dilate(erode(img, se), se);
}

}  // namespace vdt
