#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vdt {

/// Dense pixel plane. Row-major so raster scan order matches memory order.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PlaneU8 = Plane<std::uint8_t>;
using PlaneF64 = Plane<double>;

using Color = std::array<std::uint8_t, 3>;

inline constexpr std::uint8_t kWhite = 255;
inline constexpr std::uint8_t kBlack = 0;

/// Half-open pixel rectangle: x in [x, x+width), y in [y, y+height).
struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool contains(int px, int py) const {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
  bool contains(const PixelRect& o) const {
    return o.x >= x && o.y >= y && o.x + o.width <= x + width &&
           o.y + o.height <= y + height;
  }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// 8-bit RGB raster stored as three planes. Planes are indexed (y, x).
struct RgbImage {
  PlaneU8 r, g, b;

  RgbImage() = default;
  RgbImage(Eigen::Index width, Eigen::Index height)
      : r(PlaneU8::Zero(height, width)),
        g(PlaneU8::Zero(height, width)),
        b(PlaneU8::Zero(height, width)) {}

  static RgbImage constant(Eigen::Index width, Eigen::Index height, Color c) {
    RgbImage img;
    img.r = PlaneU8::Constant(height, width, c[0]);
    img.g = PlaneU8::Constant(height, width, c[1]);
    img.b = PlaneU8::Constant(height, width, c[2]);
    return img;
  }

  Eigen::Index width() const { return r.cols(); }
  Eigen::Index height() const { return r.rows(); }

  Color at(Eigen::Index x, Eigen::Index y) const { return {r(y, x), g(y, x), b(y, x)}; }
  void set(Eigen::Index x, Eigen::Index y, Color c) {
    r(y, x) = c[0];
    g(y, x) = c[1];
    b(y, x) = c[2];
  }

  bool same_size(const RgbImage& o) const {
    return width() == o.width() && height() == o.height();
  }

  friend bool operator==(const RgbImage& a, const RgbImage& b2) {
    return a.same_size(b2) && (a.r == b2.r).all() && (a.g == b2.g).all() &&
           (a.b == b2.b).all();
  }
};

/// Single-channel 8-bit intensity raster.
struct GrayImage {
  PlaneU8 v;

  GrayImage() = default;
  GrayImage(Eigen::Index width, Eigen::Index height) : v(PlaneU8::Zero(height, width)) {}

  Eigen::Index width() const { return v.cols(); }
  Eigen::Index height() const { return v.rows(); }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.v.rows() == b.v.rows() && a.v.cols() == b.v.cols() && (a.v == b.v).all();
  }
};

/// Raster restricted to {0, 255}. Produced by binarize and morphology only.
struct BinaryImage {
  PlaneU8 v;

  BinaryImage() = default;
  BinaryImage(Eigen::Index width, Eigen::Index height) : v(PlaneU8::Zero(height, width)) {}

  Eigen::Index width() const { return v.cols(); }
  Eigen::Index height() const { return v.rows(); }

  bool is_valid() const { return ((v == kBlack) || (v == kWhite)).all(); }

  Eigen::Index count_white() const {
    return (v == kWhite).count();
  }

  friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return a.v.rows() == b.v.rows() && a.v.cols() == b.v.cols() && (a.v == b.v).all();
  }
};

namespace detail {

inline void require_same_size(Eigen::Index wa, Eigen::Index ha, Eigen::Index wb,
                              Eigen::Index hb, const char* op) {
  if (wa != wb || ha != hb) {
    throw std::invalid_argument(std::string(op) + ": incompatible dimensions " +
                                std::to_string(wa) + "x" + std::to_string(ha) + " vs " +
                                std::to_string(wb) + "x" + std::to_string(hb));
  }
}

}  // namespace detail

/// Perceptual grayscale: Y = 0.299 R + 0.587 G + 0.114 B, rounded half away
/// from zero.
inline GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out;
  const PlaneF64 y = 0.299 * img.r.cast<double>() + 0.587 * img.g.cast<double>() +
                     0.114 * img.b.cast<double>();
  out.v = (y + 0.5).floor().cast<std::uint8_t>();
  return out;
}

/// Heaviside threshold: white where intensity >= threshold, black elsewhere.
inline BinaryImage binarize(const GrayImage& img, int threshold) {
  if (threshold < 0 || threshold > 255) {
    throw std::invalid_argument("binarize: threshold must be in [0, 255], got " +
                                std::to_string(threshold));
  }
  const auto t = static_cast<std::uint8_t>(threshold);
  BinaryImage out;
  out.v = (img.v >= t)
              .select(PlaneU8::Constant(img.v.rows(), img.v.cols(), kWhite),
                      PlaneU8::Zero(img.v.rows(), img.v.cols()));
  return out;
}

/// Per-pixel, per-channel absolute difference of two frames.
inline RgbImage abs_diff(const RgbImage& a, const RgbImage& b) {
  detail::require_same_size(a.width(), a.height(), b.width(), b.height(), "abs_diff");
  RgbImage out;
  out.r = (a.r.cast<int>() - b.r.cast<int>()).abs().cast<std::uint8_t>();
  out.g = (a.g.cast<int>() - b.g.cast<int>()).abs().cast<std::uint8_t>();
  out.b = (a.b.cast<int>() - b.b.cast<int>()).abs().cast<std::uint8_t>();
  return out;
}

}  // namespace vdt
