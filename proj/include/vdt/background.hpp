#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vdt/clustering.hpp"
#include "vdt/image.hpp"
#include "vdt/rng.hpp"

namespace vdt {

/// Frame sampling: keep frames spaced at least `interval` seconds apart, at
/// most `max_frames` of them.
struct SamplingPolicy {
  double interval = 0.5;
  std::size_t max_frames = 670;
};

struct TimedFrame {
  double timestamp = 0.0;
  RgbImage frame;
};

/// Accumulates frames for the pixel-wise mean background. Sums are 64-bit,
/// so no overflow below 2^32 frames.
class MeanBackgroundBuilder {
 public:
  MeanBackgroundBuilder(Eigen::Index width, Eigen::Index height)
      : sum_r_(Plane<std::uint64_t>::Zero(height, width)),
        sum_g_(Plane<std::uint64_t>::Zero(height, width)),
        sum_b_(Plane<std::uint64_t>::Zero(height, width)) {}

  void add_frame(const RgbImage& frame) {
    detail::require_same_size(width(), height(), frame.width(), frame.height(),
                              "MeanBackgroundBuilder::add_frame");
    sum_r_ += frame.r.cast<std::uint64_t>();
    sum_g_ += frame.g.cast<std::uint64_t>();
    sum_b_ += frame.b.cast<std::uint64_t>();
    ++count_;
  }

  /// Pixel-wise mean, rounded half away from zero. Read-only: the builder
  /// keeps accumulating afterwards.
  RgbImage finalize() const {
    if (count_ == 0) {
      throw std::logic_error("MeanBackgroundBuilder::finalize: no frames accumulated");
    }
    const std::uint64_t n = count_;
    const auto mean_plane = [n](const Plane<std::uint64_t>& sum) {
      // (2s + n) / 2n rounds s/n half away from zero for nonnegative sums.
      return ((2 * sum + n) / (2 * n)).cast<std::uint8_t>();
    };
    RgbImage out;
    out.r = mean_plane(sum_r_);
    out.g = mean_plane(sum_g_);
    out.b = mean_plane(sum_b_);
    return out;
  }

  std::uint64_t frame_count() const { return count_; }
  Eigen::Index width() const { return sum_r_.cols(); }
  Eigen::Index height() const { return sum_r_.rows(); }

 private:
  Plane<std::uint64_t> sum_r_, sum_g_, sum_b_;
  std::uint64_t count_ = 0;
};

/// Indices of the frames a sampling policy keeps: the first frame, then every
/// frame at least `interval` after the previously kept one, capped at
/// `max_frames`. Timestamps must be nondecreasing.
inline std::vector<std::size_t> sample_indices(std::span<const double> timestamps,
                                               const SamplingPolicy& policy) {
  if (policy.interval <= 0.0) {
    throw std::invalid_argument("sample_indices: interval must be > 0");
  }
  if (policy.max_frames < 1) {
    throw std::invalid_argument("sample_indices: max_frames must be >= 1");
  }
  std::vector<std::size_t> kept;
  if (timestamps.empty()) return kept;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] < timestamps[i - 1]) {
      throw std::invalid_argument("sample_indices: timestamps must be nondecreasing");
    }
  }
  kept.push_back(0);
  double last = timestamps[0];
  for (std::size_t i = 1; i < timestamps.size() && kept.size() < policy.max_frames; ++i) {
    if (timestamps[i] - last >= policy.interval) {
      kept.push_back(i);
      last = timestamps[i];
    }
  }
  return kept;
}

inline std::vector<RgbImage> sample_frames(std::span<const TimedFrame> source,
                                           const SamplingPolicy& policy) {
  std::vector<double> ts;
  ts.reserve(source.size());
  for (const auto& tf : source) ts.push_back(tf.timestamp);
  std::vector<RgbImage> out;
  for (const std::size_t i : sample_indices(ts, policy)) out.push_back(source[i].frame);
  return out;
}

namespace detail {

inline bool stack_is_gray(std::span<const RgbImage> frames) {
  for (const auto& f : frames) {
    if (!((f.r == f.g).all() && (f.g == f.b).all())) return false;
  }
  return true;
}

inline std::uint8_t lower_median(std::vector<std::uint8_t>& values) {
  const auto mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  return values[mid];
}

}  // namespace detail

/// Per-pixel K-means background baseline. For each pixel the per-frame
/// channel vectors are clustered (k = 2 by default); the cluster with the
/// most members is taken as the background and its per-channel lower median
/// becomes the output value. Ties on size go to the cluster with the lower
/// spread around its centroid. Gray stacks (all channels equal) are
/// clustered on scalar intensity instead of 3-vectors.
inline RgbImage kmeans_background(std::span<const RgbImage> frames, int k = 2,
                                  std::uint64_t seed = 0) {
  if (frames.size() < 2) {
    throw std::invalid_argument("kmeans_background: need at least 2 frames");
  }
  const Eigen::Index w = frames[0].width();
  const Eigen::Index h = frames[0].height();
  for (const auto& f : frames) {
    detail::require_same_size(w, h, f.width(), f.height(), "kmeans_background");
  }
  const auto n = static_cast<Eigen::Index>(frames.size());
  const bool gray = detail::stack_is_gray(frames);
  const Eigen::Index dims = gray ? 1 : 3;

  RgbImage out(w, h);
  PointSet samples(n, dims);
  std::vector<std::uint8_t> member_values;
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      for (Eigen::Index i = 0; i < n; ++i) {
        samples(i, 0) = frames[i].r(y, x);
        if (!gray) {
          samples(i, 1) = frames[i].g(y, x);
          samples(i, 2) = frames[i].b(y, x);
        }
      }
      const std::uint64_t pixel_seed = stream_seed(seed, static_cast<std::uint64_t>(y * w + x));
      const KmeansResult res = kmeans(samples, k, /*max_iter=*/64, /*tol=*/1e-6, pixel_seed);

      std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
      std::vector<double> spread(static_cast<std::size_t>(k), 0.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const int c = res.assignment[i];
        ++counts[c];
        spread[c] += (samples.row(i) - res.centroids.row(c)).squaredNorm();
      }
      int best = 0;
      for (int c = 1; c < k; ++c) {
        if (counts[c] > counts[best]) {
          best = c;
        } else if (counts[c] == counts[best] && counts[c] > 0 &&
                   spread[c] / static_cast<double>(counts[c]) <
                       spread[best] / static_cast<double>(counts[best])) {
          best = c;
        }
      }

      const auto channel_median = [&](const PlaneU8 RgbImage::*plane) {
        member_values.clear();
        for (Eigen::Index i = 0; i < n; ++i) {
          if (res.assignment[i] == best) {
            member_values.push_back((frames[i].*plane)(y, x));
          }
        }
        return detail::lower_median(member_values);
      };
      out.r(y, x) = channel_median(&RgbImage::r);
      if (gray) {
        out.g(y, x) = out.r(y, x);
        out.b(y, x) = out.r(y, x);
      } else {
        out.g(y, x) = channel_median(&RgbImage::g);
        out.b(y, x) = channel_median(&RgbImage::b);
      }
    }
  }
  return out;
}

}  // namespace vdt
