#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdt/image.hpp"
#include "vdt/rng.hpp"

namespace vdt::synth {

struct BackdropSpec {
  enum class Kind { kFlat, kGradient, kChecker };

  Kind kind = Kind::kFlat;
  Color c0 = {90, 90, 90};
  Color c1 = {90, 90, 90};  // gradient right edge / checker alternate cell
  int cell = 8;             // checker cell side
};

/// A rectangle moving at constant velocity, wrapping at the frame edges
/// (torus), visible from its entry frame onward.
struct MoverSpec {
  int width = 0;
  int height = 0;
  int x0 = 0;
  int y0 = 0;
  int vx = 0;
  int vy = 0;
  Color color = {200, 200, 200};
  int phase = 0;  // first frame the mover is rendered in
};

struct ParkedSpec {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  Color color = {120, 120, 120};
};

struct SceneSpec {
  int width = 128;
  int height = 128;
  int frame_count = 100;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
  BackdropSpec backdrop;
  std::vector<MoverSpec> movers;
  std::optional<ParkedSpec> parked;
};

struct FrameTruth {
  int active_mover_count = 0;
  std::vector<PixelRect> footprints;  // wrapped movers split into up to 4 rects
};

struct GroundTruth {
  RgbImage true_background;
  std::vector<FrameTruth> per_frame;
};

struct Scene {
  std::vector<RgbImage> frames;
  GroundTruth truth;
};

namespace detail {

inline int wrap(int v, int m) { return ((v % m) + m) % m; }

inline void validate(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw std::invalid_argument("scene: width and height must be >= 1");
  }
  if (spec.frame_count < 1) throw std::invalid_argument("scene: frames must be >= 1");
  if (spec.noise_sigma < 0.0) throw std::invalid_argument("scene: noise_sigma must be >= 0");
  for (std::size_t i = 0; i < spec.movers.size(); ++i) {
    if (spec.movers[i].width < 1 || spec.movers[i].height < 1) {
      throw std::invalid_argument("scene: mover " + std::to_string(i) + " has zero area");
    }
  }
  if (spec.parked && (spec.parked->width < 1 || spec.parked->height < 1)) {
    throw std::invalid_argument("scene: parked rectangle has zero area");
  }
  if (spec.backdrop.kind == BackdropSpec::Kind::kChecker && spec.backdrop.cell < 1) {
    throw std::invalid_argument("scene: checker cell must be >= 1");
  }
}

// Stamps a rectangle with torus wrapping; returns the 1, 2 or 4 unwrapped
// pieces as half-open rects.
inline std::vector<PixelRect> stamp_wrapped(RgbImage& img, int x, int y, int w, int h,
                                            Color color) {
  const int iw = static_cast<int>(img.width());
  const int ih = static_cast<int>(img.height());
  const int px = wrap(x, iw);
  const int py = wrap(y, ih);
  const int w0 = std::min(w, iw - px);
  const int h0 = std::min(h, ih - py);
  std::vector<PixelRect> pieces;
  const auto add = [&](int rx, int ry, int rw, int rh) {
    if (rw <= 0 || rh <= 0) return;
    pieces.push_back({rx, ry, rw, rh});
    for (int yy = ry; yy < ry + rh; ++yy) {
      for (int xx = rx; xx < rx + rw; ++xx) {
        img.set(xx, yy, color);
      }
    }
  };
  add(px, py, w0, h0);
  add(0, py, w - w0, h0);
  add(px, 0, w0, h - h0);
  add(0, 0, w - w0, h - h0);
  return pieces;
}

}  // namespace detail

/// The static scene: procedural backdrop plus the parked rectangle, no noise.
inline RgbImage render_background(const SceneSpec& spec) {
  detail::validate(spec);
  RgbImage img(spec.width, spec.height);
  const auto& bd = spec.backdrop;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      Color c = bd.c0;
      switch (bd.kind) {
        case BackdropSpec::Kind::kFlat:
          break;
        case BackdropSpec::Kind::kGradient: {
          const double t = spec.width > 1 ? static_cast<double>(x) / (spec.width - 1) : 0.0;
          for (int ch = 0; ch < 3; ++ch) {
            const double v = bd.c0[ch] + t * (static_cast<double>(bd.c1[ch]) - bd.c0[ch]);
            c[ch] = static_cast<std::uint8_t>(std::llround(v));
          }
          break;
        }
        case BackdropSpec::Kind::kChecker:
          c = ((x / bd.cell + y / bd.cell) % 2 == 0) ? bd.c0 : bd.c1;
          break;
      }
      img.set(x, y, c);
    }
  }
  if (spec.parked) {
    const auto& p = *spec.parked;
    detail::stamp_wrapped(img, p.x, p.y, std::min(p.width, spec.width),
                          std::min(p.height, spec.height), p.color);
  }
  return img;
}

/// Renders the full sequence. Frame t is the true background with every
/// active mover (t >= phase) stamped at start + t * velocity, wrapped, plus
/// clamped Gaussian noise. Noise for frame t comes from a Box-Muller sampler
/// over Lcg64 seeded with stream_seed(seed, t); draws are consumed per pixel
/// in row-major order, channels R, G, B. Deterministic for a given spec.
inline Scene generate(const SceneSpec& spec) {
  detail::validate(spec);
  Scene scene;
  scene.truth.true_background = render_background(spec);
  scene.frames.reserve(static_cast<std::size_t>(spec.frame_count));
  scene.truth.per_frame.reserve(static_cast<std::size_t>(spec.frame_count));

  for (int t = 0; t < spec.frame_count; ++t) {
    RgbImage frame = scene.truth.true_background;
    FrameTruth truth;
    for (const auto& m : spec.movers) {
      if (t < m.phase) continue;
      ++truth.active_mover_count;
      const int x = m.x0 + t * m.vx;
      const int y = m.y0 + t * m.vy;
      auto pieces = detail::stamp_wrapped(frame, x, y, std::min(m.width, spec.width),
                                          std::min(m.height, spec.height), m.color);
      truth.footprints.insert(truth.footprints.end(), pieces.begin(), pieces.end());
    }
    if (spec.noise_sigma > 0.0) {
      GaussianSampler noise(stream_seed(spec.seed, static_cast<std::uint64_t>(t)));
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          Color c = frame.at(x, y);
          for (int ch = 0; ch < 3; ++ch) {
            const double v = c[ch] + spec.noise_sigma * noise.next();
            c[ch] = static_cast<std::uint8_t>(std::clamp<long long>(std::llround(v), 0, 255));
          }
          frame.set(x, y, c);
        }
      }
    }
    scene.frames.push_back(std::move(frame));
    scene.truth.per_frame.push_back(std::move(truth));
  }
  return scene;
}

}  // namespace vdt::synth
