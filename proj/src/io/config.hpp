#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vdt/background.hpp"
#include "vdt/detect.hpp"
#include "vdt/synth.hpp"

namespace vdt::io {

// Flat key-value config format: one `key=value` per line, '#' comments,
// blank lines ignored. Repeated keys are kept in order (scene specs use a
// repeated `mover` key).

struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

using KvFile = std::vector<KvEntry>;

KvFile parse_kv_text(const std::string& text, const std::string& origin = "config");
KvFile read_kv(const std::filesystem::path& path);

std::optional<std::string> last_value(const KvFile& kv, const std::string& key);

/// Everything a pipeline run needs; defaults match the CLI documentation.
struct RunSettings {
  std::string input;
  std::string output_dir = "out";
  std::string background_path;  // optional precomputed background image
  std::string method = "mean";  // mean | kmeans
  DetectConfig detect;
  SamplingPolicy sampling;
  double fps = 30.0;  // timebase for frame directories: frame i is at i/fps seconds
  std::uint64_t seed = 1;
  int kmeans_frames = 20;
  bool emit_annotated = false;
  bool emit_background = false;
};

/// Applies config-file entries onto settings. Unknown keys and malformed
/// values are errors naming the key and line.
void apply_kv(RunSettings& settings, const KvFile& kv);

PixelRect parse_roi(const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

synth::SceneSpec scene_from_kv(const KvFile& kv);
synth::SceneSpec read_scene_spec(const std::filesystem::path& path);
std::string scene_to_kv_text(const synth::SceneSpec& spec);

}  // namespace vdt::io
