// vdt: motion-based vehicle detection toolkit.
//
// Subcommands: synth, background, detect, run, bench. Frames move between
// commands as binary PPM sequences; detection results as JSON lines.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "io/config.hpp"
#include "io/ppm.hpp"
#include "io/records.hpp"
#include "vdt/background.hpp"
#include "vdt/detect.hpp"
#include "vdt/synth.hpp"

namespace fs = std::filesystem;

namespace {

using vdt::RgbImage;
using vdt::io::RunSettings;

constexpr vdt::Color kCircleColor = {255, 0, 0};

template <typename F>
double timed_seconds(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.ppm", index);
  return buf;
}

struct FrameStack {
  std::vector<RgbImage> frames;
  std::vector<double> timestamps;
};

FrameStack load_frame_dir(const fs::path& dir, double fps) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      paths.push_back(entry.path());
    }
  }
  if (paths.empty()) {
    throw std::runtime_error("no frames found in " + dir.string());
  }
  std::sort(paths.begin(), paths.end());
  FrameStack stack;
  stack.frames.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    RgbImage img = vdt::io::read_ppm(paths[i]);
    if (!stack.frames.empty() && !img.same_size(stack.frames.front())) {
      throw std::runtime_error(paths[i].string() + ": frame dimensions differ from " +
                               paths.front().string());
    }
    stack.frames.push_back(std::move(img));
    stack.timestamps.push_back(static_cast<double>(i) / fps);
  }
  return stack;
}

// Input is either a directory of numbered frames or a scene spec file.
FrameStack load_input(const std::string& input, double fps) {
  if (input.empty()) throw std::runtime_error("no input given (use --input)");
  const fs::path path(input);
  if (fs::is_directory(path)) return load_frame_dir(path, fps);
  if (fs::is_regular_file(path)) {
    const auto scene = vdt::synth::generate(vdt::io::read_scene_spec(path));
    FrameStack stack;
    stack.frames = std::move(scene.frames);
    for (std::size_t i = 0; i < stack.frames.size(); ++i) {
      stack.timestamps.push_back(static_cast<double>(i) / fps);
    }
    return stack;
  }
  throw std::runtime_error(input + ": no such file or directory");
}

std::vector<RgbImage> sampled_frames(const FrameStack& stack, const vdt::SamplingPolicy& policy) {
  std::vector<RgbImage> out;
  for (const std::size_t i : vdt::sample_indices(stack.timestamps, policy)) {
    out.push_back(stack.frames[i]);
  }
  return out;
}

RgbImage reconstruct_background(const RunSettings& s, const std::vector<RgbImage>& sampled,
                                double* wall_seconds) {
  if (sampled.empty()) throw std::runtime_error("no frames found");
  RgbImage bg;
  double seconds = 0.0;
  if (s.method == "mean") {
    seconds = timed_seconds([&] {
      vdt::MeanBackgroundBuilder builder(sampled.front().width(), sampled.front().height());
      for (const auto& f : sampled) builder.add_frame(f);
      bg = builder.finalize();
    });
  } else {
    const std::size_t n = std::min<std::size_t>(sampled.size(),
                                                static_cast<std::size_t>(s.kmeans_frames));
    if (n < 2) throw std::runtime_error("kmeans background needs at least 2 sampled frames");
    const std::span<const RgbImage> subset(sampled.data(), n);
    seconds = timed_seconds([&] { bg = vdt::kmeans_background(subset, 2, s.seed); });
  }
  if (wall_seconds) *wall_seconds = seconds;
  return bg;
}

// Flag values land here only when given; they override config-file entries.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> input;
  std::optional<std::string> output_dir;
  std::optional<std::string> background;
  std::optional<std::string> method;
  std::optional<int> threshold;
  std::optional<int> se_size;
  std::optional<double> epsilon;
  std::optional<int> min_pts;
  std::optional<int> stride;
  std::optional<std::string> roi;
  std::optional<double> interval;
  std::optional<long long> max_frames;
  std::optional<double> fps;
  std::optional<std::uint64_t> seed;
  std::optional<int> kmeans_frames;
  bool emit_annotated = false;
  bool emit_background = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key-value config file");
  cmd->add_option("--input", o.input, "frame directory or scene spec file");
  cmd->add_option("--method", o.method, "background method: mean|kmeans")
      ->check(CLI::IsMember({"mean", "kmeans"}));
  cmd->add_option("--threshold", o.threshold, "binarization threshold (0..255)");
  cmd->add_option("--se-size", o.se_size, "structuring element size, odd");
  cmd->add_option("--epsilon", o.epsilon, "DBSCAN neighborhood radius, px");
  cmd->add_option("--min-pts", o.min_pts, "DBSCAN density threshold");
  cmd->add_option("--stride", o.stride, "foreground sampling stride");
  cmd->add_option("--roi", o.roi, "region of interest x,y,w,h");
  cmd->add_option("--interval", o.interval, "sampling interval, seconds");
  cmd->add_option("--max-frames", o.max_frames, "sampling cap");
  cmd->add_option("--fps", o.fps, "timebase for frame directories");
  cmd->add_option("--seed", o.seed, "seed for every stochastic step");
  cmd->add_option("--kmeans-frames", o.kmeans_frames, "frames used by the kmeans baseline");
}

RunSettings resolve_settings(const Overrides& o) {
  RunSettings s;
  if (o.config_path) vdt::io::apply_kv(s, vdt::io::read_kv(*o.config_path));
  if (o.input) s.input = *o.input;
  if (o.output_dir) s.output_dir = *o.output_dir;
  if (o.background) s.background_path = *o.background;
  if (o.method) s.method = *o.method;
  if (o.threshold) s.detect.threshold = *o.threshold;
  if (o.se_size) s.detect.se_size = *o.se_size;
  if (o.epsilon) s.detect.epsilon = *o.epsilon;
  if (o.min_pts) s.detect.min_pts = *o.min_pts;
  if (o.stride) s.detect.stride = *o.stride;
  if (o.roi) s.detect.roi = vdt::io::parse_roi(*o.roi);
  if (o.interval) s.sampling.interval = *o.interval;
  if (o.max_frames) {
    if (*o.max_frames < 1) throw std::runtime_error("--max-frames must be >= 1");
    s.sampling.max_frames = static_cast<std::size_t>(*o.max_frames);
  }
  if (o.fps) {
    if (*o.fps <= 0.0) throw std::runtime_error("--fps must be > 0");
    s.fps = *o.fps;
  }
  if (o.seed) s.seed = *o.seed;
  if (o.kmeans_frames) s.kmeans_frames = *o.kmeans_frames;
  if (o.emit_annotated) s.emit_annotated = true;
  if (o.emit_background) s.emit_background = true;
  return s;
}

void cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  const auto spec = vdt::io::read_scene_spec(spec_path);
  const auto scene = vdt::synth::generate(spec);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  for (std::size_t i = 0; i < scene.frames.size(); ++i) {
    vdt::io::write_ppm(dir / frame_name(i), scene.frames[i]);
  }
  std::string truth;
  for (std::size_t i = 0; i < scene.truth.per_frame.size(); ++i) {
    truth += vdt::io::truth_line(static_cast<std::int64_t>(i), scene.truth.per_frame[i]);
    truth += "\n";
  }
  vdt::io::write_file_atomic(dir / "truth.jsonl", truth);
  std::cout << "wrote " << scene.frames.size() << " frames and truth.jsonl to " << out_dir
            << "\n";
}

void cmd_background(const RunSettings& s, const std::string& out_path) {
  const FrameStack stack = load_input(s.input, s.fps);
  const auto sampled = sampled_frames(stack, s.sampling);
  double seconds = 0.0;
  const RgbImage bg = reconstruct_background(s, sampled, &seconds);
  vdt::io::write_ppm(out_path, bg);
  const std::size_t used = s.method == "kmeans"
                               ? std::min<std::size_t>(sampled.size(),
                                                       static_cast<std::size_t>(s.kmeans_frames))
                               : sampled.size();
  std::printf("[timing] phase=background_reconstruction method=%s frames=%zu wall_seconds=%.6f\n",
              s.method.c_str(), used, seconds);
  std::cout << "wrote " << out_path << "\n";
}

struct DetectOutputs {
  std::string records;
  std::vector<RgbImage> annotated;
  std::size_t frame_count = 0;
};

DetectOutputs detect_all(const RunSettings& s, const FrameStack& stack, const RgbImage& bg) {
  if (stack.frames.empty()) throw std::runtime_error("no frames found");
  // Fail on bad config/ROI before any frame is processed.
  vdt::validate(s.detect, stack.frames.front().width(), stack.frames.front().height());
  DetectOutputs out;
  out.frame_count = stack.frames.size();
  for (std::size_t i = 0; i < stack.frames.size(); ++i) {
    const auto result =
        vdt::detect_frame(stack.frames[i], bg, s.detect, static_cast<std::int64_t>(i));
    out.records += vdt::io::record_line(result);
    out.records += "\n";
    if (s.emit_annotated) {
      out.annotated.push_back(vdt::annotate(stack.frames[i], result, kCircleColor));
    }
  }
  return out;
}

void write_detect_outputs(const RunSettings& s, const DetectOutputs& out,
                          const fs::path& records_path) {
  vdt::io::write_file_atomic(records_path, out.records);
  if (s.emit_annotated) {
    const fs::path dir(s.output_dir);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < out.annotated.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "annotated_%06zu.ppm", i);
      vdt::io::write_ppm(dir / buf, out.annotated[i]);
    }
  }
  std::cout << "wrote " << records_path.string() << " (" << out.frame_count << " frames)\n";
}

void cmd_detect(const RunSettings& s, const std::string& records_out) {
  const FrameStack stack = load_input(s.input, s.fps);
  RgbImage bg;
  if (!s.background_path.empty()) {
    bg = vdt::io::read_ppm(s.background_path);
  } else {
    bg = reconstruct_background(s, sampled_frames(stack, s.sampling), nullptr);
  }
  const auto outputs = detect_all(s, stack, bg);
  fs::create_directories(s.output_dir);
  const fs::path records_path =
      records_out.empty() ? fs::path(s.output_dir) / "records.jsonl" : fs::path(records_out);
  write_detect_outputs(s, outputs, records_path);
}

void cmd_run(const RunSettings& s) {
  const FrameStack stack = load_input(s.input, s.fps);
  double bg_seconds = 0.0;
  const RgbImage bg = reconstruct_background(s, sampled_frames(stack, s.sampling), &bg_seconds);
  const auto outputs = detect_all(s, stack, bg);
  fs::create_directories(s.output_dir);
  if (s.emit_background) {
    vdt::io::write_ppm(fs::path(s.output_dir) / "background.ppm", bg);
  }
  write_detect_outputs(s, outputs, fs::path(s.output_dir) / "records.jsonl");
  std::printf("[timing] phase=background_reconstruction method=%s wall_seconds=%.6f\n",
              s.method.c_str(), bg_seconds);
}

void cmd_bench(const RunSettings& s, const std::string& out_path) {
  const FrameStack stack = load_input(s.input, s.fps);
  const auto sampled = sampled_frames(stack, s.sampling);
  if (sampled.size() < 2) throw std::runtime_error("bench needs at least 2 sampled frames");

  std::vector<vdt::io::BenchRow> rows;

  RgbImage mean_bg;
  const double mean_seconds = timed_seconds([&] {
    vdt::MeanBackgroundBuilder builder(sampled.front().width(), sampled.front().height());
    for (const auto& f : sampled) builder.add_frame(f);
    mean_bg = builder.finalize();
  });
  rows.push_back({"mean", "background_reconstruction", mean_seconds,
                  static_cast<std::int64_t>(sampled.size())});

  const std::size_t kn =
      std::min<std::size_t>(sampled.size(), static_cast<std::size_t>(s.kmeans_frames));
  const std::span<const RgbImage> subset(sampled.data(), kn);
  const double kmeans_seconds =
      timed_seconds([&] { (void)vdt::kmeans_background(subset, 2, s.seed); });
  rows.push_back({"kmeans", "background_reconstruction", kmeans_seconds,
                  static_cast<std::int64_t>(kn)});

  vdt::validate(s.detect, stack.frames.front().width(), stack.frames.front().height());
  const double detect_seconds = timed_seconds([&] {
    for (std::size_t i = 0; i < stack.frames.size(); ++i) {
      (void)vdt::detect_frame(stack.frames[i], mean_bg, s.detect,
                              static_cast<std::int64_t>(i));
    }
  });
  rows.push_back({"proposed", "detection", detect_seconds,
                  static_cast<std::int64_t>(stack.frames.size())});

  vdt::io::write_file_atomic(out_path, vdt::io::bench_csv(rows));
  std::cout << vdt::io::bench_table(rows);
  std::cout << "wrote " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vdt: motion-based vehicle detection from frame sequences"};
  app.require_subcommand(1);

  Overrides o;
  std::string synth_spec;
  std::string synth_out = "frames";
  std::string bg_out = "background.ppm";
  std::string records_out;
  std::string bench_out = "bench.csv";

  auto* synth = app.add_subcommand("synth", "generate a synthetic frame sequence");
  synth->add_option("spec", synth_spec, "scene spec file")->required();
  synth->add_option("--out", synth_out, "output directory");

  auto* background = app.add_subcommand("background", "reconstruct the static background");
  add_common_options(background, o);
  background->add_option("--out", bg_out, "output image path");

  auto* detect = app.add_subcommand("detect", "detect vehicles per frame");
  add_common_options(detect, o);
  detect->add_option("--background", o.background, "precomputed background image");
  detect->add_option("--out", records_out, "records output path");
  detect->add_option("--output-dir", o.output_dir, "directory for annotated frames");
  detect->add_flag("--emit-annotated", o.emit_annotated, "write annotated frames");

  auto* run = app.add_subcommand("run", "background reconstruction plus detection");
  add_common_options(run, o);
  run->add_option("--output-dir", o.output_dir, "output directory");
  run->add_flag("--emit-annotated", o.emit_annotated, "write annotated frames");
  run->add_flag("--emit-background", o.emit_background, "write the background image");

  auto* bench = app.add_subcommand("bench", "time background reconstruction and detection");
  add_common_options(bench, o);
  bench->add_option("--out", bench_out, "bench CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth->parsed()) {
      cmd_synth(synth_spec, synth_out);
    } else if (background->parsed()) {
      cmd_background(resolve_settings(o), bg_out);
    } else if (detect->parsed()) {
      cmd_detect(resolve_settings(o), records_out);
    } else if (run->parsed()) {
      cmd_run(resolve_settings(o));
    } else if (bench->parsed()) {
      cmd_bench(resolve_settings(o), bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "vdt: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
