#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vdt/detect.hpp"
#include "vdt/synth.hpp"

namespace vdt::io {

// Detection results are emitted as newline-delimited JSON records, one frame
// per line:
//   {"clusters":[{"bbox":[x0,y0,x1,y1],"centroid":[x,y],"pixel_count":n,
//    "radius":r}],"foreground_pixel_count":n,"frame_id":i,"vehicle_count":n}
// Keys are sorted, doubles use their shortest round-trip form, so
// parse -> emit is byte-stable.

std::string record_line(const DetectionResult& result);
DetectionResult parse_record_line(const std::string& line);

std::string truth_line(std::int64_t frame_id, const synth::FrameTruth& truth);

struct BenchRow {
  std::string method;  // mean | kmeans | proposed
  std::string phase;   // background_reconstruction | detection
  double wall_seconds = 0.0;
  std::int64_t frames = 0;
};

/// Machine-readable CSV: header plus one row per entry.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Human-readable aligned table; detection rows also show per-frame time.
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace vdt::io
