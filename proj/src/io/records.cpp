#include "io/records.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "io/config.hpp"

namespace vdt::io {

using nlohmann::json;

std::string record_line(const DetectionResult& result) {
  json clusters = json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back({
        {"bbox", {c.min_x, c.min_y, c.max_x, c.max_y}},
        {"centroid", {c.centroid_x, c.centroid_y}},
        {"pixel_count", c.pixel_count},
        {"radius", c.radius},
    });
  }
  const json rec = {
      {"clusters", std::move(clusters)},
      {"foreground_pixel_count", result.foreground_pixel_count},
      {"frame_id", result.frame_id},
      {"vehicle_count", result.vehicle_count},
  };
  return rec.dump();
}

DetectionResult parse_record_line(const std::string& line) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("record: not valid JSON: ") + e.what());
  }
  try {
    DetectionResult result;
    result.frame_id = rec.at("frame_id").get<std::int64_t>();
    result.vehicle_count = rec.at("vehicle_count").get<std::int64_t>();
    result.foreground_pixel_count = rec.at("foreground_pixel_count").get<std::int64_t>();
    for (const auto& c : rec.at("clusters")) {
      VehicleCluster cluster;
      const auto& bbox = c.at("bbox");
      cluster.min_x = bbox.at(0).get<int>();
      cluster.min_y = bbox.at(1).get<int>();
      cluster.max_x = bbox.at(2).get<int>();
      cluster.max_y = bbox.at(3).get<int>();
      const auto& centroid = c.at("centroid");
      cluster.centroid_x = centroid.at(0).get<double>();
      cluster.centroid_y = centroid.at(1).get<double>();
      cluster.pixel_count = c.at("pixel_count").get<std::int64_t>();
      cluster.radius = c.at("radius").get<double>();
      result.clusters.push_back(cluster);
    }
    if (result.vehicle_count != static_cast<std::int64_t>(result.clusters.size())) {
      throw std::runtime_error("record: vehicle_count does not match clusters");
    }
    return result;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("record: schema violation: ") + e.what());
  }
}

std::string truth_line(std::int64_t frame_id, const synth::FrameTruth& truth) {
  json footprints = json::array();
  for (const auto& f : truth.footprints) {
    footprints.push_back({f.x, f.y, f.width, f.height});
  }
  const json rec = {
      {"active_mover_count", truth.active_mover_count},
      {"footprints", std::move(footprints)},
      {"frame_id", frame_id},
  };
  return rec.dump();
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "method,phase,wall_seconds,frames\n";
  for (const auto& r : rows) {
    out << r.method << "," << r.phase << "," << format_double(r.wall_seconds) << ","
        << r.frames << "\n";
  }
  return out.str();
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %-27s %12s %8s %14s\n", "method", "phase",
                "wall_secs", "frames", "secs_per_frame");
  out << buf;
  for (const auto& r : rows) {
    const double per_frame = r.frames > 0 ? r.wall_seconds / static_cast<double>(r.frames) : 0.0;
    std::snprintf(buf, sizeof(buf), "%-10s %-27s %12.4f %8lld %14.6f\n", r.method.c_str(),
                  r.phase.c_str(), r.wall_seconds, static_cast<long long>(r.frames), per_frame);
    out << buf;
  }
  return out.str();
}

}  // namespace vdt::io
