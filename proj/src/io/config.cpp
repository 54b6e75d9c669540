#include "io/config.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "io/ppm.hpp"

namespace vdt::io {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::runtime_error("config: invalid value for '" + key + "': '" + value + "'");
}

long long parse_ll(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad_value(key, value);
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const long long v = parse_ll(key, value);
  if (v < INT32_MIN || v > INT32_MAX) bad_value(key, value);
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad_value(key, value);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  bad_value(key, value);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

std::uint8_t parse_channel(const std::string& key, const std::string& value) {
  const int v = parse_int(key, value);
  if (v < 0 || v > 255) bad_value(key, value);
  return static_cast<std::uint8_t>(v);
}

Color parse_color(const std::string& key, const std::vector<std::string>& parts,
                  std::size_t offset) {
  if (offset + 3 > parts.size()) bad_value(key, "expected R,G,B");
  return {parse_channel(key, parts[offset]), parse_channel(key, parts[offset + 1]),
          parse_channel(key, parts[offset + 2])};
}

}  // namespace

KvFile parse_kv_text(const std::string& text, const std::string& origin) {
  KvFile kv;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(line) +
                               ": expected key=value, got '" + stripped + "'");
    }
    KvEntry entry;
    entry.key = trim(stripped.substr(0, eq));
    entry.value = trim(stripped.substr(eq + 1));
    entry.line = line;
    if (entry.key.empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(line) + ": empty key");
    }
    kv.push_back(std::move(entry));
  }
  return kv;
}

KvFile read_kv(const std::filesystem::path& path) {
  return parse_kv_text(read_file(path), path.string());
}

std::optional<std::string> last_value(const KvFile& kv, const std::string& key) {
  std::optional<std::string> out;
  for (const auto& entry : kv) {
    if (entry.key == key) out = entry.value;
  }
  return out;
}

PixelRect parse_roi(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw std::runtime_error("config: roi must be 'x,y,w,h', got '" + text + "'");
  }
  PixelRect r;
  r.x = parse_int("roi", parts[0]);
  r.y = parse_int("roi", parts[1]);
  r.width = parse_int("roi", parts[2]);
  r.height = parse_int("roi", parts[3]);
  return r;
}

void apply_kv(RunSettings& s, const KvFile& kv) {
  for (const auto& e : kv) {
    if (e.key == "input") {
      s.input = e.value;
    } else if (e.key == "output_dir") {
      s.output_dir = e.value;
    } else if (e.key == "background") {
      s.background_path = e.value;
    } else if (e.key == "method") {
      if (e.value != "mean" && e.value != "kmeans") bad_value(e.key, e.value);
      s.method = e.value;
    } else if (e.key == "threshold") {
      s.detect.threshold = parse_int(e.key, e.value);
    } else if (e.key == "se_size") {
      s.detect.se_size = parse_int(e.key, e.value);
    } else if (e.key == "epsilon") {
      s.detect.epsilon = parse_double(e.key, e.value);
    } else if (e.key == "min_pts") {
      s.detect.min_pts = parse_int(e.key, e.value);
    } else if (e.key == "stride") {
      s.detect.stride = parse_int(e.key, e.value);
    } else if (e.key == "roi") {
      s.detect.roi = parse_roi(e.value);
    } else if (e.key == "interval") {
      s.sampling.interval = parse_double(e.key, e.value);
    } else if (e.key == "max_frames") {
      const long long v = parse_ll(e.key, e.value);
      if (v < 1) bad_value(e.key, e.value);
      s.sampling.max_frames = static_cast<std::size_t>(v);
    } else if (e.key == "fps") {
      s.fps = parse_double(e.key, e.value);
      if (s.fps <= 0.0) bad_value(e.key, e.value);
    } else if (e.key == "seed") {
      s.seed = parse_u64(e.key, e.value);
    } else if (e.key == "kmeans_frames") {
      s.kmeans_frames = parse_int(e.key, e.value);
    } else if (e.key == "emit_annotated") {
      s.emit_annotated = parse_bool(e.key, e.value);
    } else if (e.key == "emit_background") {
      s.emit_background = parse_bool(e.key, e.value);
    } else {
      throw std::runtime_error("config: unknown key '" + e.key + "' at line " +
                               std::to_string(e.line));
    }
  }
}

synth::SceneSpec scene_from_kv(const KvFile& kv) {
  synth::SceneSpec spec;
  spec.movers.clear();
  for (const auto& e : kv) {
    if (e.key == "width") {
      spec.width = parse_int(e.key, e.value);
    } else if (e.key == "height") {
      spec.height = parse_int(e.key, e.value);
    } else if (e.key == "frames") {
      spec.frame_count = parse_int(e.key, e.value);
    } else if (e.key == "seed") {
      spec.seed = parse_u64(e.key, e.value);
    } else if (e.key == "noise_sigma") {
      spec.noise_sigma = parse_double(e.key, e.value);
    } else if (e.key == "backdrop") {
      // flat:R,G,B | gradient:R,G,B:R,G,B | checker:CELL:R,G,B:R,G,B
      const auto groups = split(e.value, ':');
      if (groups.empty()) bad_value(e.key, e.value);
      if (groups[0] == "flat" && groups.size() == 2) {
        spec.backdrop.kind = synth::BackdropSpec::Kind::kFlat;
        spec.backdrop.c0 = parse_color(e.key, split(groups[1], ','), 0);
        spec.backdrop.c1 = spec.backdrop.c0;
      } else if (groups[0] == "gradient" && groups.size() == 3) {
        spec.backdrop.kind = synth::BackdropSpec::Kind::kGradient;
        spec.backdrop.c0 = parse_color(e.key, split(groups[1], ','), 0);
        spec.backdrop.c1 = parse_color(e.key, split(groups[2], ','), 0);
      } else if (groups[0] == "checker" && groups.size() == 4) {
        spec.backdrop.kind = synth::BackdropSpec::Kind::kChecker;
        spec.backdrop.cell = parse_int(e.key, groups[1]);
        spec.backdrop.c0 = parse_color(e.key, split(groups[2], ','), 0);
        spec.backdrop.c1 = parse_color(e.key, split(groups[3], ','), 0);
      } else {
        bad_value(e.key, e.value);
      }
    } else if (e.key == "mover") {
      // w,h,x0,y0,vx,vy,R,G,B[,phase]
      const auto parts = split(e.value, ',');
      if (parts.size() != 9 && parts.size() != 10) bad_value(e.key, e.value);
      synth::MoverSpec m;
      m.width = parse_int(e.key, parts[0]);
      m.height = parse_int(e.key, parts[1]);
      m.x0 = parse_int(e.key, parts[2]);
      m.y0 = parse_int(e.key, parts[3]);
      m.vx = parse_int(e.key, parts[4]);
      m.vy = parse_int(e.key, parts[5]);
      m.color = parse_color(e.key, parts, 6);
      m.phase = parts.size() == 10 ? parse_int(e.key, parts[9]) : 0;
      spec.movers.push_back(m);
    } else if (e.key == "parked") {
      // x,y,w,h,R,G,B
      const auto parts = split(e.value, ',');
      if (parts.size() != 7) bad_value(e.key, e.value);
      synth::ParkedSpec p;
      p.x = parse_int(e.key, parts[0]);
      p.y = parse_int(e.key, parts[1]);
      p.width = parse_int(e.key, parts[2]);
      p.height = parse_int(e.key, parts[3]);
      p.color = parse_color(e.key, parts, 4);
      spec.parked = p;
    } else {
      throw std::runtime_error("scene spec: unknown key '" + e.key + "' at line " +
                               std::to_string(e.line));
    }
  }
  return spec;
}

synth::SceneSpec read_scene_spec(const std::filesystem::path& path) {
  return scene_from_kv(read_kv(path));
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string scene_to_kv_text(const synth::SceneSpec& spec) {
  std::ostringstream out;
  out << "width=" << spec.width << "\n";
  out << "height=" << spec.height << "\n";
  out << "frames=" << spec.frame_count << "\n";
  out << "seed=" << spec.seed << "\n";
  out << "noise_sigma=" << format_double(spec.noise_sigma) << "\n";
  const auto color = [](const Color& c) {
    return std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]);
  };
  switch (spec.backdrop.kind) {
    case synth::BackdropSpec::Kind::kFlat:
      out << "backdrop=flat:" << color(spec.backdrop.c0) << "\n";
      break;
    case synth::BackdropSpec::Kind::kGradient:
      out << "backdrop=gradient:" << color(spec.backdrop.c0) << ":" << color(spec.backdrop.c1)
          << "\n";
      break;
    case synth::BackdropSpec::Kind::kChecker:
      out << "backdrop=checker:" << spec.backdrop.cell << ":" << color(spec.backdrop.c0) << ":"
          << color(spec.backdrop.c1) << "\n";
      break;
  }
  for (const auto& m : spec.movers) {
    out << "mover=" << m.width << "," << m.height << "," << m.x0 << "," << m.y0 << "," << m.vx
        << "," << m.vy << "," << color(m.color) << "," << m.phase << "\n";
  }
  if (spec.parked) {
    const auto& p = *spec.parked;
    out << "parked=" << p.x << "," << p.y << "," << p.width << "," << p.height << ","
        << color(p.color) << "\n";
  }
  return out.str();
}

}  // namespace vdt::io
