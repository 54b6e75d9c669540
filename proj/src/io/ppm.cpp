#include "io/ppm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vdt::io {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error(path.string() + ": " + why);
}

// Header tokens are separated by whitespace; '#' starts a comment that runs
// to end of line.
long read_header_int(std::istream& in, const std::filesystem::path& path, const char* what) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) fail(path, std::string("truncated header, expected ") + what);
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else {
      break;
    }
  }
  long value = 0;
  if (!(in >> value)) fail(path, std::string("malformed header, expected ") + what);
  return value;
}

struct RawImage {
  long width = 0;
  long height = 0;
  std::string payload;
};

RawImage read_raw(const std::filesystem::path& path, const char* magic, long channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != magic[0] || m1 != magic[1]) {
    fail(path, std::string("not a ") + magic + " image");
  }
  RawImage raw;
  raw.width = read_header_int(in, path, "width");
  raw.height = read_header_int(in, path, "height");
  const long maxval = read_header_int(in, path, "maxval");
  if (raw.width < 1 || raw.height < 1 || raw.width > 65535 || raw.height > 65535) {
    fail(path, "unsupported dimensions");
  }
  if (maxval != 255) fail(path, "unsupported maxval (must be 255)");
  const int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) fail(path, "missing separator after maxval");
  const std::size_t bytes = static_cast<std::size_t>(raw.width) * raw.height * channels;
  raw.payload.resize(bytes);
  in.read(raw.payload.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) fail(path, "truncated pixel data");
  return raw;
}

std::string header(const char* magic, Eigen::Index width, Eigen::Index height) {
  std::ostringstream h;
  h << magic << "\n" << width << " " << height << "\n255\n";
  return h.str();
}

}  // namespace

RgbImage read_ppm(const std::filesystem::path& path) {
  const RawImage raw = read_raw(path, "P6", 3);
  RgbImage img(raw.width, raw.height);
  const auto* p = reinterpret_cast<const std::uint8_t*>(raw.payload.data());
  for (long y = 0; y < raw.height; ++y) {
    for (long x = 0; x < raw.width; ++x) {
      img.r(y, x) = *p++;
      img.g(y, x) = *p++;
      img.b(y, x) = *p++;
    }
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::string out = header("P6", img.width(), img.height());
  out.reserve(out.size() + static_cast<std::size_t>(img.width()) * img.height() * 3);
  for (Eigen::Index y = 0; y < img.height(); ++y) {
    for (Eigen::Index x = 0; x < img.width(); ++x) {
      out.push_back(static_cast<char>(img.r(y, x)));
      out.push_back(static_cast<char>(img.g(y, x)));
      out.push_back(static_cast<char>(img.b(y, x)));
    }
  }
  write_file_atomic(path, out);
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const RawImage raw = read_raw(path, "P5", 1);
  GrayImage img(raw.width, raw.height);
  const auto* p = reinterpret_cast<const std::uint8_t*>(raw.payload.data());
  for (long y = 0; y < raw.height; ++y) {
    for (long x = 0; x < raw.width; ++x) {
      img.v(y, x) = *p++;
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const PlaneU8& plane) {
  std::string out = header("P5", plane.cols(), plane.rows());
  out.reserve(out.size() + static_cast<std::size_t>(plane.size()));
  for (Eigen::Index y = 0; y < plane.rows(); ++y) {
    for (Eigen::Index x = 0; x < plane.cols(); ++x) {
      out.push_back(static_cast<char>(plane(y, x)));
    }
  }
  write_file_atomic(path, out);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(tmp, "cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail(tmp, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(path, "rename into place failed");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace vdt::io
