#pragma once

#include <filesystem>
#include <string>

#include "vdt/image.hpp"

namespace vdt::io {

// Binary PPM (P6) / PGM (P5) with maxval 255. Writers are atomic: the file
// is staged next to the target and renamed into place, so a failed run never
// leaves a partial output behind.

RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const PlaneU8& plane);

/// Atomic byte-buffer write used by every file-producing command.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Reads a whole file; throws with the path on failure.
std::string read_file(const std::filesystem::path& path);

}  // namespace vdt::io
