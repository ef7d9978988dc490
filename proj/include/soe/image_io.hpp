#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "soe/volume.hpp"

namespace soe {

/// Thrown when a frame or volume file cannot be ingested; the message names
/// the offending path.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One 2D frame, grayscale, values in [0, 1].
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // row-major, x fastest
};

struct FrameSource {
  enum class Kind { kFrameDirectory, kRawVolumeFile };
  Kind kind = Kind::kFrameDirectory;
  std::vector<std::filesystem::path> frames;  // lexicographically sorted
  std::filesystem::path raw_path;
};

/// Scans a path: a directory of .pgm/.png frames, or a single .soev raw
/// volume file.
FrameSource open_source(const std::filesystem::path& path);

/// Grayscale [0, 1] volume; RGB inputs are converted with Rec.601 luma
/// before scaling. Frame order is the lexicographic path order.
Volume load_volume(const FrameSource& source);

Frame read_frame(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const Frame& frame);

Volume read_raw_volume(const std::filesystem::path& path);
void write_raw_volume(const std::filesystem::path& path, const Volume& v);

}  // namespace soe
