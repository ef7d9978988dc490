#include "soe/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <png.h>

namespace soe {
namespace {

double rec601_luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

int pgm_read_token(std::istream& in) {
  // skips whitespace and '#' comment lines
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  in >> value;
  return value;
}

Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open frame: " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    throw IngestError("not a binary PGM (P5): " + path.string());
  int width = pgm_read_token(in);
  int height = pgm_read_token(in);
  int maxval = pgm_read_token(in);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw IngestError("bad PGM header: " + path.string());
  in.get();  // single whitespace after maxval
  Frame f;
  f.width = width;
  f.height = height;
  f.pixels.resize(static_cast<std::size_t>(width) * height);
  std::size_t n = f.pixels.size();
  if (maxval < 256) {
    std::vector<std::uint8_t> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (!in) throw IngestError("truncated PGM data: " + path.string());
    for (std::size_t i = 0; i < n; ++i) f.pixels[i] = raw[i] / static_cast<double>(maxval);
  } else {
    std::vector<std::uint8_t> raw(2 * n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(2 * n));
    if (!in) throw IngestError("truncated PGM data: " + path.string());
    for (std::size_t i = 0; i < n; ++i) {
      unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];  // 16-bit PGM is big-endian
      f.pixels[i] = v / static_cast<double>(maxval);
    }
  }
  return f;
}

Frame read_png(const std::filesystem::path& path) {
  std::FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) throw IngestError("cannot open frame: " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IngestError("png init failed: " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IngestError("undecodable PNG: " + path.string());
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  png_uint_32 width = png_get_image_width(png, info);
  png_uint_32 height = png_get_image_height(png, info);
  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  color = png_get_color_type(png, info);
  int channels = (color == PNG_COLOR_TYPE_RGB) ? 3 : 1;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * channels);
  Frame f;
  f.width = static_cast<int>(width);
  f.height = static_cast<int>(height);
  f.pixels.resize(static_cast<std::size_t>(width) * height);
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < width; ++x) {
      double v;
      if (channels == 3)
        v = rec601_luma(row[3 * x], row[3 * x + 1], row[3 * x + 2]) / 255.0;
      else
        v = row[x] / 255.0;
      f.pixels[static_cast<std::size_t>(y) * width + x] = v;
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return f;
}

constexpr char kRawMagic[4] = {'S', 'O', 'E', 'V'};

template <typename T>
void write_le(std::ostream& out, T value) {
  std::uint8_t buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  std::uint8_t buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

Frame read_frame(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  throw IngestError("unsupported frame format: " + path.string());
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write frame: " + path.string());
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  std::vector<std::uint8_t> raw(frame.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double v = std::clamp(frame.pixels[i], 0.0, 1.0);
    raw[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

FrameSource open_source(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  FrameSource src;
  if (fs::is_regular_file(path)) {
    std::string ext = path.extension().string();
    if (ext == ".soev") {
      src.kind = FrameSource::Kind::kRawVolumeFile;
      src.raw_path = path;
      return src;
    }
    throw IngestError("not a frame directory or .soev file: " + path.string());
  }
  if (!fs::is_directory(path))
    throw IngestError("input path does not exist: " + path.string());
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".pgm" || ext == ".png") src.frames.push_back(entry.path());
  }
  if (src.frames.empty())
    throw IngestError("no frames found in: " + path.string());
  std::sort(src.frames.begin(), src.frames.end());
  return src;
}

Volume load_volume(const FrameSource& source) {
  if (source.kind == FrameSource::Kind::kRawVolumeFile)
    return read_raw_volume(source.raw_path);
  if (source.frames.empty()) throw IngestError("frame source is empty");
  std::vector<Frame> frames;
  frames.reserve(source.frames.size());
  for (const auto& p : source.frames) frames.push_back(read_frame(p));
  for (std::size_t i = 1; i < frames.size(); ++i)
    if (frames[i].width != frames[0].width || frames[i].height != frames[0].height)
      throw IngestError("frame dimension mismatch: " + source.frames[i].string());
  Volume v(frames[0].width, frames[0].height, static_cast<int>(frames.size()));
  for (std::size_t t = 0; t < frames.size(); ++t)
    std::copy(frames[t].pixels.begin(), frames[t].pixels.end(),
              v.data.begin() + static_cast<std::ptrdiff_t>(t * frames[t].pixels.size()));
  return v;
}

Volume read_raw_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open volume: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kRawMagic, 4) != 0)
    throw IngestError("bad magic (expected SOEV): " + path.string());
  auto nx = read_le<std::uint32_t>(in);
  auto ny = read_le<std::uint32_t>(in);
  auto nt = read_le<std::uint32_t>(in);
  auto dtype = read_le<std::uint8_t>(in);
  if (!in || dtype != 0)
    throw IngestError("unsupported SOEV dtype: " + path.string());
  if (nx == 0 || ny == 0 || nt == 0)
    throw IngestError("bad SOEV dims: " + path.string());
  Volume v(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nt));
  for (double& x : v.data) {
    auto bits = read_le<std::uint64_t>(in);
    std::memcpy(&x, &bits, 8);
  }
  if (!in) throw IngestError("truncated SOEV data: " + path.string());
  return v;
}

void write_raw_volume(const std::filesystem::path& path, const Volume& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write volume: " + path.string());
  out.write(kRawMagic, 4);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.nx));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.ny));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.nt));
  write_le<std::uint8_t>(out, 0);
  for (double x : v.data) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    write_le<std::uint64_t>(out, bits);
  }
}

}  // namespace soe
