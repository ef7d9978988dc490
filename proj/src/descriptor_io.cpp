#include "soe/descriptor_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "soe/filterbank.hpp"

namespace soe {
namespace {

constexpr char kMagic[4] = {'S', 'O', 'E', 'D'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
  std::uint8_t buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, std::size_t& offset) {
  std::uint8_t buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) throw DescriptorFormatError("truncated descriptor file", offset);
  offset += sizeof(T);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string tag_to_line(const ChannelTag& t) {
  std::ostringstream os;
  os << t.scale_index << " "
     << (t.sign_path.empty() ? std::string("-") : t.sign_path) << " "
     << (t.parent_orientation ? std::to_string(*t.parent_orientation)
                              : std::string("-"))
     << " " << t.orientation_index << " ";
  if (t.orient_path.empty()) {
    os << "-";
  } else {
    for (std::size_t i = 0; i < t.orient_path.size(); ++i)
      os << (i ? "," : "") << t.orient_path[i];
  }
  return os.str();
}

ChannelTag tag_from_line(const std::string& line) {
  std::istringstream is(line);
  ChannelTag t;
  std::string sign, parent, path;
  if (!(is >> t.scale_index >> sign >> parent >> t.orientation_index >> path))
    throw std::runtime_error("bad tag line: " + line);
  if (sign != "-") t.sign_path = sign;
  if (parent != "-") t.parent_orientation = std::stoi(parent);
  if (path != "-") {
    std::istringstream ps(path);
    std::string item;
    while (std::getline(ps, item, ',')) t.orient_path.push_back(std::stoi(item));
  }
  return t;
}

}  // namespace

void write_descriptor(const std::filesystem::path& path, const Descriptor& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write descriptor: " + path.string());
  out.write(kMagic, 4);
  write_le<std::uint16_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.values.size()));
  write_le<std::uint16_t>(out, static_cast<std::uint16_t>(d.layers_per_scale.size()));
  for (int k : d.layers_per_scale)
    write_le<std::uint16_t>(out, static_cast<std::uint16_t>(k));
  for (double v : d.values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_le<std::uint64_t>(out, bits);
  }
  std::ofstream tags(path.string() + ".tags");
  if (!tags) throw std::runtime_error("cannot write tag table: " + path.string() + ".tags");
  tags << "# index scale sign_path parent orientation orient_path\n";
  for (std::size_t i = 0; i < d.tags.size(); ++i)
    tags << i << " " << tag_to_line(d.tags[i]) << "\n";
}

Descriptor read_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open descriptor: " + path.string());
  std::size_t offset = 0;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DescriptorFormatError("bad magic, expected \"SOED\"", 0);
  offset = 4;
  auto version = read_le<std::uint16_t>(in, offset);
  if (version != kVersion)
    throw DescriptorFormatError("unsupported version " + std::to_string(version), 4);
  auto dim = read_le<std::uint32_t>(in, offset);
  auto scales = read_le<std::uint16_t>(in, offset);
  Descriptor d;
  for (int s = 0; s < scales; ++s)
    d.layers_per_scale.push_back(read_le<std::uint16_t>(in, offset));
  d.values.resize(dim);
  for (auto& v : d.values) {
    auto bits = read_le<std::uint64_t>(in, offset);
    std::memcpy(&v, &bits, 8);
  }
  double norm = 0.0;
  for (double v : d.values) norm += v * v;
  d.degenerate = norm == 0.0;

  std::ifstream tags(path.string() + ".tags");
  if (tags) {
    std::string line;
    while (std::getline(tags, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream is(line);
      std::size_t idx;
      is >> idx;
      std::string rest;
      std::getline(is, rest);
      if (idx < d.values.size()) {
        if (d.tags.size() < d.values.size()) d.tags.resize(d.values.size());
        d.tags[idx] = tag_from_line(rest);
      }
    }
  }
  return d;
}

std::string describe_descriptor(const Descriptor& d) {
  std::ostringstream os;
  DirectionSet dirs = icosa_directions();
  os << "D=" << d.values.size() << " scales=" << d.layers_per_scale.size()
     << " K=[";
  for (std::size_t i = 0; i < d.layers_per_scale.size(); ++i)
    os << (i ? "," : "") << d.layers_per_scale[i];
  os << "]\n";
  os << "directions (x y t):\n";
  os.precision(6);
  os.setf(std::ios::fixed);
  for (int i = 0; i < 10; ++i)
    os << "  theta" << i << ": " << dirs.dirs[i][0] << " " << dirs.dirs[i][1]
       << " " << dirs.dirs[i][2] << "\n";
  os << "index scale sign_path parent orientation direction value\n";
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    os << i << " ";
    if (i < d.tags.size()) {
      const ChannelTag& t = d.tags[i];
      os << t.scale_index << " "
         << (t.sign_path.empty() ? "-" : t.sign_path) << " ";
      if (t.parent_orientation)
        os << *t.parent_orientation;
      else
        os << "-";
      os << " " << t.orientation_index << " ";
      if (t.orientation_index >= 0 && t.orientation_index < 10) {
        const auto& v = dirs.dirs[t.orientation_index];
        os << "(" << v[0] << "," << v[1] << "," << v[2] << ")";
      } else {
        os << "-";
      }
    } else {
      os << "? ? ? ? ?";
    }
    os << " " << d.values[i] << "\n";
  }
  return os.str();
}

}  // namespace soe
