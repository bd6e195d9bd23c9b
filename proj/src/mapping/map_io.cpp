#include "fieldnav/mapping/map_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fieldnav/core/config_file.hpp"

namespace fieldnav {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Next whitespace-delimited header token of a PGM, skipping '#' comments.
std::string pgm_token(std::string_view data, std::size_t& pos) {
  while (pos < data.size()) {
    const char c = data[pos];
    if (c == '#') {
      while (pos < data.size() && data[pos] != '\n') {
        ++pos;
      }
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && data[pos] != ' ' && data[pos] != '\t' && data[pos] != '\n' && data[pos] != '\r') {
    ++pos;
  }
  return std::string{data.substr(start, pos - start)};
}

}  // namespace

std::string encode_pgm(const OccupancyGrid& grid, const OccupancyThresholds& thresholds) {
  const GridGeometry& g = grid.geometry();
  const auto classes = grid.classify(thresholds);
  std::string out = "P5\n" + std::to_string(g.width) + " " + std::to_string(g.height) + "\n255\n";
  out.reserve(out.size() + g.size());
  for (int y = g.height - 1; y >= 0; --y) {
    for (int x = 0; x < g.width; ++x) {
      switch (classes[g.index({x, y})]) {
        case CellClass::kFree:
          out += static_cast<char>(kPgmFree);
          break;
        case CellClass::kOccupied:
          out += static_cast<char>(kPgmOccupied);
          break;
        case CellClass::kUnknown:
          out += static_cast<char>(kPgmUnknown);
          break;
      }
    }
  }
  return out;
}

std::string encode_map_metadata(const OccupancyGrid& grid, const std::string& image_name,
                                const OccupancyThresholds& thresholds) {
  const GridGeometry& g = grid.geometry();
  std::string out;
  out += "image = " + image_name + "\n";
  out += "width = " + std::to_string(g.width) + "\n";
  out += "height = " + std::to_string(g.height) + "\n";
  out += "resolution = " + format_double(g.resolution) + "\n";
  out += "origin_x = " + format_double(g.origin.x) + "\n";
  out += "origin_y = " + format_double(g.origin.y) + "\n";
  out += "occupied_thresh = " + format_double(thresholds.occupied) + "\n";
  out += "free_thresh = " + format_double(thresholds.free) + "\n";
  return out;
}

OccupancyGrid decode_map(std::string_view pgm, std::string_view metadata, double l_clamp) {
  auto meta = KeyValueFile::parse(metadata);
  meta.get_string("image", "");
  GridGeometry g;
  g.resolution = meta.get_double("resolution", 0.0);
  g.origin = {meta.get_double("origin_x", 0.0), meta.get_double("origin_y", 0.0)};
  const auto meta_width = meta.get_int("width", -1);
  const auto meta_height = meta.get_int("height", -1);
  meta.get_double("occupied_thresh", 0.65);
  meta.get_double("free_thresh", 0.35);
  meta.reject_unconsumed();

  std::size_t pos = 0;
  if (pgm_token(pgm, pos) != "P5") {
    throw std::runtime_error("map image is not a binary PGM (P5)");
  }
  try {
    g.width = std::stoi(pgm_token(pgm, pos));
    g.height = std::stoi(pgm_token(pgm, pos));
    if (std::stoi(pgm_token(pgm, pos)) != 255) {
      throw std::runtime_error("map image must use maxval 255");
    }
  } catch (const std::logic_error&) {
    throw std::runtime_error("malformed PGM header");
  }
  ++pos;  // single whitespace byte before the raster
  if ((meta_width >= 0 && meta_width != g.width) || (meta_height >= 0 && meta_height != g.height)) {
    throw std::runtime_error("map metadata dimensions disagree with the image");
  }
  validate(g);
  if (pgm.size() < pos + g.size()) {
    throw std::runtime_error("PGM raster is truncated");
  }

  OccupancyGrid grid(g);
  for (int row = 0; row < g.height; ++row) {
    const int y = g.height - 1 - row;
    for (int x = 0; x < g.width; ++x) {
      const auto value = static_cast<unsigned char>(pgm[pos + static_cast<std::size_t>(row) * g.width + x]);
      if (value == kPgmFree) {
        grid.set_logodds({x, y}, -l_clamp);
      } else if (value == kPgmOccupied) {
        grid.set_logodds({x, y}, l_clamp);
      }
    }
  }
  return grid;
}

std::string metadata_path_for(const std::string& pgm_path) {
  const auto dot = pgm_path.rfind(".pgm");
  return (dot != std::string::npos && dot + 4 == pgm_path.size() ? pgm_path.substr(0, dot) : pgm_path) + ".meta";
}

OccupancyGrid load_map(const std::string& pgm_path, const std::string& metadata_path) {
  return decode_map(read_file(pgm_path), read_file(metadata_path.empty() ? metadata_path_for(pgm_path) : metadata_path));
}

}  // namespace fieldnav
