#include "fieldnav/simworld/world.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "fieldnav/core/config_file.hpp"

namespace fieldnav {
namespace {

std::optional<CellKind> glyph_kind(char c) {
  switch (c) {
    case '.':
      return CellKind::kFree;
    case '#':
      return CellKind::kObstacle;
    case 'B':
      return CellKind::kCropBrown;
    case 'Y':
      return CellKind::kCropYellow;
    case 'H':
      return CellKind::kCropHealthy;
    default:
      return std::nullopt;
  }
}

char kind_glyph(CellKind kind) {
  switch (kind) {
    case CellKind::kFree:
      return '.';
    case CellKind::kObstacle:
      return '#';
    case CellKind::kCropBrown:
      return 'B';
    case CellKind::kCropYellow:
      return 'Y';
    case CellKind::kCropHealthy:
      return 'H';
  }
  return '?';
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') {
    s.remove_suffix(1);
  }
  return s;
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t") == std::string_view::npos; }

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) {
      break;
    }
    const auto end = s.find_first_of(" \t", start);
    words.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    pos = end == std::string_view::npos ? s.size() : end;
  }
  return words;
}

double parse_real(std::string_view word, int line, int column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size() || !std::isfinite(value)) {
    throw WorldParseError(line, column, "invalid number '" + std::string{word} + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(CropClass c) {
  switch (c) {
    case CropClass::kBrown:
      return "brown";
    case CropClass::kYellow:
      return "yellow";
    case CropClass::kHealthy:
      return "healthy";
  }
  return "?";
}

std::optional<CropClass> crop_class(CellKind kind) {
  switch (kind) {
    case CellKind::kCropBrown:
      return CropClass::kBrown;
    case CellKind::kCropYellow:
      return CropClass::kYellow;
    case CellKind::kCropHealthy:
      return CropClass::kHealthy;
    default:
      return std::nullopt;
  }
}

WorldParseError::WorldParseError(int line, int column, const std::string& what)
    : std::runtime_error("world file line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         what),
      line_(line),
      column_(column) {}

World::World(GridGeometry geometry, std::vector<CellKind> cells)
    : geometry_(geometry), cells_(std::move(cells)) {
  validate(geometry_);
  if (cells_.size() != geometry_.size()) {
    throw std::invalid_argument("world cell count does not match width x height");
  }
}

World load_world(std::string_view text) {
  struct Row {
    std::string_view glyphs;
    int line;
  };

  std::optional<double> resolution;
  Point2 origin{};
  std::vector<Row> rows;

  int line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto newline = text.find('\n', pos);
    const auto line = strip_cr(text.substr(pos, newline == std::string_view::npos ? std::string_view::npos
                                                                                  : newline - pos));
    pos = newline == std::string_view::npos ? text.size() : newline + 1;
    ++line_number;

    if (is_blank(line) || line.front() == '%') {
      continue;
    }
    const auto words = split_words(line);
    if (!resolution) {
      if (words.size() != 2 || words[0] != "resolution") {
        throw WorldParseError(line_number, 1, "expected header 'resolution <meters>'");
      }
      const double r = parse_real(words[1], line_number, static_cast<int>(words[1].data() - line.data()) + 1);
      if (!(r > 0.0)) {
        throw WorldParseError(line_number, 1, "resolution must be positive");
      }
      resolution = r;
      continue;
    }
    if (rows.empty() && words.front() == "origin") {
      if (words.size() != 3) {
        throw WorldParseError(line_number, 1, "expected 'origin <x> <y>'");
      }
      origin.x = parse_real(words[1], line_number, static_cast<int>(words[1].data() - line.data()) + 1);
      origin.y = parse_real(words[2], line_number, static_cast<int>(words[2].data() - line.data()) + 1);
      continue;
    }
    rows.push_back({line, line_number});
  }

  if (!resolution) {
    throw WorldParseError(std::max(line_number, 1), 1, "missing 'resolution' header");
  }
  if (rows.empty()) {
    throw WorldParseError(std::max(line_number, 1), 1, "world has no grid rows");
  }

  const auto width = rows.front().glyphs.size();
  const auto height = rows.size();
  std::vector<CellKind> cells(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    const Row& row = rows[r];
    if (row.glyphs.size() != width) {
      throw WorldParseError(row.line, static_cast<int>(std::min(row.glyphs.size(), width)) + 1,
                            "grid row " + std::to_string(r + 1) + " has " + std::to_string(row.glyphs.size()) +
                                " cells, expected " + std::to_string(width));
    }
    const std::size_t y = height - 1 - r;
    for (std::size_t x = 0; x < width; ++x) {
      const auto kind = glyph_kind(row.glyphs[x]);
      if (!kind) {
        throw WorldParseError(row.line, static_cast<int>(x) + 1,
                              std::string{"unknown glyph '"} + row.glyphs[x] + "'");
      }
      cells[y * width + x] = *kind;
    }
  }

  GridGeometry geometry{static_cast<int>(width), static_cast<int>(height), *resolution, origin};
  return World(geometry, std::move(cells));
}

World load_world_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open world file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_world(buffer.str());
}

std::string serialize_world(const World& world) {
  const GridGeometry& g = world.geometry();
  std::string out = "resolution " + format_double(g.resolution) + "\n";
  out += "origin " + format_double(g.origin.x) + " " + format_double(g.origin.y) + "\n";
  for (int y = g.height - 1; y >= 0; --y) {
    for (int x = 0; x < g.width; ++x) {
      out += kind_glyph(world.kind({x, y}));
    }
    out += '\n';
  }
  return out;
}

}  // namespace fieldnav
