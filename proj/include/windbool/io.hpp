#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "windbool/mesh.hpp"

namespace windbool::io {

enum class MeshFormat { ObjAscii, StlBinary };

/// Malformed input. `offset` is a 1-based line number for text formats and a
/// byte offset for binary ones.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReadOptions {
  /// Merge bit-identical vertices after reading (STL has no shared vertices).
  bool weld = false;
};

/// Format from the file extension (.obj / .stl, case-insensitive).
MeshFormat format_for(const std::filesystem::path& path);

TriMesh parse_obj(std::string_view text);
TriMesh parse_stl_binary(std::span<const std::byte> bytes);

TriMesh read_mesh(const std::filesystem::path& path, const ReadOptions& options = {});

std::string format_obj(const TriMesh& mesh);
std::vector<std::byte> format_stl_binary(const TriMesh& mesh);

/// Throws IoError when `count` does not fit the 32-bit STL facet counter.
std::uint32_t stl_facet_count(std::size_t count);

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

std::string format_field(std::span<const Point3> points, std::span<const double> values);
void write_field(std::span<const Point3> points, std::span<const double> values, const std::filesystem::path& path);

/// Rows of "x,y,z"; an optional non-numeric header line is skipped. Extra
/// columns are ignored.
std::vector<Point3> parse_points_csv(std::string_view text);

struct FieldRow {
  Point3 point;
  double value = 0.0;
};
/// Reads the x,y,z,w format produced by format_field.
std::vector<FieldRow> parse_field(std::string_view text);

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so a failed write leaves
/// no partial file at `path`.
void write_bytes_atomic(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace windbool::io
