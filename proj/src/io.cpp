#include "windbool/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace windbool::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_long(std::string_view s, long long& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    ++line_no;
    f(line, line_no);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
}

template <typename T>
T read_le(std::span<const std::byte> bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
    std::reverse(raw.begin(), raw.end());
    value = std::bit_cast<T>(raw);
  }
  return value;
}

template <typename T>
void write_le(std::vector<std::byte>& out, T value) {
  auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.insert(out.end(), raw.begin(), raw.end());
}

}  // namespace

MeshFormat format_for(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".obj") return MeshFormat::ObjAscii;
  if (ext == ".stl") return MeshFormat::StlBinary;
  throw IoError("unrecognised mesh extension '" + ext + "' for " + path.string());
}

TriMesh parse_obj(std::string_view text) {
  std::vector<Point3> vertices;
  std::vector<Triangle> faces;
  // Positive indices may refer to vertices defined later; check them at the end.
  std::vector<std::array<long long, 3>> raw_faces;
  std::vector<std::size_t> face_lines;

  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) return;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw ParseError("vertex record needs three coordinates", line_no);
      Point3 p;
      if (!parse_double(tokens[1], p.x) || !parse_double(tokens[2], p.y) || !parse_double(tokens[3], p.z)) {
        throw ParseError("malformed vertex coordinate", line_no);
      }
      vertices.push_back(p);
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) throw ParseError("face record needs at least three vertices", line_no);
      std::vector<long long> idx;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        const std::string_view tok = tokens[k].substr(0, tokens[k].find('/'));
        long long i = 0;
        if (!parse_long(tok, i) || i == 0) throw ParseError("malformed face index", line_no);
        if (i < 0) {
          i += static_cast<long long>(vertices.size());
          if (i < 0) throw ParseError("relative face index before first vertex", line_no);
        } else {
          i -= 1;
        }
        idx.push_back(i);
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        raw_faces.push_back({idx[0], idx[k], idx[k + 1]});
        face_lines.push_back(line_no);
      }
    }
  });

  faces.reserve(raw_faces.size());
  const auto n = static_cast<long long>(vertices.size());
  for (std::size_t f = 0; f < raw_faces.size(); ++f) {
    const auto& r = raw_faces[f];
    for (long long i : r) {
      if (i >= n) throw ParseError("face index out of range", face_lines[f]);
    }
    if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) throw ParseError("face repeats a vertex", face_lines[f]);
    faces.push_back({static_cast<std::uint32_t>(r[0]), static_cast<std::uint32_t>(r[1]),
                     static_cast<std::uint32_t>(r[2])});
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

TriMesh parse_stl_binary(std::span<const std::byte> bytes) {
  constexpr std::size_t kHeader = 80;
  constexpr std::size_t kFacet = 50;
  if (bytes.size() < kHeader + 4) throw ParseError("binary STL shorter than its header", bytes.size());
  const auto count = read_le<std::uint32_t>(bytes, kHeader);
  const std::size_t needed = kHeader + 4 + static_cast<std::size_t>(count) * kFacet;
  if (bytes.size() < needed) throw ParseError("binary STL truncated for declared facet count", bytes.size());

  std::vector<Point3> vertices;
  std::vector<Triangle> faces;
  vertices.reserve(static_cast<std::size_t>(count) * 3);
  faces.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t base = kHeader + 4 + f * kFacet + 12;  // skip the stored normal
    for (int k = 0; k < 3; ++k) {
      const std::size_t at = base + static_cast<std::size_t>(k) * 12;
      const Point3 p{read_le<float>(bytes, at), read_le<float>(bytes, at + 4), read_le<float>(bytes, at + 8)};
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        throw ParseError("non-finite STL coordinate", at);
      }
      vertices.push_back(p);
    }
    const auto v0 = static_cast<std::uint32_t>(3 * f);
    faces.push_back({v0, v0 + 1, v0 + 2});
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

TriMesh read_mesh(const std::filesystem::path& path, const ReadOptions& options) {
  if (path.empty()) throw IoError("empty mesh path");
  const MeshFormat format = format_for(path);
  const std::string data = read_text(path);
  TriMesh mesh = format == MeshFormat::ObjAscii
                     ? parse_obj(data)
                     : parse_stl_binary(std::as_bytes(std::span<const char>(data.data(), data.size())));
  return options.weld ? weld_exact(mesh) : mesh;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::logic_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::string format_obj(const TriMesh& mesh) {
  std::string out;
  for (const Point3& p : mesh.vertices()) {
    out += "v ";
    out += format_double(p.x);
    out += ' ';
    out += format_double(p.y);
    out += ' ';
    out += format_double(p.z);
    out += '\n';
  }
  for (const Triangle& t : mesh.faces()) {
    out += "f " + std::to_string(t.v0 + 1) + ' ' + std::to_string(t.v1 + 1) + ' ' + std::to_string(t.v2 + 1) + '\n';
  }
  return out;
}

std::uint32_t stl_facet_count(std::size_t count) {
  if (count > std::numeric_limits<std::uint32_t>::max()) {
    throw IoError("binary STL holds at most 2^32 - 1 facets; mesh has " + std::to_string(count));
  }
  return static_cast<std::uint32_t>(count);
}

std::vector<std::byte> format_stl_binary(const TriMesh& mesh) {
  const std::uint32_t count = stl_facet_count(mesh.face_count());
  std::vector<std::byte> out;
  out.reserve(84 + 50 * static_cast<std::size_t>(count));
  std::string header = "wind-bool binary STL";
  header.resize(80, '\0');
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  write_le(out, count);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto [a, b, c] = mesh.corners(f);
    Point3 n = cross(b - a, c - a);
    const double len = norm(n);
    if (len > 0.0) n = n * (1.0 / len);
    for (const Point3& p : {n, a, b, c}) {
      write_le(out, static_cast<float>(p.x));
      write_le(out, static_cast<float>(p.y));
      write_le(out, static_cast<float>(p.z));
    }
    write_le(out, std::uint16_t{0});
  }
  return out;
}

void write_bytes_atomic(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  if (path.empty()) throw IoError("empty output path");
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) { write_mesh(mesh, path, format_for(path)); }

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  if (format == MeshFormat::ObjAscii) {
    const std::string text = format_obj(mesh);
    write_bytes_atomic(path, std::as_bytes(std::span<const char>(text.data(), text.size())));
  } else {
    const std::vector<std::byte> bytes = format_stl_binary(mesh);
    write_bytes_atomic(path, bytes);
  }
}

std::string format_field(std::span<const Point3> points, std::span<const double> values) {
  if (points.size() != values.size()) throw std::invalid_argument("format_field: points and values differ in length");
  std::string out = "x,y,z,w\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out += format_double(points[i].x) + ',' + format_double(points[i].y) + ',' + format_double(points[i].z) + ',' +
           format_double(values[i]) + '\n';
  }
  return out;
}

void write_field(std::span<const Point3> points, std::span<const double> values, const std::filesystem::path& path) {
  const std::string text = format_field(points, values);
  write_bytes_atomic(path, std::as_bytes(std::span<const char>(text.data(), text.size())));
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
    while (!field.empty() && is_space(field.front())) field.remove_prefix(1);
    while (!field.empty() && is_space(field.back())) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename Row>
std::vector<Row> parse_rows(std::string_view text, std::size_t columns) {
  std::vector<Row> rows;
  bool first = true;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') return;
    const auto fields = split_commas(line);
    std::array<double, 4> v{};
    bool ok = fields.size() >= columns;
    for (std::size_t k = 0; ok && k < columns; ++k) {
      // On-surface samples are written as nan in the value column.
      if (k == 3 && fields[k] == "nan") {
        v[k] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      ok = parse_double(fields[k], v[k]);
    }
    const bool header = first;
    first = false;
    if (!ok) {
      if (header) return;
      throw ParseError("expected " + std::to_string(columns) + " numeric columns", line_no);
    }
    if constexpr (std::is_same_v<Row, Point3>) {
      rows.push_back({v[0], v[1], v[2]});
    } else {
      rows.push_back({{v[0], v[1], v[2]}, v[3]});
    }
  });
  return rows;
}

}  // namespace

std::vector<Point3> parse_points_csv(std::string_view text) { return parse_rows<Point3>(text, 3); }

std::vector<FieldRow> parse_field(std::string_view text) { return parse_rows<FieldRow>(text, 4); }

}  // namespace windbool::io
