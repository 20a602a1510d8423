#include <cstring>
#include <fstream>
#include <sstream>

#include "suctiongrip/errors.hpp"
#include "suctiongrip/mesh.hpp"

namespace suctiongrip {

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open mesh file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

bool looks_binary_stl(const std::string& bytes) {
  if (bytes.size() < 84) return false;
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 80, 4);
  return bytes.size() == 84 + 50ull * count;
}

struct Soup {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

Soup parse_stl_binary(const std::string& bytes, const std::string& name) {
  if (!looks_binary_stl(bytes)) throw ParseError("'" + name + "' is not a binary STL file");
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 80, 4);
  Soup soup;
  soup.vertices.reserve(3ull * count);
  soup.triangles.reserve(count);
  const char* p = bytes.data() + 84;
  for (std::uint32_t i = 0; i < count; ++i, p += 50) {
    float f[12];
    std::memcpy(f, p, sizeof(f));
    const auto base = static_cast<std::uint32_t>(soup.vertices.size());
    for (int v = 0; v < 3; ++v) {
      soup.vertices.emplace_back(f[3 + 3 * v], f[4 + 3 * v], f[5 + 3 * v]);
    }
    soup.triangles.push_back({base, base + 1, base + 2});
  }
  return soup;
}

Soup parse_stl_ascii(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  if (word != "solid") throw ParseError("'" + name + "': ASCII STL must start with 'solid'");
  std::getline(in, word);

  Soup soup;
  std::vector<Vec3> loop;
  std::size_t line_no = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "vertex") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw ParseError("'" + name + "' line " + std::to_string(line_no) + ": bad vertex");
      }
      loop.emplace_back(x, y, z);
    } else if (kw == "endloop") {
      if (loop.size() != 3) {
        throw ParseError("'" + name + "' line " + std::to_string(line_no) +
                         ": facet loop must have 3 vertices");
      }
      const auto base = static_cast<std::uint32_t>(soup.vertices.size());
      soup.vertices.insert(soup.vertices.end(), loop.begin(), loop.end());
      soup.triangles.push_back({base, base + 1, base + 2});
      loop.clear();
    } else if (kw == "facet" || kw == "outer" || kw == "endfacet" || kw == "endsolid" ||
               kw == "solid") {
      continue;
    } else {
      throw ParseError("'" + name + "' line " + std::to_string(line_no) + ": unexpected '" + kw +
                       "'");
    }
  }
  if (!loop.empty()) throw ParseError("'" + name + "': unterminated facet");
  return soup;
}

Soup parse_obj(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  Soup soup;
  std::string line;
  std::size_t line_no = 0;
  // Face indices are validated against the final vertex count, so forward
  // references are legal as in most OBJ readers.
  std::vector<std::int64_t> raw;
  std::vector<std::size_t> raw_lines;
  std::vector<std::size_t> face_sizes;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (kw == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw ParseError("'" + name + "' line " + std::to_string(line_no) + ": bad vertex");
      }
      soup.vertices.emplace_back(x, y, z);
    } else if (kw == "f") {
      std::string tok;
      std::size_t n = 0;
      while (ls >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        std::int64_t idx = 0;
        try {
          std::size_t used = 0;
          idx = std::stoll(head, &used);
          if (used != head.size()) throw std::invalid_argument(head);
        } catch (const std::exception&) {
          throw ParseError("'" + name + "' line " + std::to_string(line_no) + ": bad face index '" +
                           tok + "'");
        }
        if (idx < 0) idx = static_cast<std::int64_t>(soup.vertices.size()) + idx + 1;
        raw.push_back(idx);
        raw_lines.push_back(line_no);
        ++n;
      }
      if (n < 3) {
        throw ParseError("'" + name + "' line " + std::to_string(line_no) +
                         ": face needs at least 3 vertices");
      }
      face_sizes.push_back(n);
    }
  }

  std::size_t cursor = 0;
  for (std::size_t n : face_sizes) {
    std::vector<std::uint32_t> face;
    for (std::size_t i = 0; i < n; ++i, ++cursor) {
      const std::int64_t idx = raw[cursor];
      if (idx < 1 || idx > static_cast<std::int64_t>(soup.vertices.size())) {
        throw ParseError("'" + name + "' line " + std::to_string(raw_lines[cursor]) +
                         ": face references vertex " + std::to_string(idx) + " of " +
                         std::to_string(soup.vertices.size()));
      }
      face.push_back(static_cast<std::uint32_t>(idx - 1));
    }
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      soup.triangles.push_back({face[0], face[i], face[i + 1]});
    }
  }
  return soup;
}

}  // namespace

MeshFormat detect_format(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".stl") {
    const std::string bytes = read_all(path);
    if (looks_binary_stl(bytes)) return MeshFormat::StlBinary;
    return MeshFormat::StlAscii;
  }
  throw ParseError("unrecognised mesh extension '" + ext + "' for " + path.string());
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format, double unit_scale) {
  const std::string bytes = read_all(path);
  const std::string name = path.stem().string();
  Soup soup;
  switch (format) {
    case MeshFormat::StlBinary:
      soup = parse_stl_binary(bytes, name);
      break;
    case MeshFormat::StlAscii:
      soup = parse_stl_ascii(bytes, name);
      break;
    case MeshFormat::Obj:
      soup = parse_obj(bytes, name);
      break;
  }
  if (unit_scale != 1.0) {
    for (auto& v : soup.vertices) v *= unit_scale;
  }
  return TriangleMesh::build(name, soup.vertices, soup.triangles);
}

TriangleMesh load_mesh(const std::filesystem::path& path, double unit_scale) {
  return load_mesh(path, detect_format(path), unit_scale);
}

void save_stl_binary(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  char header[80] = {};
  std::strncpy(header, mesh.name().c_str(), sizeof(header) - 1);
  out.write(header, sizeof(header));
  const auto count = static_cast<std::uint32_t>(mesh.triangle_count());
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (std::size_t f = 0; f < mesh.triangle_count(); ++f) {
    float rec[12];
    const Vec3& n = mesh.face_normals()[f];
    rec[0] = static_cast<float>(n.x());
    rec[1] = static_cast<float>(n.y());
    rec[2] = static_cast<float>(n.z());
    for (int v = 0; v < 3; ++v) {
      const Vec3 p = mesh.corner(f, v);
      rec[3 + 3 * v] = static_cast<float>(p.x());
      rec[4 + 3 * v] = static_cast<float>(p.y());
      rec[5 + 3 * v] = static_cast<float>(p.z());
    }
    out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles()) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

}  // namespace suctiongrip
