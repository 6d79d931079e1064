#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "plateau/mesh.hpp"

namespace plateau {

namespace {

constexpr int kGmshTetrahedron = 4;

// Line-oriented token reader that remembers where each token came from.
class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  // Next non-empty line, split into tokens. Throws at end of input.
  std::vector<std::string> next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(std::move(t));
      if (!tokens.empty()) return tokens;
    }
    throw MeshParseError(std::string("unexpected end of file while reading ") + expecting, line_no_);
  }

  std::size_t line() const { return line_no_; }

  template <class T>
  T as(const std::string& token) const {
    std::istringstream ss(token);
    T value{};
    if (!(ss >> value) || !ss.eof()) {
      throw MeshParseError("malformed number '" + token + "'", line_no_);
    }
    return value;
  }

  void expect(const std::vector<std::string>& tokens, std::size_t count, const char* what) const {
    if (tokens.size() < count) {
      throw MeshParseError(std::string("too few fields in ") + what, line_no_);
    }
  }

  // Skips lines until the given end marker.
  void skip_section(const std::string& end) {
    for (;;) {
      auto t = next(end.c_str());
      if (t[0] == end) return;
    }
  }

 private:
  std::istringstream in_;
  std::size_t line_no_ = 0;
};

struct RawMesh {
  std::vector<Vec3> nodes;
  std::unordered_map<long, int> node_index;  // file tag -> position
  std::vector<std::array<long, 4>> tets;     // file node tags
  std::vector<std::size_t> tet_lines;
  std::vector<int> tags;
};

void read_nodes_v2(LineReader& r, RawMesh& m) {
  auto header = r.next("$Nodes count");
  long count = r.as<long>(header[0]);
  for (long i = 0; i < count; ++i) {
    auto t = r.next("$Nodes entry");
    r.expect(t, 4, "node record");
    long id = r.as<long>(t[0]);
    m.node_index[id] = static_cast<int>(m.nodes.size());
    m.nodes.emplace_back(r.as<double>(t[1]), r.as<double>(t[2]), r.as<double>(t[3]));
  }
  auto end = r.next("$EndNodes");
  if (end[0] != "$EndNodes") throw MeshParseError("expected $EndNodes", r.line());
}

void read_elements_v2(LineReader& r, RawMesh& m) {
  auto header = r.next("$Elements count");
  long count = r.as<long>(header[0]);
  for (long i = 0; i < count; ++i) {
    auto t = r.next("$Elements entry");
    r.expect(t, 3, "element record");
    int type = r.as<int>(t[1]);
    int ntags = r.as<int>(t[2]);
    if (type != kGmshTetrahedron) continue;
    r.expect(t, static_cast<std::size_t>(3 + ntags + 4), "tetrahedron record");
    int physical = ntags > 0 ? r.as<int>(t[3]) : 0;
    std::array<long, 4> tet{};
    for (int k = 0; k < 4; ++k) tet[k] = r.as<long>(t[3 + ntags + k]);
    m.tets.push_back(tet);
    m.tet_lines.push_back(r.line());
    m.tags.push_back(physical);
  }
  auto end = r.next("$EndElements");
  if (end[0] != "$EndElements") throw MeshParseError("expected $EndElements", r.line());
}

// Returns the physical tag of each volume entity.
std::map<int, int> read_entities_v4(LineReader& r) {
  auto header = r.next("$Entities counts");
  r.expect(header, 4, "$Entities header");
  std::array<long, 4> counts{};
  for (int d = 0; d < 4; ++d) counts[d] = r.as<long>(header[d]);
  std::map<int, int> volume_physical;
  for (int d = 0; d < 4; ++d) {
    for (long i = 0; i < counts[d]; ++i) {
      auto t = r.next("$Entities record");
      if (d < 3) continue;
      // tag minX minY minZ maxX maxY maxZ numPhysicalTags physicalTag ...
      r.expect(t, 8, "volume entity");
      int tag = r.as<int>(t[0]);
      int nphys = r.as<int>(t[7]);
      volume_physical[tag] = nphys > 0 ? r.as<int>(t.at(8)) : 0;
    }
  }
  auto end = r.next("$EndEntities");
  if (end[0] != "$EndEntities") throw MeshParseError("expected $EndEntities", r.line());
  return volume_physical;
}

void read_nodes_v4(LineReader& r, RawMesh& m) {
  auto header = r.next("$Nodes header");
  r.expect(header, 4, "$Nodes header");
  long blocks = r.as<long>(header[0]);
  for (long b = 0; b < blocks; ++b) {
    auto bh = r.next("$Nodes block header");
    r.expect(bh, 4, "node block header");
    int parametric = r.as<int>(bh[2]);
    if (parametric != 0) throw MeshParseError("parametric nodes are not supported", r.line());
    long n = r.as<long>(bh[3]);
    std::vector<long> ids(n);
    for (long i = 0; i < n; ++i) ids[i] = r.as<long>(r.next("node tag")[0]);
    for (long i = 0; i < n; ++i) {
      auto t = r.next("node coordinates");
      r.expect(t, 3, "node coordinates");
      m.node_index[ids[i]] = static_cast<int>(m.nodes.size());
      m.nodes.emplace_back(r.as<double>(t[0]), r.as<double>(t[1]), r.as<double>(t[2]));
    }
  }
  auto end = r.next("$EndNodes");
  if (end[0] != "$EndNodes") throw MeshParseError("expected $EndNodes", r.line());
}

void read_elements_v4(LineReader& r, RawMesh& m, const std::map<int, int>& volume_physical) {
  auto header = r.next("$Elements header");
  r.expect(header, 4, "$Elements header");
  long blocks = r.as<long>(header[0]);
  for (long b = 0; b < blocks; ++b) {
    auto bh = r.next("$Elements block header");
    r.expect(bh, 4, "element block header");
    int dim = r.as<int>(bh[0]);
    int entity = r.as<int>(bh[1]);
    int type = r.as<int>(bh[2]);
    long n = r.as<long>(bh[3]);
    int physical = 0;
    if (dim == 3) {
      auto it = volume_physical.find(entity);
      if (it != volume_physical.end()) physical = it->second;
    }
    for (long i = 0; i < n; ++i) {
      auto t = r.next("element record");
      if (type != kGmshTetrahedron) continue;
      r.expect(t, 5, "tetrahedron record");
      std::array<long, 4> tet{};
      for (int k = 0; k < 4; ++k) tet[k] = r.as<long>(t[1 + k]);
      m.tets.push_back(tet);
      m.tet_lines.push_back(r.line());
      m.tags.push_back(physical);
    }
  }
  auto end = r.next("$EndElements");
  if (end[0] != "$EndElements") throw MeshParseError("expected $EndElements", r.line());
}

}  // namespace

TetMesh parse_msh(const std::string& text) {
  LineReader r(text);
  auto first = r.next("$MeshFormat");
  if (first[0] != "$MeshFormat") throw MeshParseError("expected $MeshFormat", r.line());
  auto fmt = r.next("format line");
  r.expect(fmt, 3, "format line");
  const std::string& version = fmt[0];
  int major = 0;
  if (version == "2.2" || version == "2.1" || version == "2") {
    major = 2;
  } else if (version == "4.1") {
    major = 4;
  } else {
    throw MeshParseError("unsupported MSH version " + version, r.line());
  }
  if (r.as<int>(fmt[1]) != 0) throw MeshParseError("binary MSH files are not supported", r.line());
  r.skip_section("$EndMeshFormat");

  RawMesh m;
  std::map<int, int> volume_physical;
  bool saw_nodes = false, saw_elements = false;
  while (!(saw_nodes && saw_elements)) {
    auto t = r.next("section header");
    const std::string& section = t[0];
    if (section == "$Nodes") {
      major == 2 ? read_nodes_v2(r, m) : read_nodes_v4(r, m);
      saw_nodes = true;
    } else if (section == "$Elements") {
      if (!saw_nodes) throw MeshParseError("$Elements before $Nodes", r.line());
      major == 2 ? read_elements_v2(r, m) : read_elements_v4(r, m, volume_physical);
      saw_elements = true;
    } else if (section == "$Entities" && major == 4) {
      volume_physical = read_entities_v4(r);
    } else if (!section.empty() && section[0] == '$') {
      r.skip_section("$End" + section.substr(1));
    } else {
      throw MeshParseError("unexpected content '" + section + "'", r.line());
    }
  }
  if (m.tets.empty()) throw MeshParseError("file contains no tetrahedra", r.line());

  // Keep only nodes referenced by tetrahedra, in file order.
  std::vector<int> used(m.nodes.size(), -1);
  std::vector<std::array<int, 4>> cells(m.tets.size());
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    for (int k = 0; k < 4; ++k) {
      auto it = m.node_index.find(m.tets[e][k]);
      if (it == m.node_index.end()) {
        throw MeshParseError("element references unknown node " + std::to_string(m.tets[e][k]),
                             m.tet_lines[e]);
      }
      cells[e][k] = it->second;
      used[it->second] = 0;
    }
  }
  std::vector<Vec3> nodes;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (used[i] == 0) {
      used[i] = static_cast<int>(nodes.size());
      nodes.push_back(m.nodes[i]);
    }
  }
  for (auto& c : cells) {
    for (int& v : c) v = used[v];
  }
  try {
    return TetMesh::from_cells(std::move(nodes), std::move(cells), std::move(m.tags));
  } catch (const std::invalid_argument& e) {
    throw MeshParseError(e.what(), r.line());
  }
}

TetMesh read_msh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_msh(ss.str());
}

}  // namespace plateau
