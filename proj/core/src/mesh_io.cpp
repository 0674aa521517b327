#include "vemeig/errors.hpp"
#include "vemeig/mesh.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace vemeig {

std::string mesh_to_json(const PolygonalMesh& mesh) {
  nlohmann::ordered_json doc;
  doc["format"] = "vemeig-mesh";
  doc["version"] = 1;
  auto& verts = doc["vertices"] = nlohmann::ordered_json::array();
  for (const Eigen::Vector2d& p : mesh.vertices())
    verts.push_back(nlohmann::ordered_json::array({p.x(), p.y()}));
  auto& cells = doc["cells"] = nlohmann::ordered_json::array();
  for (const std::vector<int>& cell : mesh.cells()) cells.push_back(cell);
  return doc.dump();
}

PolygonalMesh mesh_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw MeshError(std::string("mesh file: ") + err.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "vemeig-mesh")
    throw MeshError("mesh file: missing or wrong \"format\" field (expected vemeig-mesh)");
  if (doc.value("version", 0) != 1)
    throw MeshError("mesh file: unsupported version");
  if (!doc.contains("vertices") || !doc["vertices"].is_array())
    throw MeshError("mesh file: missing \"vertices\" array");
  if (!doc.contains("cells") || !doc["cells"].is_array())
    throw MeshError("mesh file: missing \"cells\" array");

  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(doc["vertices"].size());
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const auto& entry = doc["vertices"][i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
      throw MeshError("mesh file: vertex " + std::to_string(i) + " is not a [x, y] pair");
    vertices.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(doc["cells"].size());
  for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
    const auto& entry = doc["cells"][i];
    if (!entry.is_array() || entry.size() < 3)
      throw MeshError("mesh file: cell " + std::to_string(i) + " needs at least 3 vertex indices");
    std::vector<int> cell;
    cell.reserve(entry.size());
    for (const auto& v : entry) {
      if (!v.is_number_integer())
        throw MeshError("mesh file: cell " + std::to_string(i) + " has a non-integer index");
      cell.push_back(v.get<int>());
    }
    cells.push_back(std::move(cell));
  }
  return PolygonalMesh::from_raw(std::move(vertices), std::move(cells));
}

void write_mesh(const PolygonalMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open '" + path + "' for writing");
  out << mesh_to_json(mesh) << "\n";
}

PolygonalMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return mesh_from_json(buffer.str());
}

} // namespace vemeig
