#pragma once

// File formats. Reading goes through nlohmann::json; writing uses a small
// serializer that prints every double with 17 significant digits so that
// round trips are bit-exact and reruns are byte-identical.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpmin/differentials.hpp"
#include "cpmin/medial.hpp"
#include "cpmin/packing.hpp"

namespace cpmin {

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Minimal JSON writer: objects keep insertion order, numbers are 17-digit.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  JsonWriter& begin_object() { return token("{"); }
  JsonWriter& end_object() {
    comma_ = true;
    out_ += "}";
    return *this;
  }
  JsonWriter& begin_array() { return token("["); }
  JsonWriter& end_array() {
    comma_ = true;
    out_ += "]";
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    quote(k);
    out_ += ":";
    comma_ = false;
    return *this;
  }
  JsonWriter& value(double x) { return raw(format_double(x)); }
  JsonWriter& value(int x) { return raw(std::to_string(x)); }
  JsonWriter& value(std::uint64_t x) { return raw(std::to_string(x)); }
  JsonWriter& value(bool b) { return raw(b ? "true" : "false"); }
  JsonWriter& value(const std::string& s) {
    sep();
    quote(s);
    comma_ = true;
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }

 private:
  JsonWriter& token(const char* t) {
    sep();
    out_ += t;
    comma_ = false;
    return *this;
  }
  JsonWriter& raw(const std::string& t) {
    sep();
    out_ += t;
    comma_ = true;
    return *this;
  }
  void sep() {
    if (comma_) out_ += ",";
  }
  void quote(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
    out_ += '"';
  }
  std::string out_;
  bool comma_ = false;
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::Io, "cannot open for writing: " + path);
  f << text;
  require(f.good(), ErrorCode::Io, "write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::Io, "cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// --------------------------------------------------------------------------
// mesh files: JSON {"faces": [[i,j,k],...]} or OFF (coordinates ignored)

inline std::string mesh_to_json(const TriangulatedDisk& G) {
  JsonWriter w;
  w.begin_object().key("faces").begin_array();
  for (const auto& f : G.faces) {
    w.begin_array().value(f[0]).value(f[1]).value(f[2]).end_array();
  }
  w.end_array().end_object();
  return w.str();
}

inline TriangulatedDisk mesh_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("bad mesh JSON: ") + e.what());
  }
  require(j.contains("faces") && j["faces"].is_array(), ErrorCode::Io, "mesh JSON needs faces");
  std::vector<std::array<int, 3>> faces;
  for (const auto& f : j["faces"]) {
    require(f.is_array() && f.size() == 3, ErrorCode::Io, "faces must be triples");
    faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  }
  return build_disk(faces);
}

inline TriangulatedDisk mesh_from_off_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  require(static_cast<bool>(in >> tok) && tok == "OFF", ErrorCode::Io, "not an OFF file");
  long nv = 0, nf = 0, ne = 0;
  require(static_cast<bool>(in >> nv >> nf >> ne), ErrorCode::Io, "bad OFF header");
  for (long i = 0; i < nv; ++i) {
    double x, y, z;
    require(static_cast<bool>(in >> x >> y >> z), ErrorCode::Io, "bad OFF vertex line");
  }
  std::vector<std::array<int, 3>> faces;
  for (long i = 0; i < nf; ++i) {
    int cnt;
    require(static_cast<bool>(in >> cnt), ErrorCode::Io, "bad OFF face line");
    require(cnt == 3, ErrorCode::Io, "only triangular OFF faces are supported");
    int a, b, c;
    require(static_cast<bool>(in >> a >> b >> c), ErrorCode::Io, "bad OFF face indices");
    faces.push_back({a, b, c});
  }
  return build_disk(faces);
}

inline TriangulatedDisk read_mesh_file(const std::string& path) {
  std::string text = read_text_file(path);
  size_t p = text.find_first_not_of(" \t\r\n");
  if (p != std::string::npos && text[p] == 'O') return mesh_from_off_text(text);
  return mesh_from_json_text(text);
}

// --------------------------------------------------------------------------
// packing files: {"centers": [[x,y],...], "radii": [...], "faces": [[i,j,k],...]}

struct PackingMeta {
  double angle_residual = 0;
  double tangency_residual = 0;
};

inline std::string packing_to_json(const CirclePacking& P, const PackingMeta* meta = nullptr) {
  JsonWriter w;
  w.begin_object();
  w.key("centers").begin_array();
  for (cplx c : P.center)
    w.begin_array().value(c.real()).value(c.imag()).end_array();
  w.end_array();
  w.key("radii").begin_array();
  for (double r : P.radius) w.value(r);
  w.end_array();
  w.key("faces").begin_array();
  for (const auto& f : P.mesh.faces)
    w.begin_array().value(f[0]).value(f[1]).value(f[2]).end_array();
  w.end_array();
  if (meta) {
    w.key("meta").begin_object();
    w.key("angle_residual").value(meta->angle_residual);
    w.key("tangency_residual").value(meta->tangency_residual);
    w.end_object();
  }
  w.end_object();
  return w.str();
}

inline CirclePacking packing_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("bad packing JSON: ") + e.what());
  }
  require(j.contains("centers") && j.contains("radii") && j.contains("faces"), ErrorCode::Io,
          "packing JSON needs centers, radii, faces");
  std::vector<std::array<int, 3>> faces;
  for (const auto& f : j["faces"]) faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  CirclePacking P;
  P.mesh = build_disk(faces);
  for (const auto& c : j["centers"]) P.center.push_back(cplx(c[0].get<double>(), c[1].get<double>()));
  for (const auto& r : j["radii"]) P.radius.push_back(r.get<double>());
  require(static_cast<int>(P.center.size()) == P.mesh.vertex_count &&
              P.center.size() == P.radius.size(),
          ErrorCode::Io, "packing arrays do not match the mesh");
  return P;
}

inline CirclePacking read_packing_file(const std::string& path) {
  return packing_from_json_text(read_text_file(path));
}

// --------------------------------------------------------------------------
// quadratic differential files

inline std::string koebe_qd_to_json(const KoebeQD& qd, const TriangulatedDisk& G) {
  JsonWriter w;
  w.begin_object().key("type").value("koebe").key("edges").begin_object();
  for (size_t p = 0; p < G.interior_edges.size(); ++p) {
    auto [u, v] = G.edges[G.interior_edges[p]];
    w.key(std::to_string(u) + "-" + std::to_string(v)).value(qd.lambda[p]);
  }
  w.end_object().end_object();
  return w.str();
}

// general-type edges are keyed by medial vertex ids (= edge ids of G)
inline std::string general_qd_to_json(const GeneralQD& qd, const MedialComplex& M) {
  JsonWriter w;
  w.begin_object().key("type").value("general");
  w.key("fingerprint").value(std::to_string(qd.fingerprint));
  w.key("edges").begin_object();
  for (size_t k = 0; k < M.q_edges.size(); ++k) {
    const auto& e = M.tmg_edges[M.q_edges[k]];
    w.key(std::to_string(e.a) + "-" + std::to_string(e.b)).value(qd.q[k]);
  }
  w.end_object().end_object();
  return w.str();
}

inline std::pair<int, int> parse_edge_key(const std::string& key) {
  auto dash = key.find('-');
  require(dash != std::string::npos, ErrorCode::Io, "edge key must be u-v");
  return {std::stoi(key.substr(0, dash)), std::stoi(key.substr(dash + 1))};
}

struct QDFile {
  bool is_koebe = true;
  std::map<std::pair<int, int>, double> edges;
  std::uint64_t fingerprint = 0;
};

inline QDFile qd_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("bad differential JSON: ") + e.what());
  }
  require(j.contains("type") && j.contains("edges"), ErrorCode::Io,
          "differential JSON needs type and edges");
  QDFile out;
  std::string type = j["type"].get<std::string>();
  require(type == "koebe" || type == "general", ErrorCode::Io, "unknown differential type");
  out.is_koebe = (type == "koebe");
  if (j.contains("fingerprint")) out.fingerprint = std::stoull(j["fingerprint"].get<std::string>());
  for (auto it = j["edges"].begin(); it != j["edges"].end(); ++it) {
    auto [u, v] = parse_edge_key(it.key());
    out.edges[{std::min(u, v), std::max(u, v)}] = it.value().get<double>();
  }
  return out;
}

inline KoebeQD koebe_qd_from_file(const QDFile& f, const TriangulatedDisk& G) {
  require(f.is_koebe, ErrorCode::Io, "expected a Koebe-type differential");
  KoebeQD qd;
  qd.lambda.assign(G.interior_edges.size(), 0.0);
  for (auto& [e, val] : f.edges) {
    int pos = G.interior_edge_position[G.edge_index(e.first, e.second)];
    require(pos >= 0, ErrorCode::Io, "lambda prescribed on a boundary edge");
    qd.lambda[pos] = val;
  }
  return qd;
}

inline GeneralQD general_qd_from_file(const QDFile& f, const MedialComplex& M) {
  require(!f.is_koebe, ErrorCode::Io, "expected a general-type differential");
  GeneralQD qd;
  qd.fingerprint = M.fingerprint();
  require(f.fingerprint == 0 || f.fingerprint == qd.fingerprint, ErrorCode::Io,
          "differential was computed for a different triangulation");
  qd.q.assign(M.q_edges.size(), 0.0);
  for (auto& [e, val] : f.edges) {
    int qp = M.tmg_edges[M.edge_position(e.first, e.second)].q_position;
    require(qp >= 0, ErrorCode::Io, "q prescribed on a non-interior medial edge");
    qd.q[qp] = val;
  }
  return qd;
}

// --------------------------------------------------------------------------
// OBJ export (one object per file, polygon faces allowed)

inline std::string obj_text(const std::string& name, const std::vector<Vec3>& pts,
                            const std::vector<std::vector<int>>& faces,
                            const std::vector<std::string>& header_comments = {}) {
  std::string out;
  for (const auto& c : header_comments) out += "# " + c + "\n";
  out += "o " + name + "\n";
  for (const auto& p : pts)
    out += "v " + format_double(p.x()) + " " + format_double(p.y()) + " " +
           format_double(p.z()) + "\n";
  for (const auto& f : faces) {
    out += "f";
    for (int i : f) out += " " + std::to_string(i + 1);
    out += "\n";
  }
  return out;
}

}  // namespace cpmin
