#include "urigid/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace urigid {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(path + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const auto it = j.find(name);
  if (it == j.end()) schema_error(path, std::string("missing required field '") + name + "'");
  return *it;
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

long long as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long long>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected a boolean");
  return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

Edge edge_from_json(const Json& j, const std::string& path) {
  as_array(j, path);
  if (j.size() != 2) schema_error(path, "expected a pair [i, j]");
  const long long a = as_int(j[0], path + "[0]");
  const long long b = as_int(j[1], path + "[1]");
  return {static_cast<int>(a) - 1, static_cast<int>(b) - 1};
}

Json edge_to_json(const Edge& e) { return Json::array({e.first + 1, e.second + 1}); }

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  as_array(j, path);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = as_double(j[k], path + "[" + std::to_string(k) + "]");
  return v;
}

template <class T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  as_array(j, path);
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = as_array(j[0], path + "[0]").size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    as_array(j[i], rp);
    if (j[i].size() != cols) schema_error(rp, "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          as_double(j[i][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Framework framework_from_json(const Json& j) {
  const std::string root = "framework";
  const long long r = as_int(field(j, "dimension", root), root + ".dimension");
  if (r < 1) schema_error(root + ".dimension", "must be at least 1");
  const Json& pts = as_array(field(j, "points", root), root + ".points");
  if (pts.empty()) schema_error(root + ".points", "at least one point is required");
  Matrix p(r, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string pp = root + ".points[" + std::to_string(i) + "]";
    as_array(pts[i], pp);
    if (static_cast<long long>(pts[i].size()) != r)
      schema_error(pp, "expected " + std::to_string(r) + " coordinates, got " +
                           std::to_string(pts[i].size()));
    for (long long a = 0; a < r; ++a)
      p(a, static_cast<Eigen::Index>(i)) =
          as_double(pts[i][static_cast<std::size_t>(a)], pp + "[" + std::to_string(a) + "]");
  }
  const Json& ej = as_array(field(j, "edges", root), root + ".edges");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < ej.size(); ++k)
    edges.push_back(edge_from_json(ej[k], root + ".edges[" + std::to_string(k) + "]"));
  try {
    return Framework(Graph(static_cast<int>(pts.size()), std::move(edges)), Configuration(std::move(p)));
  } catch (const Error& e) {
    throw Error(root + ": " + e.what());
  }
}

Json framework_to_json(const Framework& fw) {
  Json edges = Json::array();
  for (const auto& e : fw.graph().edges()) edges.push_back(edge_to_json(e));
  return Json{{"dimension", fw.dimension()},
              {"points", matrix_to_json(fw.config().points().transpose())},
              {"edges", std::move(edges)}};
}

Framework parse_framework(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("framework: invalid JSON: ") + e.what());
  }
  return framework_from_json(j);
}

std::string serialize_framework(const Framework& fw) { return framework_to_json(fw).dump(2) + "\n"; }

EquilibriumStress stress_from_json(const Json& j, const Framework& fw) {
  const std::string root = "stress";
  const Json& arr = as_array(field(j, "omega", root), root + ".omega");
  const auto& g = fw.graph();
  Vector omega = Vector::Zero(g.num_edges());
  std::vector<char> seen(static_cast<std::size_t>(g.num_edges()), 0);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string ep = root + ".omega[" + std::to_string(k) + "]";
    const Edge e = edge_from_json(field(arr[k], "edge", ep), ep + ".edge");
    const int idx = g.edge_index(e.first, e.second);
    if (idx < 0)
      schema_error(ep + ".edge", "(" + std::to_string(e.first + 1) + "," + std::to_string(e.second + 1) +
                                     ") is not an edge of the graph");
    if (seen[static_cast<std::size_t>(idx)]) schema_error(ep + ".edge", "edge listed twice");
    seen[static_cast<std::size_t>(idx)] = 1;
    omega(idx) = as_double(field(arr[k], "value", ep), ep + ".value");
  }
  for (int k = 0; k < g.num_edges(); ++k)
    if (!seen[static_cast<std::size_t>(k)]) {
      const Edge& e = g.edges()[static_cast<std::size_t>(k)];
      schema_error(root + ".omega", "no value for edge (" + std::to_string(e.first + 1) + "," +
                                        std::to_string(e.second + 1) + ")");
    }
  return {omega};
}

Json stress_to_json(const Framework& fw, const EquilibriumStress& w) {
  Json arr = Json::array();
  const auto& edges = fw.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    arr.push_back({{"edge", edge_to_json(edges[k])}, {"value", w.omega(static_cast<Eigen::Index>(k))}});
  return Json{{"omega", std::move(arr)}};
}

Json flex_to_json(const FlexWitness& f) {
  return Json{{"phi", matrix_to_json(f.phi)},
              {"t", f.t},
              {"A", matrix_to_json(f.A)},
              {"flexed_points", matrix_to_json(f.flexed_points.transpose())}};
}

FlexWitness flex_from_json(const Json& j) {
  const std::string root = "flex";
  FlexWitness f;
  f.phi = matrix_from_json(field(j, "phi", root), root + ".phi");
  f.t = as_double(field(j, "t", root), root + ".t");
  f.A = matrix_from_json(field(j, "A", root), root + ".A");
  f.flexed_points = matrix_from_json(field(j, "flexed_points", root), root + ".flexed_points").transpose();
  return f;
}

Json certificate_to_json(const Certificate& c) {
  const auto& h = c.hypotheses;
  Json hyp{{"complete_graph", h.complete_graph},
           {"dimension_ok", h.dimension_ok},
           {"spanning", h.spanning},
           {"general_position", optional_to_json(h.general_position)},
           {"min_degree", h.min_degree},
           {"missing_edges", h.missing_edges},
           {"stress_space_dim", h.stress_space_dim},
           {"stress_found", h.stress_found},
           {"stress_user_supplied", h.stress_user_supplied},
           {"stress_rank", h.stress_rank},
           {"target_rank", h.target_rank},
           {"lambda_min", h.lambda_min},
           {"lambda_max", h.lambda_max},
           {"gale_lambda_min", h.gale_lambda_min},
           {"psd", h.psd},
           {"max_rank", h.max_rank},
           {"quadric_kernel_dim", optional_to_json(h.quadric_kernel_dim)},
           {"canonical_system_full_rank", optional_to_json(h.canonical_system_full_rank)}};
  Json omega = nullptr;
  if (c.omega) {
    omega = Json::array();
    for (std::size_t k = 0; k < c.omega_edges.size(); ++k)
      omega.push_back({{"edge", edge_to_json(c.omega_edges[k])},
                       {"value", (*c.omega)(static_cast<Eigen::Index>(k))}});
  }
  return Json{{"format", "urigid-certificate/1"},
              {"verdict", to_string(c.verdict)},
              {"route", to_string(c.route)},
              {"not_universally_rigid", c.not_universally_rigid},
              {"notes", c.notes},
              {"hypotheses", std::move(hyp)},
              {"omega", std::move(omega)},
              {"spectrum", vector_to_json(c.spectrum)},
              {"canonical_gale", c.canonical_gale ? matrix_to_json(*c.canonical_gale) : Json(nullptr)},
              {"flex", c.flex ? flex_to_json(*c.flex) : Json(nullptr)},
              {"counterexample",
               c.counterexample ? matrix_to_json(c.counterexample->transpose()) : Json(nullptr)},
              {"tolerances",
               {{"rank_rtol", c.tolerances.rank_rtol},
                {"psd_atol", c.tolerances.psd_atol},
                {"residual_atol", c.tolerances.residual_atol}}},
              {"framework_digest", c.framework_digest},
              {"seed", c.seed}};
}

Certificate certificate_from_json(const Json& j) {
  const std::string root = "certificate";
  Certificate c;
  try {
    c.verdict = verdict_from_string(field(j, "verdict", root).get<std::string>());
    c.route = route_from_string(field(j, "route", root).get<std::string>());
  } catch (const Json::type_error&) {
    schema_error(root, "verdict and route must be strings");
  } catch (const Error& e) {
    schema_error(root, e.what());
  }
  c.not_universally_rigid = as_bool(field(j, "not_universally_rigid", root), root + ".not_universally_rigid");
  for (const auto& note : as_array(field(j, "notes", root), root + ".notes"))
    if (note.is_string()) c.notes.push_back(note.get<std::string>());

  const std::string hp = root + ".hypotheses";
  const Json& hj = field(j, "hypotheses", root);
  auto& h = c.hypotheses;
  auto b = [&](const char* name) { return as_bool(field(hj, name, hp), hp + "." + name); };
  auto i = [&](const char* name) { return static_cast<int>(as_int(field(hj, name, hp), hp + "." + name)); };
  auto d = [&](const char* name) { return as_double(field(hj, name, hp), hp + "." + name); };
  h.complete_graph = b("complete_graph");
  h.dimension_ok = b("dimension_ok");
  h.spanning = b("spanning");
  if (!field(hj, "general_position", hp).is_null()) h.general_position = b("general_position");
  h.min_degree = b("min_degree");
  h.missing_edges = i("missing_edges");
  h.stress_space_dim = i("stress_space_dim");
  h.stress_found = b("stress_found");
  h.stress_user_supplied = b("stress_user_supplied");
  h.stress_rank = i("stress_rank");
  h.target_rank = i("target_rank");
  h.lambda_min = d("lambda_min");
  h.lambda_max = d("lambda_max");
  h.gale_lambda_min = d("gale_lambda_min");
  h.psd = b("psd");
  h.max_rank = b("max_rank");
  if (!field(hj, "quadric_kernel_dim", hp).is_null()) h.quadric_kernel_dim = i("quadric_kernel_dim");
  if (!field(hj, "canonical_system_full_rank", hp).is_null())
    h.canonical_system_full_rank = b("canonical_system_full_rank");

  const Json& oj = field(j, "omega", root);
  if (!oj.is_null()) {
    as_array(oj, root + ".omega");
    Vector omega(static_cast<Eigen::Index>(oj.size()));
    for (std::size_t k = 0; k < oj.size(); ++k) {
      const std::string ep = root + ".omega[" + std::to_string(k) + "]";
      c.omega_edges.push_back(edge_from_json(field(oj[k], "edge", ep), ep + ".edge"));
      omega(static_cast<Eigen::Index>(k)) = as_double(field(oj[k], "value", ep), ep + ".value");
    }
    c.omega = std::move(omega);
  }
  c.spectrum = vector_from_json(field(j, "spectrum", root), root + ".spectrum");
  if (const Json& g = field(j, "canonical_gale", root); !g.is_null())
    c.canonical_gale = matrix_from_json(g, root + ".canonical_gale");
  if (const Json& f = field(j, "flex", root); !f.is_null()) c.flex = flex_from_json(f);
  if (const Json& q = field(j, "counterexample", root); !q.is_null())
    c.counterexample = matrix_from_json(q, root + ".counterexample").transpose();

  const std::string tp = root + ".tolerances";
  const Json& tj = field(j, "tolerances", root);
  c.tolerances.rank_rtol = as_double(field(tj, "rank_rtol", tp), tp + ".rank_rtol");
  c.tolerances.psd_atol = as_double(field(tj, "psd_atol", tp), tp + ".psd_atol");
  c.tolerances.residual_atol = as_double(field(tj, "residual_atol", tp), tp + ".residual_atol");
  const Json& dj = field(j, "framework_digest", root);
  if (!dj.is_string()) schema_error(root + ".framework_digest", "expected a string");
  c.framework_digest = dj.get<std::string>();
  const Json& sj = field(j, "seed", root);
  if (!sj.is_number_unsigned()) schema_error(root + ".seed", "expected a non-negative integer");
  c.seed = sj.get<std::uint64_t>();
  return c;
}

std::string serialize_certificate(const Certificate& cert) { return certificate_to_json(cert).dump(2) + "\n"; }

Certificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("certificate: invalid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp + "' for writing");
    out << contents;
    if (!out.flush()) throw Error("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path + "'");
  }
}

}  // namespace urigid
