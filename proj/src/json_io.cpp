#include "hypervol/json_io.hpp"

#include <fstream>
#include <utility>
#include <vector>

namespace hypervol {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

Eigen::VectorXd parse_vector(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = number(j[static_cast<std::size_t>(i)], what);
  return v;
}

// Array of equally long rows.
Eigen::MatrixXd parse_rows(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  Eigen::VectorXd first = parse_vector(j[0], what);
  Eigen::MatrixXd m(rows, first.size());
  m.row(0) = first.transpose();
  for (int i = 1; i < rows; ++i) {
    Eigen::VectorXd r = parse_vector(j[static_cast<std::size_t>(i)], what);
    if (r.size() != first.size()) bad(std::string(what) + " rows differ in length");
    m.row(i) = r.transpose();
  }
  return m;
}

Json dump_vector(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json dump_rows(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(dump_vector(m.row(i).transpose()));
  return out;
}

std::pair<Ambient, int> parse_ambient(const Json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  int n = integer(field(j, "n"), "ambient n");
  if (kind == "quaternionic") return {Ambient::kQuaternionic, n};
  if (kind == "complex") return {Ambient::kComplex, n};
  if (kind == "real") return {Ambient::kReal, n};
  bad("unknown ambient kind '" + kind + "'");
}

Eigen::MatrixXd parse_vertex_columns(const Json& j) {
  // Vertices arrive as a list of points; columns internally.
  return parse_rows(j, "vertices").transpose();
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in " + path);
  return j;
}

Quaternion parse_quaternion(const Json& j) {
  if (j.is_number()) return Quaternion::real(j.get<double>());
  if (!j.is_array() || j.size() != 4) bad("quaternion must be a number or [t, x, y, z]");
  return {number(j[0], "quaternion"), number(j[1], "quaternion"),
          number(j[2], "quaternion"), number(j[3], "quaternion")};
}

Json dump_quaternion(const Quaternion& q) { return Json::array({q.t, q.x, q.y, q.z}); }

HyperHermitian parse_hyperhermitian(const Json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a nonempty array of rows");
  const int n = static_cast<int>(j.size());
  QMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) bad("matrix must be square");
    for (int c = 0; c < n; ++c) m.at(i, c) = parse_quaternion(row[static_cast<std::size_t>(c)]);
  }
  return HyperHermitian(std::move(m));
}

Json dump_hyperhermitian(const HyperHermitian& a) {
  Json out = Json::array();
  for (int i = 0; i < a.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.n(); ++j) row.push_back(dump_quaternion(a.at(i, j)));
    out.push_back(row);
  }
  return out;
}

FormClass parse_form(const Json& j) {
  int n = integer(field(j, "n"), "form n");
  int k = integer(field(j, "k"), "form k");
  std::vector<FormTerm> terms;
  for (const Json& t : field(j, "terms")) {
    FormTerm term;
    term.coef = number(field(t, "coef"), "term coef");
    for (const Json& f : field(t, "factors")) term.factors.push_back(parse_hyperhermitian(f));
    terms.push_back(std::move(term));
  }
  return FormClass(n, k, std::move(terms));
}

GridSpec parse_grid(const Json& j) {
  GridSpec g;
  g.box = parse_rows(field(j, "box"), "grid box");
  if (g.box.cols() != 2) bad("grid box rows must be [lo, hi]");
  g.spacing = number(field(j, "spacing"), "grid spacing");
  return g;
}

TestDensity parse_density(const Json& j, int n) {
  Eigen::VectorXd center = parse_vector(field(j, "center"), "density center");
  double radius = number(field(j, "radius"), "density radius");
  double height = j.contains("height") ? number(j.at("height"), "density height") : 1.0;
  bool indicator = j.contains("indicator") && j.at("indicator").get<bool>();
  TestDensity d = indicator ? ball_indicator(n, center, radius)
                            : scalar_bump(n, center, radius, height);
  if (j.contains("form")) {
    FormClass f = parse_form(j.at("form"));
    d = TestDensity{std::move(f), d.scalar, d.support_center, d.support_radius};
  }
  return d;
}

Polytope parse_polytope(const Json& j) {
  if (j.contains("generator")) {
    std::string gen = field(j, "generator").get<std::string>();
    if (gen == "product")
      return Polytope::product(parse_polytope(field(j, "factors")[0]),
                               parse_polytope(field(j, "factors")[1]));
    auto [amb, n] = parse_ambient(field(j, "ambient"));
    if (gen == "box")
      return Polytope::box(amb, n, parse_vector(field(j, "lo"), "box lo"),
                           parse_vector(field(j, "hi"), "box hi"));
    if (gen == "simplex") return Polytope::simplex(amb, n, parse_vertex_columns(field(j, "vertices")));
    if (gen == "zonotope")
      return Polytope::zonotope(amb, n, parse_rows(field(j, "generators"), "generators").transpose());
    bad("unknown generator '" + gen + "'");
  }
  auto [amb, n] = parse_ambient(field(j, "ambient"));
  return Polytope::from_vertices(amb, n, parse_vertex_columns(field(j, "vertices")));
}

std::shared_ptr<const PshModel> parse_model(const Json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "polynomial") {
    int n = integer(field(j, "n"), "model n");
    std::vector<Polynomial::Term> terms;
    for (const Json& t : field(j, "terms")) {
      Polynomial::Term term;
      term.coef = number(field(t, "coef"), "term coef");
      for (const Json& e : field(t, "exp")) term.exp.push_back(integer(e, "term exp"));
      terms.push_back(std::move(term));
    }
    return std::make_shared<const PolynomialModel>(n, Polynomial(4 * n, std::move(terms)));
  }
  if (kind == "max-affine" || kind == "mollified") {
    const Json& base = kind == "mollified" ? field(j, "base") : j;
    int n = integer(field(base, "n"), "model n");
    Eigen::MatrixXd rows = parse_rows(field(base, "rows"), "affine rows");
    Eigen::VectorXd offsets = parse_vector(field(base, "offsets"), "affine offsets");
    MaxAffineModel ma(n, rows, offsets);
    if (kind == "max-affine") return std::make_shared<const MaxAffineModel>(std::move(ma));
    return std::make_shared<const MollifiedModel>(ma, number(field(j, "eps"), "eps"));
  }
  if (kind == "smoothed-max" || kind == "smoothed-min") {
    auto u = parse_model(field(j, "u"));
    auto v = parse_model(field(j, "v"));
    double jj = number(field(j, "j"), "smoothing j");
    if (kind == "smoothed-max") return std::make_shared<const SmoothedMaxModel>(u, v, jj);
    return std::make_shared<const SmoothedMinModel>(u, v, jj);
  }
  if (kind == "support") {
    Polytope p = parse_polytope(field(j, "polytope"));
    if (p.ambient() != Ambient::kQuaternionic)
      bad("support model needs a quaternionic polytope");
    MaxAffineModel ma(p.qn(), p.vertices().transpose(),
                      Eigen::VectorXd::Zero(p.num_vertices()));
    if (!j.contains("eps")) return std::make_shared<const MaxAffineModel>(std::move(ma));
    return std::make_shared<const MollifiedModel>(ma, number(j.at("eps"), "eps"));
  }
  bad("unknown model kind '" + kind + "'");
}

Json dump_valuation_report(const ValuationReport& r) {
  Json out;
  out["polytope"] = r.polytope_id;
  out["value"] = r.value;
  out["stderr"] = r.se;
  out["seed"] = r.seed;
  out["samples"] = r.samples;
  Json faces = Json::array();
  for (const FaceContribution& f : r.faces) {
    Json jf;
    jf["verts"] = f.verts;
    jf["f"] = f.f;
    jf["volume"] = f.volume;
    jf["gamma"] = f.gamma;
    jf["stderr"] = f.se;
    jf["exact_angle"] = f.exact_angle;
    jf["value"] = f.value;
    faces.push_back(std::move(jf));
  }
  out["faces"] = std::move(faces);
  return out;
}

Json dump_cone_pieces(const ConePieces& m) {
  Json out;
  out["d"] = m.d;
  Json pieces = Json::array();
  for (const ConePiece& p : m.pieces) {
    Json jp;
    jp["k"] = p.cone.k;
    jp["m"] = p.cone.m;
    jp["span"] = dump_rows(p.cone.span);
    jp["rows"] = p.cone.rows.rows() == 0 ? Json::array() : dump_rows(p.cone.rows);
    jp["density"] = p.density;
    pieces.push_back(std::move(jp));
  }
  out["pieces"] = std::move(pieces);
  return out;
}

}  // namespace hypervol
