#include "fedq/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace fedq {

namespace {

std::string q_to_string(const mpq_class& q) { return q.get_str(); }

mpq_class q_from_string(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw IoError("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  return j.at(key);
}

void expect_schema(const Json& j, const char* schema) {
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != schema) {
    throw IoError(std::string("expected schema ") + schema);
  }
}

std::vector<int> bits_to_indices(std::uint8_t mask, int offset) {
  std::vector<int> r;
  for (int i = 0; i < kMaxDim; ++i) {
    if (mask & (1u << (offset + i))) r.push_back(i + 1);
  }
  return r;
}

Json fiber_to_json(const FiberIndex& f, int n) {
  Json a = Json::array();
  for (int i = 0; i < n; ++i) a.push_back(f[i]);
  return a;
}

FiberIndex fiber_from_json(const Json& j, int n) {
  FiberIndex f{};
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw IoError("fiber exponent has the wrong length");
  for (int i = 0; i < n; ++i) f[i] = j[i].get<std::uint8_t>();
  return f;
}

Json int_map_to_json(const std::map<int, Matrix>& m) {
  Json o = Json::object();
  for (const auto& [h, mat] : m) o[std::to_string(h)] = to_json(mat);
  return o;
}

Json int_map_to_json(const std::map<int, Vector>& m) {
  Json o = Json::object();
  for (const auto& [h, v] : m) o[std::to_string(h)] = to_json(v);
  return o;
}

}  // namespace

Json to_json(const Scalar& s) {
  if (s.is_real()) return q_to_string(s.re());
  return Json::array({q_to_string(s.re()), q_to_string(s.im())});
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar(q_from_string(j.get<std::string>()));
  if (j.is_array() && j.size() == 2) {
    return Scalar(q_from_string(j[0].get<std::string>()), q_from_string(j[1].get<std::string>()));
  }
  throw IoError("bad scalar " + j.dump());
}

Json to_json(const Poly& p) {
  Json a = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json e = Json::array();
    for (auto x : m) e.push_back(x);
    a.push_back({{"exp", e}, {"c", to_json(c)}});
  }
  return a;
}

Poly poly_from_json(const Json& j) {
  if (!j.is_array()) throw IoError("polynomial must be an array");
  Poly p;
  for (const auto& t : j) {
    const Json& e = field(t, "exp");
    if (!e.is_array() || e.size() != kVars) throw IoError("exponent vector has the wrong length");
    Mono m{};
    for (int v = 0; v < kVars; ++v) m[v] = e[v].get<std::uint8_t>();
    p.add_term(m, scalar_from_json(field(t, "c")));
  }
  return p;
}

Json to_json(const RationalFn& f) {
  Json den = Json::array();
  for (const auto& fac : f.den()) den.push_back({{"p", to_json(fac.p)}, {"e", fac.e}});
  return {{"num", to_json(f.num())}, {"den", den}};
}

RationalFn rational_from_json(const Json& j) {
  RationalFn r(poly_from_json(field(j, "num")));
  for (const auto& fac : field(j, "den")) {
    int e = field(fac, "e").get<int>();
    if (e < 1) throw IoError("denominator exponent must be positive");
    Poly p = poly_from_json(field(fac, "p"));
    if (p.is_zero()) throw IoError("zero denominator factor");
    r /= RationalFn(p).pow(e);
  }
  return r;
}

Json to_json(const HPoly& f) {
  Json o = Json::object();
  for (const auto& [h, c] : f.coeffs()) o[std::to_string(h)] = to_json(c);
  return o;
}

HPoly hpoly_from_json(const Json& j) {
  if (!j.is_object()) throw IoError("h-polynomial must be an object");
  HPoly r;
  for (const auto& [k, v] : j.items()) r.add(std::stoi(k), rational_from_json(v));
  return r;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (const auto& f : v) a.push_back(to_json(f));
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw IoError("vector must be an array");
  Vector v;
  for (const auto& f : j) v.push_back(rational_from_json(f));
  return v;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(to_json(row));
  return a;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw IoError("matrix must be an array");
  Matrix m;
  for (const auto& row : j) m.push_back(vector_from_json(row));
  return m;
}

Json to_json(const ChartGeometry& g) {
  Json curv = Json::array();
  for (const auto& a : g.curvature) {
    Json b = Json::array();
    for (const auto& m : a) b.push_back(to_json(m));
    curv.push_back(b);
  }
  Json chr = Json::array();
  for (const auto& m : g.christoffel) chr.push_back(to_json(m));
  return {{"schema", kGeometrySchema},
          {"name", g.name},
          {"n", g.n},
          {"omega", to_json(g.omega)},
          {"omega_inv", to_json(g.omega_inv)},
          {"d_rho", to_json(g.d_rho)},
          {"dbar_rho", to_json(g.dbar_rho)},
          {"christoffel", chr},
          {"curvature", curv},
          {"ricci", to_json(g.ricci)}};
}

GeometryPtr geometry_from_json(const Json& j) {
  expect_schema(j, kGeometrySchema);
  std::string name = field(j, "name").get<std::string>();
  CustomMetric m;
  m.name = name;
  m.omega = matrix_from_json(field(j, "omega"));
  m.d_rho = vector_from_json(field(j, "d_rho"));
  m.dbar_rho = vector_from_json(field(j, "dbar_rho"));
  GeometryPtr g;
  try {
    g = geometry_from_name(name);
  } catch (const std::invalid_argument&) {
    return custom_geometry(m);
  }
  if (!(g->omega == m.omega) || !(g->d_rho == m.d_rho) || !(g->dbar_rho == *m.dbar_rho)) {
    throw IoError("stored metric does not match preset " + name);
  }
  return g;
}

Json to_json(const AlphaForm& a) {
  return {{"kind", alpha_kind_name(a.kind)},
          {"name", a.name},
          {"coeff", int_map_to_json(a.coeff)},
          {"d_phi", int_map_to_json(a.d_phi)},
          {"dbar_phi", int_map_to_json(a.dbar_phi)}};
}

AlphaForm alpha_from_json(const ChartGeometry& g, const Json& j) {
  std::map<int, Matrix> coeff;
  std::map<int, Vector> d_phi, dbar_phi;
  for (const auto& [k, v] : field(j, "coeff").items()) coeff[std::stoi(k)] = matrix_from_json(v);
  for (const auto& [k, v] : field(j, "d_phi").items()) d_phi[std::stoi(k)] = vector_from_json(v);
  for (const auto& [k, v] : field(j, "dbar_phi").items()) dbar_phi[std::stoi(k)] = vector_from_json(v);
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "custom") return custom_alpha(g, coeff, d_phi, dbar_phi);
  AlphaForm a = alpha_from_name(g, kind);
  if (a.coeff != coeff || a.d_phi != d_phi || a.dbar_phi != dbar_phi) {
    throw IoError("stored alpha does not match preset " + kind);
  }
  return a;
}

Json to_json(const WeylSection& s) {
  Json terms = Json::array();
  for (const auto& [idx, c] : s.terms()) {
    terms.push_back({{"dzI", bits_to_indices(idx.form, 0)},
                     {"dzbarJ", bits_to_indices(idx.form, kMaxDim)},
                     {"yK", fiber_to_json(idx.y, s.n())},
                     {"ybarL", fiber_to_json(idx.yb, s.n())},
                     {"hpow", idx.h},
                     {"coeff", to_json(c)}});
  }
  Json j = {{"schema", kSectionSchema},
            {"n", s.n()},
            {"trunc", {{"maxY", s.trunc().maxY}, {"maxYbar", s.trunc().maxYbar}, {"maxH", s.trunc().maxH}}},
            {"exact", {{"y", s.exact().y}, {"ybar", s.exact().ybar}, {"h", s.exact().h}}},
            {"terms", terms}};
  if (s.level()) j["level"] = to_json(*s.level());
  return j;
}

WeylSection section_from_json(const Json& j) {
  expect_schema(j, kSectionSchema);
  int n = field(j, "n").get<int>();
  if (n < 1 || n > kMaxDim) throw IoError("section dimension out of range");
  const Json& t = field(j, "trunc");
  Trunc tr{field(t, "maxY").get<int>(), field(t, "maxYbar").get<int>(), field(t, "maxH").get<int>()};
  std::optional<Scalar> level;
  if (j.contains("level")) level = scalar_from_json(j.at("level"));
  WeylSection s(n, tr, level);
  for (const auto& term : field(j, "terms")) {
    TermIndex idx;
    std::vector<int> dz, dzb;
    for (int i : field(term, "dzI")) dz.push_back(i - 1);
    for (int i : field(term, "dzbarJ")) dzb.push_back(i - 1);
    for (int i : dz) {
      if (i < 0 || i >= n) throw IoError("form index out of range");
    }
    for (int i : dzb) {
      if (i < 0 || i >= n) throw IoError("form index out of range");
    }
    idx.form = form_mask(dz, dzb);
    idx.y = fiber_from_json(field(term, "yK"), n);
    idx.yb = fiber_from_json(field(term, "ybarL"), n);
    idx.h = field(term, "hpow").get<int>();
    s.add_term(idx, rational_from_json(field(term, "coeff")));
  }
  const Json& e = field(j, "exact");
  s.set_exact({field(e, "y").get<bool>(), field(e, "ybar").get<bool>(), field(e, "h").get<bool>()});
  return s;
}

Json to_json(const FedosovData& fd) {
  Json j = {{"schema", kFedosovSchema},
            {"geometry", to_json(fd.g())},
            {"alpha", to_json(fd.alpha)},
            {"maxY", fd.maxY},
            {"iterations", fd.iterations},
            {"gamma0", to_json(fd.gamma0)},
            {"I", to_json(fd.I)},
            {"J", to_json(fd.J)}};
  if (fd.level) j["level"] = to_json(*fd.level);
  return j;
}

FedosovData fedosov_from_json(const Json& j) {
  expect_schema(j, kFedosovSchema);
  FedosovData fd;
  try {
    fd.geometry = geometry_from_json(field(j, "geometry"));
    fd.alpha = alpha_from_json(fd.g(), field(j, "alpha"));
  } catch (const GeometryError& e) {
    throw IoError(std::string("stored geometry is invalid: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("stored data is invalid: ") + e.what());
  }
  fd.maxY = field(j, "maxY").get<int>();
  if (fd.maxY < 2) throw IoError("stored maxY must be at least 2");
  fd.iterations = field(j, "iterations").get<int>();
  fd.gamma0 = section_from_json(field(j, "gamma0"));
  fd.I = section_from_json(field(j, "I"));
  fd.J = section_from_json(field(j, "J"));
  if (j.contains("level")) fd.level = scalar_from_json(j.at("level"));
  if (!(fd.gamma0 == gamma0_section(fd.g(), fd.gamma0.trunc()))) throw IoError("stored gamma0 is not the standard one");
  WeylSection res = fedosov_residual(fd);
  if (!res.is_zero()) throw IoError("stored connection fails the Fedosov equation: " + res.to_string());
  auto fails = fedosov_invariant_failures(fd);
  if (!fails.empty()) throw IoError("stored connection fails an invariant: " + fails.front());
  return fd;
}

Json to_json(const CheckReport& r, bool timings) {
  Json items = Json::array();
  for (const auto& c : r) {
    Json item = {{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}};
    if (timings) item["seconds"] = c.seconds;
    items.push_back(item);
  }
  return {{"schema", kReportSchema}, {"pass", all_pass(r)}, {"checks", items}};
}

std::filesystem::path ConnectionCache::file_for(const ChartGeometry& g, const AlphaForm& a, int maxY) const {
  std::string key = to_json(g).dump() + to_json(a).dump() + std::to_string(maxY);
  std::ostringstream name;
  name << std::hex << std::hash<std::string>{}(key);
  return dir_ / ("fedosov-" + name.str() + ".json");
}

FedosovData ConnectionCache::load_or_solve(GeometryPtr g, const AlphaForm& a, int maxY, bool* hit) const {
  auto path = file_for(*g, a, maxY);
  if (hit) *hit = false;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw IoError("cache file " + path.string() + " is not valid JSON: " + e.what());
    }
    FedosovData fd = fedosov_from_json(j);
    if (!(fd.g().omega == g->omega) || fd.maxY != maxY || fd.alpha.coeff != a.coeff) {
      throw IoError("cache file " + path.string() + " does not match the requested connection");
    }
    if (hit) *hit = true;
    return fd;
  }
  FedosovData fd = solve_fedosov(g, a, maxY);
  std::filesystem::create_directories(dir_);
  std::ofstream out(path);
  out << to_json(fd).dump(1) << "\n";
  if (!out) throw IoError("cannot write cache file " + path.string());
  return fd;
}

}  // namespace fedq
