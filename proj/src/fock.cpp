#include "fedq/fock.hpp"

#include <algorithm>
#include <sstream>

namespace fedq {

namespace {

constexpr Trunc kWide{64, 64, 64};

bool is_positive_integer(const Scalar& k) {
  return k.is_real() && k.re().get_den() == 1 && sgn(k.re()) > 0;
}

int degree(const FiberIndex& b) {
  int d = 0;
  for (auto v : b) d += v;
  return d;
}

// Multi-indices of total degree <= d in n variables, ordered by degree.
std::vector<FiberIndex> multi_indices(int n, int d) {
  std::vector<FiberIndex> out{FiberIndex{}};
  for (int deg = 1; deg <= d; ++deg) {
    std::vector<FiberIndex> next;
    for (const auto& b : out) {
      if (degree(b) != deg - 1) continue;
      for (int i = 0; i < n; ++i) {
        FiberIndex c = b;
        ++c[i];
        if (std::find(next.begin(), next.end(), c) == next.end()) next.push_back(c);
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
  }
  return out;
}

bool dominated(const FiberIndex& b, const FiberIndex& m) {
  for (int i = 0; i < kMaxDim; ++i) {
    if (b[i] > m[i]) return false;
  }
  return true;
}

RationalFn z_power(const FiberIndex& m) {
  Poly p(1);
  for (int i = 0; i < kMaxDim; ++i) {
    if (m[i] > 0) p = p * Poly::var(z_var(i), m[i]);
  }
  return RationalFn(p);
}

RationalFn derive(const RationalFn& f, const FiberIndex& b) {
  RationalFn r = f;
  for (int i = 0; i < kMaxDim; ++i) {
    for (int t = 0; t < b[i]; ++t) r = r.derivative(z_var(i));
  }
  return r;
}

Scalar falling(const FiberIndex& m, const FiberIndex& b) {
  Scalar r(1);
  for (int i = 0; i < kMaxDim; ++i) r = r * factorial(m[i]) / factorial(m[i] - b[i]);
  return r;
}

Scalar binomial(const FiberIndex& a, const FiberIndex& c) {
  Scalar r(1);
  for (int i = 0; i < kMaxDim; ++i) r = r * factorial(a[i]) / (factorial(c[i]) * factorial(a[i] - c[i]));
  return r;
}

void require_integral(const FedosovData& fd) {
  const auto& g = fd.g();
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (!(fd.alpha.component(i, j) == HPoly(g.ricci[i][j], 1))) {
        throw FockError("alpha must be h times the Ricci form for the line bundle L^k (got " +
                        fd.alpha.name + ")");
      }
    }
  }
}

}  // namespace

FockSection FockSection::make(WeylSection poly, const Scalar& k) {
  if (!is_positive_integer(k)) throw std::invalid_argument("Fock level must be a positive integer");
  if (poly.max_ybar_degree() > 0) throw FockError("Fock sections are yb-free");
  if (poly.level()) {
    if (!(*poly.level() == k)) throw FockError("section evaluated at another level");
  } else {
    poly = evaluate_hbar(poly, k);
  }
  return FockSection{std::move(poly), k};
}

FockSection bf_act(const WeylSection& a, const FockSection& s, const ChartGeometry& g) {
  if (a.n() != s.n()) throw std::invalid_argument("dimension mismatch");
  WeylSection ak = evaluate_hbar(a, s.level);
  const Scalar minus_inv = -s.level.inverse();
  WeylSection wide = s.poly;
  Trunc t = wide.trunc();
  wide.set_trunc(kWide);
  WeylSection out(s.n(), kWide, s.level);
  for (const auto& [i, c] : ak.terms()) {
    TermIndex m = i;
    m.yb = {};
    WeylSection term = commutative_mul(WeylSection::monomial(s.n(), m, c, kWide), wide);
    for (int l = 0; l < g.n; ++l) {
      for (int rep = 0; rep < i.yb[l]; ++rep) {
        WeylSection next(s.n(), kWide, s.level);
        for (int p = 0; p < g.n; ++p) {
          if (!g.omega_inv[p][l].is_zero()) next += d_y(term, p) * g.omega_inv[p][l];
        }
        term = next * minus_inv;
      }
    }
    out += term;
  }
  out.set_trunc(t);
  if (!s.poly.exact().y) out.mark_truncated_y();
  return FockSection{std::move(out), s.level};
}

FockSection fock_connection_apply(const FedosovData& fd, const FockSection& s) {
  if (!fd.level || !(*fd.level == s.level)) throw FockError("connection and section levels differ");
  require_integral(fd);
  const auto& g = fd.g();
  WeylSection r = nabla(s.poly, g);
  r += bf_act(fd.gamma(), s, g).poly * s.level;
  WeylSection drho(g.n, kWide, s.level);
  for (int i = 0; i < g.n; ++i) {
    TermIndex t;
    t.form = dz_bit(i);
    drho.add_term(t, g.d_rho[i]);
  }
  r += commutative_mul(drho, s.poly) * s.level;
  return FockSection{std::move(r), s.level};
}

FockSection fock_nabla_squared(const ChartGeometry& g, const FockSection& s) {
  return FockSection{nabla(nabla(s.poly, g), g), s.level};
}

WeylSection build_beta(const ChartGeometry& g, int maxY) {
  Trunc t{maxY, 64, 64};
  WeylSection term(g.n, t);
  for (int i = 0; i < g.n; ++i) term += WeylSection::y(g.n, i, t) * g.d_rho[i];
  WeylSection beta = term;
  for (int m = 1; m < maxY && !term.is_zero(); ++m) {
    term = nabla_tilde10(term, g);
    beta += term;
  }
  return beta;
}

FockSection coherent_section(const FedosovData& fd) {
  if (!fd.level) throw FockError("coherent section needs a level");
  const Scalar& k = *fd.level;
  const auto& g = fd.g();
  WeylSection kb = build_beta(g, fd.maxY) * k;
  kb.set_level(k);
  WeylSection one = WeylSection::scalar(g.n, HPoly(1), Trunc{fd.maxY, 64, 64});
  one.set_level(k);
  WeylSection e = one, power = one;
  for (int m = 1; m <= fd.maxY; ++m) {
    power = commutative_mul(power, kb) * Scalar::rational(1, m);
    if (power.is_zero()) break;
    e += power;
  }
  return FockSection::make(e, k);
}

int fock_certified_degree(const FedosovData& fd) { return fd.maxY - 1; }

DiffOperator::DiffOperator(int n, Coeffs c, Scalar level) : n_(n), c_(std::move(c)), level_(std::move(level)) {
  std::erase_if(c_, [](const auto& kv) { return kv.second.is_zero(); });
}

DiffOperator DiffOperator::multiplication(int n, const RationalFn& f, Scalar level) {
  return DiffOperator(n, {{FiberIndex{}, f}}, std::move(level));
}

DiffOperator DiffOperator::derivative(int n, int i, Scalar level) {
  FiberIndex b{};
  b[i] = 1;
  return DiffOperator(n, {{b, RationalFn(1)}}, std::move(level));
}

int DiffOperator::order() const {
  int o = 0;
  for (const auto& [b, c] : c_) o = std::max(o, degree(b));
  return o;
}

bool DiffOperator::holomorphic() const {
  for (const auto& [b, c] : c_) {
    if (!c.is_holomorphic()) return false;
  }
  return true;
}

RationalFn DiffOperator::apply(const RationalFn& f) const {
  RationalFn r;
  for (const auto& [b, c] : c_) r += c * derive(f, b);
  return r;
}

DiffOperator DiffOperator::compose(const DiffOperator& other) const {
  Coeffs out;
  for (const auto& [a, ca] : c_) {
    for (const auto& [b, cb] : other.c_) {
      for (const auto& g : multi_indices(n_, degree(a))) {
        if (!dominated(g, a)) continue;
        FiberIndex rest{};
        for (int i = 0; i < kMaxDim; ++i) rest[i] = a[i] - g[i] + b[i];
        out[rest] += ca * derive(cb, g) * binomial(a, g);
      }
    }
  }
  return DiffOperator(n_, std::move(out), level_);
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& o) {
  for (const auto& [b, c] : o.c_) c_[b] += c;
  std::erase_if(c_, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

DiffOperator& DiffOperator::operator*=(const Scalar& s) {
  for (auto& [b, c] : c_) c *= s;
  std::erase_if(c_, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

bool operator==(const DiffOperator& a, const DiffOperator& b) {
  DiffOperator d = a;
  d += b * Scalar(-1);
  return d.c_.empty();
}

std::string DiffOperator::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (int i = 0; i < n_; ++i) {
      if (b[i] == 0) continue;
      os << "*d_z" << i + 1;
      if (b[i] > 1) os << "^" << static_cast<int>(b[i]);
    }
  }
  return os.str();
}

std::string DiffOperator::to_latex() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "\\left(" << c.to_latex() << "\\right)";
    for (int i = 0; i < n_; ++i) {
      if (b[i] == 0) continue;
      os << "\\partial_{z_{" << i + 1 << "}}";
      if (b[i] > 1) os << "^{" << static_cast<int>(b[i]) << "}";
    }
  }
  return os.str();
}

DiffOperator quantize_to_diffop(const FlatSection& q_in, const FedosovData& fd, int max_test_degree) {
  if (!fd.level) throw FockError("quantization needs a level");
  const Scalar& k = *fd.level;
  const auto& g = fd.g();
  FlatSection q = q_in.section.level() ? q_in : evaluate_flat(q_in, k);
  auto rep = quantizability_check(q);
  if (rep.verdict != Verdict::kExactBound) {
    throw FockError("section is not quantizable within the test: " + rep.to_string());
  }
  const int N = rep.bound;
  if (max_test_degree < N) throw std::invalid_argument("test degree below the operator order");
  if (q.certified_degree < N || fd.maxY < N) {
    throw FockError("truncation too small for an operator of order " + std::to_string(N));
  }
  FockSection e = coherent_section(fd);
  DiffOperator::Coeffs c;
  for (const auto& m : multi_indices(g.n, max_test_degree)) {
    RationalFn zm = z_power(m);
    WeylSection og = flat_prolong_holomorphic(zm, fd).section;
    FockSection f = FockSection::make(commutative_mul(og, e.poly), k);
    RationalFn image = symbol(bf_act(q.section, f, g).poly).coeff(0);
    RationalFn rest = image;
    for (const auto& [b, cb] : c) {
      if (b != m && dominated(b, m)) rest -= cb * derive(zm, b);
    }
    RationalFn cm = rest * falling(m, m).inverse();
    if (cm.is_zero()) continue;
    if (degree(m) > N) {
      throw FockError("inconsistent operator system: nonzero coefficient at order " +
                      std::to_string(degree(m)) + " > " + std::to_string(N));
    }
    if (!cm.is_holomorphic()) throw FockError("non-holomorphic operator coefficient " + cm.to_string());
    c[m] = cm;
  }
  return DiffOperator(g.n, std::move(c), k);
}

CheckReport symbol_iso_check(const FedosovData& fd, const std::vector<RationalFn>& holomorphic,
                             const std::vector<RationalFn>& non_holomorphic) {
  CheckReport rep;
  const auto& g = fd.g();
  FockSection e = coherent_section(fd);
  const int cert = fock_certified_degree(fd);
  for (const auto& f : holomorphic) {
    WeylSection of = flat_prolong_holomorphic(f, fd).section;
    FockSection s = FockSection::make(commutative_mul(of, e.poly), e.level);
    WeylSection d = fock_connection_apply(fd, s).poly.up_to_y_degree(cert);
    bool ok = d.is_zero() && symbol(s.poly) == HPoly(f);
    rep.push_back({"O_f e^{k beta} flat with symbol f, f = " + f.to_string(), ok,
                   d.is_zero() ? "" : d.to_string(), 0});
  }
  for (const auto& f : non_holomorphic) {
    FockSection s = FockSection::make(e.poly * f, e.level);
    WeylSection d = fock_connection_apply(fd, s).poly.up_to_y_degree(cert);
    WeylSection obstruction = d.with_y_degree(0).with_form_type(0, 1);
    WeylSection dbar(g.n, kWide, e.level);
    for (int j = 0; j < g.n; ++j) {
      TermIndex t;
      t.form = dzb_bit(j);
      dbar.add_term(t, f.derivative(zb_var(j)));
    }
    bool ok = !d.is_zero() && obstruction == dbar;
    rep.push_back({"f e^{k beta} not flat, obstruction dbar f, f = " + f.to_string(), ok,
                   obstruction.to_string(), 0});
  }
  return rep;
}

RationalFn PrequantumOperator::apply(const RationalFn& s) const {
  RationalFn r = zeroth * s;
  for (int i = 0; i < n; ++i) {
    r += d[i] * s.derivative(z_var(i));
    r += dbar[i] * s.derivative(zb_var(i));
  }
  return r;
}

bool PrequantumOperator::preserves_holomorphy(const std::vector<RationalFn>& samples) const {
  for (const auto& s : samples) {
    if (s.is_holomorphic() && !apply(s).is_holomorphic()) return false;
  }
  return true;
}

std::string PrequantumOperator::to_string() const {
  std::ostringstream os;
  os << "(" << zeroth.to_string() << ")";
  for (int i = 0; i < n; ++i) {
    if (!d[i].is_zero()) os << " + (" << d[i].to_string() << ")*d_z" << i + 1;
    if (!dbar[i].is_zero()) os << " + (" << dbar[i].to_string() << ")*d_zb" << i + 1;
  }
  return os.str();
}

PrequantumOperator prequantum_operator(const ChartGeometry& g, const RationalFn& f, const Scalar& k) {
  if (k.is_zero()) throw std::domain_error("level must be nonzero");
  const Scalar kappa = Scalar::i() / k;
  PrequantumOperator q;
  q.n = g.n;
  q.level = k;
  q.d.assign(g.n, RationalFn());
  q.dbar.assign(g.n, RationalFn());
  q.zeroth = f;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      // X_f = i w^{i jbar} dbar_j f d_i - i w^{i jbar} d_i f dbar_j.
      RationalFn xi = g.omega_inv[i][j] * f.derivative(zb_var(j)) * Scalar::i();
      RationalFn xj = g.omega_inv[i][j] * f.derivative(z_var(i)) * (-Scalar::i());
      q.d[i] += xi * kappa;
      q.dbar[j] += xj * kappa;
      q.zeroth += xi * g.d_rho[i] * (kappa * k);
    }
  }
  return q;
}

Vector kahler_trace_defect(const ChartGeometry& g) {
  Vector out(g.n);
  for (int i = 0; i < g.n; ++i) {
    RationalFn s = g.d_rho1[i];
    for (int k = 0; k < g.n; ++k) {
      for (int j = 0; j < g.n; ++j) s += g.omega[i][j].derivative(z_var(k)) * g.omega_inv[k][j];
    }
    out[i] = s;
  }
  return out;
}

std::vector<std::string> missing_from_generated_span(const std::vector<DiffOperator>& gens, int max_word,
                                                     int max_order) {
  if (gens.empty()) throw std::invalid_argument("no generators");
  const int n = gens.front().n();
  using Key = std::pair<FiberIndex, Mono>;
  using Row = std::map<Key, Scalar>;
  auto flatten = [](const DiffOperator& op) {
    Row r;
    for (const auto& [b, c] : op.coeffs()) {
      if (!c.is_polynomial()) throw std::invalid_argument("span check needs polynomial coefficients");
      for (const auto& [m, s] : c.num().terms()) r[{b, m}] += s;
    }
    std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
    return r;
  };
  // Echelon basis keyed by pivot (largest key).
  std::map<Key, Row> basis;
  auto reduce = [&basis](Row r) {
    while (!r.empty()) {
      auto piv = r.rbegin()->first;
      auto it = basis.find(piv);
      if (it == basis.end()) break;
      Scalar f = r.rbegin()->second / it->second.rbegin()->second;
      for (const auto& [key, v] : it->second) r[key] -= f * v;
      std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
    }
    return r;
  };
  std::vector<DiffOperator> words{DiffOperator::multiplication(n, RationalFn(1), gens.front().level())};
  std::vector<DiffOperator> frontier = words;
  for (int len = 1; len <= max_word; ++len) {
    std::vector<DiffOperator> next;
    for (const auto& w : frontier) {
      for (const auto& gen : gens) next.push_back(w.compose(gen));
    }
    words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto& w : words) {
    Row r = reduce(flatten(w));
    if (!r.empty()) basis[r.rbegin()->first] = std::move(r);
  }
  std::vector<std::string> missing;
  for (const auto& a : multi_indices(n, max_order)) {
    for (const auto& b : multi_indices(n, max_order - degree(a))) {
      DiffOperator target(n, {{b, z_power(a)}});
      if (!reduce(flatten(target)).empty()) missing.push_back(target.to_string());
    }
  }
  return missing;
}

}  // namespace fedq
