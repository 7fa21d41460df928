#include "fedq/weyl.hpp"

#include <bit>
#include <stdexcept>

namespace fedq {

namespace {

int fiber_degree(const FiberIndex& f) {
  int d = 0;
  for (auto e : f) d += e;
  return d;
}

std::optional<Scalar> merge_level(const WeylSection& a, const WeylSection& b) {
  if (a.level() && b.level() && !(*a.level() == *b.level())) {
    throw std::invalid_argument("sections evaluated at different levels");
  }
  return a.level() ? a.level() : b.level();
}

void check_dims(const WeylSection& a, const WeylSection& b) {
  if (a.n() != b.n()) throw std::invalid_argument("sections of different dimension");
}

void check_geometry(const WeylSection& a, const ChartGeometry& g) {
  if (a.n() != g.n) throw std::invalid_argument("section dimension does not match geometry");
}

WeylSection::Exact meet_exact(const WeylSection::Exact& a, const WeylSection::Exact& b) {
  return {a.y && b.y, a.ybar && b.ybar, a.h && b.h};
}

WeylSection empty_like(const WeylSection& a) {
  WeylSection r(a.n(), a.trunc(), a.level());
  r.set_exact(a.exact());
  return r;
}

Scalar falling(int n, int k) {
  Scalar r(1);
  for (int i = 0; i < k; ++i) r *= Scalar(n - i);
  return r;
}

// Powers of w^{i jbar} reused across one product.
class OmegaPowers {
 public:
  explicit OmegaPowers(const ChartGeometry& g) : g_(g) {}
  const RationalFn& get(int i, int j, int e) {
    auto& v = cache_[i * kMaxDim + j];
    if (v.empty()) v.push_back(RationalFn(1));
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * g_.omega_inv[i][j]);
    return v[e];
  }

 private:
  const ChartGeometry& g_;
  std::array<std::vector<RationalFn>, kMaxDim * kMaxDim> cache_;
};

// Sum over contraction matrices c_{ij} between y^i of the left term and yb^j of
// the right term: coefficient prod (w^{i jbar})^{c_ij} / c_ij! times falling
// factorials, h^{sum c + hshift}. Contractions with sum c < min_c are skipped.
WeylSection wick_core(const WeylSection& a, const WeylSection& b, const ChartGeometry* g,
                      int min_c, int hshift) {
  check_dims(a, b);
  const int n = a.n();
  WeylSection r(n, meet(a.trunc(), b.trunc()), merge_level(a, b));
  r.set_exact(meet_exact(a.exact(), b.exact()));
  const auto& level = r.level();
  const Trunc& t = r.trunc();
  std::vector<std::pair<int, int>> pairs;
  if (g) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!g->omega_inv[i][j].is_zero()) pairs.emplace_back(i, j);
      }
    }
  }
  std::optional<OmegaPowers> powers;
  if (g) powers.emplace(*g);
  std::vector<int> c(pairs.size(), 0);

  for (const auto& [ta, ca] : a.terms()) {
    for (const auto& [tb, cb] : b.terms()) {
      int sign = wedge_sign(ta.form, tb.form);
      if (sign == 0) continue;
      std::optional<RationalFn> base;
      std::array<int, kMaxDim> row{}, col{};
      auto emit = [&](int k) {
        if (k < min_c) return;
        TermIndex out;
        out.form = ta.form | tb.form;
        for (int i = 0; i < kMaxDim; ++i) {
          out.y[i] = static_cast<std::uint8_t>(ta.y[i] - row[i] + tb.y[i]);
          out.yb[i] = static_cast<std::uint8_t>(ta.yb[i] + tb.yb[i] - col[i]);
        }
        int hp = ta.h + tb.h + k + hshift;
        out.h = level ? 0 : hp;
        if (out.y_degree() > t.maxY || out.yb_degree() > t.maxYbar || (!level && hp > t.maxH)) {
          r.add_term(out, RationalFn(1));  // clears the matching exactness flag
          return;
        }
        Scalar s(sign);
        for (int i = 0; i < n; ++i) s *= falling(ta.y[i], row[i]);
        for (int j = 0; j < n; ++j) s *= falling(tb.yb[j], col[j]);
        if (!base) base = ca * cb;
        RationalFn coef = *base;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          if (c[p] == 0) continue;
          s /= factorial(c[p]);
          const RationalFn& w = powers->get(pairs[p].first, pairs[p].second, c[p]);
          if (w.is_constant()) {
            s *= w.constant_value();
          } else {
            coef *= w;
          }
        }
        if (level) {
          s *= pow(*level, -hp);
          hp = 0;
        }
        out.h = hp;
        r.add_term(out, coef * s);
      };
      std::function<void(std::size_t, int)> rec = [&](std::size_t p, int k) {
        if (p == pairs.size()) {
          emit(k);
          return;
        }
        auto [i, j] = pairs[p];
        int lim = std::min(ta.y[i] - row[i], tb.yb[j] - col[j]);
        for (int e = 0; e <= lim; ++e) {
          c[p] = e;
          row[i] += e;
          col[j] += e;
          rec(p + 1, k + e);
          row[i] -= e;
          col[j] -= e;
        }
        c[p] = 0;
      };
      rec(0, 0);
    }
  }
  return r;
}

}  // namespace

int TermIndex::dz_degree() const { return std::popcount(static_cast<unsigned>(form & 0x0f)); }
int TermIndex::dzb_degree() const { return std::popcount(static_cast<unsigned>(form & 0xf0)); }
int TermIndex::y_degree() const { return fiber_degree(y); }
int TermIndex::yb_degree() const { return fiber_degree(yb); }

std::uint8_t form_mask(const std::vector<int>& dz, const std::vector<int>& dzb) {
  std::uint8_t m = 0;
  for (int i : dz) m |= dz_bit(i);
  for (int j : dzb) m |= dzb_bit(j);
  return m;
}

int wedge_sign(std::uint8_t a, std::uint8_t b) {
  if (a & b) return 0;
  int swaps = 0;
  for (int x = 0; x < 8; ++x) {
    if (!(b & (1u << x))) continue;
    unsigned above = a & ~((2u << x) - 1u);
    swaps += std::popcount(above);
  }
  return swaps % 2 ? -1 : 1;
}

Trunc meet(const Trunc& a, const Trunc& b) {
  return {std::min(a.maxY, b.maxY), std::min(a.maxYbar, b.maxYbar), std::min(a.maxH, b.maxH)};
}

WeylSection::WeylSection(int n, Trunc t, std::optional<Scalar> level)
    : n_(n), trunc_(t), level_(std::move(level)) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("section dimension must be 1..4");
  if (level_ && level_->is_zero()) throw std::domain_error("level must be nonzero");
}

WeylSection WeylSection::scalar(int n, const HPoly& f, Trunc t) {
  WeylSection r(n, t);
  for (const auto& [h, c] : f.coeffs()) {
    TermIndex idx;
    idx.h = h;
    r.add_term(idx, c);
  }
  return r;
}

WeylSection WeylSection::monomial(int n, const TermIndex& idx, const RationalFn& c, Trunc t) {
  WeylSection r(n, t);
  r.add_term(idx, c);
  return r;
}

WeylSection WeylSection::y(int n, int i, Trunc t) {
  TermIndex idx;
  idx.y[i] = 1;
  return monomial(n, idx, RationalFn(1), t);
}

WeylSection WeylSection::yb(int n, int j, Trunc t) {
  TermIndex idx;
  idx.yb[j] = 1;
  return monomial(n, idx, RationalFn(1), t);
}

void WeylSection::set_trunc(Trunc t) {
  trunc_ = t;
  std::erase_if(terms_, [&](const auto& kv) {
    const TermIndex& i = kv.first;
    bool drop = false;
    if (i.y_degree() > t.maxY) exact_.y = false, drop = true;
    if (i.yb_degree() > t.maxYbar) exact_.ybar = false, drop = true;
    if (i.h > t.maxH) exact_.h = false, drop = true;
    return drop;
  });
}

RationalFn WeylSection::coeff(const TermIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? RationalFn() : it->second;
}

void WeylSection::add_term(const TermIndex& idx, const RationalFn& c) {
  if (c.is_zero()) return;
  if (level_ && idx.h != 0) throw std::logic_error("h power in an evaluated section");
  bool drop = false;
  if (idx.y_degree() > trunc_.maxY) exact_.y = false, drop = true;
  if (idx.yb_degree() > trunc_.maxYbar) exact_.ybar = false, drop = true;
  if (idx.h > trunc_.maxH) exact_.h = false, drop = true;
  if (drop) return;
  auto [it, fresh] = terms_.emplace(idx, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int WeylSection::max_y_degree() const {
  int d = 0;
  for (const auto& [i, c] : terms_) d = std::max(d, i.y_degree());
  return d;
}

int WeylSection::min_y_degree() const {
  int d = -1;
  for (const auto& [i, c] : terms_) d = d < 0 ? i.y_degree() : std::min(d, i.y_degree());
  return d < 0 ? 0 : d;
}

int WeylSection::max_ybar_degree() const {
  int d = 0;
  for (const auto& [i, c] : terms_) d = std::max(d, i.yb_degree());
  return d;
}

int WeylSection::max_h() const {
  int d = 0;
  for (const auto& [i, c] : terms_) d = std::max(d, i.h);
  return d;
}

int WeylSection::max_form_degree() const {
  int d = 0;
  for (const auto& [i, c] : terms_) d = std::max(d, i.form_degree());
  return d;
}

int WeylSection::weight() const {
  int w = 0;
  for (const auto& [i, c] : terms_) w = std::max(w, i.weight());
  return w;
}

WeylSection WeylSection::filter(const std::function<bool(const TermIndex&)>& keep) const {
  WeylSection r = empty_like(*this);
  for (const auto& [i, c] : terms_) {
    if (keep(i)) r.terms_.emplace(i, c);
  }
  return r;
}

WeylSection WeylSection::with_y_degree(int d) const {
  return filter([d](const TermIndex& i) { return i.y_degree() == d; });
}

WeylSection WeylSection::with_ybar_degree(int d) const {
  return filter([d](const TermIndex& i) { return i.yb_degree() == d; });
}

WeylSection WeylSection::with_form_type(int p, int q) const {
  return filter([p, q](const TermIndex& i) { return i.dz_degree() == p && i.dzb_degree() == q; });
}

WeylSection WeylSection::up_to_y_degree(int d) const {
  return filter([d](const TermIndex& i) { return i.y_degree() <= d; });
}

WeylSection& WeylSection::operator+=(const WeylSection& o) {
  check_dims(*this, o);
  level_ = merge_level(*this, o);
  Trunc t = meet(trunc_, o.trunc_);
  if (!(t == trunc_)) set_trunc(t);
  exact_ = meet_exact(exact_, o.exact_);
  for (const auto& [i, c] : o.terms_) add_term(i, c);
  return *this;
}

WeylSection& WeylSection::operator-=(const WeylSection& o) { return *this += -o; }

WeylSection& WeylSection::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [i, c] : terms_) c *= s;
  return *this;
}

WeylSection& WeylSection::operator*=(const RationalFn& f) {
  if (f.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [i, c] : terms_) c *= f;
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

WeylSection WeylSection::operator-() const {
  WeylSection r = *this;
  for (auto& [i, c] : r.terms_) c = -c;
  return r;
}

WeylSection WeylSection::times_hbar(int p) const {
  if (level_) return *this * pow(*level_, -p);
  WeylSection r = empty_like(*this);
  for (const auto& [i, c] : terms_) {
    TermIndex j = i;
    j.h += p;
    r.add_term(j, c);
  }
  return r;
}

bool operator==(const WeylSection& a, const WeylSection& b) {
  if (a.n_ != b.n_) return false;
  if (a.terms_.size() == b.terms_.size()) {
    bool same = true;
    auto ib = b.terms_.begin();
    for (auto ia = a.terms_.begin(); ia != a.terms_.end() && same; ++ia, ++ib) {
      same = ia->first == ib->first && ia->second == ib->second;
    }
    if (same) return true;
  }
  WeylSection d = a;
  d.trunc_ = Trunc{};
  d.level_ = std::nullopt;
  for (const auto& [i, c] : b.terms_) d.add_term(i, -c);
  return d.is_zero();
}

namespace {

std::string term_factors(const TermIndex& i, bool latex) {
  std::vector<std::string> forms, fib;
  for (int k = 0; k < kMaxDim; ++k) {
    if (i.form & dz_bit(k)) {
      forms.push_back(latex ? "dz_{" + std::to_string(k + 1) + "}" : "dz" + std::to_string(k + 1));
    }
  }
  for (int k = 0; k < kMaxDim; ++k) {
    if (i.form & dzb_bit(k)) {
      forms.push_back(latex ? "d\\bar z_{" + std::to_string(k + 1) + "}"
                            : "dzb" + std::to_string(k + 1));
    }
  }
  auto fiber = [&](const FiberIndex& f, const std::string& plain, const std::string& tex) {
    for (int k = 0; k < kMaxDim; ++k) {
      if (f[k] == 0) continue;
      std::string s = latex ? tex + "_{" + std::to_string(k + 1) + "}" : plain + std::to_string(k + 1);
      if (f[k] > 1) s += latex ? "^{" + std::to_string(f[k]) + "}" : "^" + std::to_string(f[k]);
      fib.push_back(s);
    }
  };
  fiber(i.y, "y", "y");
  fiber(i.yb, "yb", "\\bar y");
  if (i.h != 0) {
    std::string s = latex ? "\\hbar" : "h";
    if (i.h != 1) s += latex ? "^{" + std::to_string(i.h) + "}" : "^" + std::to_string(i.h);
    fib.push_back(s);
  }
  std::string out;
  for (std::size_t k = 0; k < forms.size(); ++k) {
    out += (k ? (latex ? "\\wedge " : "/\\") : "") + forms[k];
  }
  for (const auto& f : fib) {
    if (!out.empty()) out += latex ? " " : "*";
    out += f;
  }
  return out;
}

}  // namespace

std::string WeylSection::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : terms_) {
    std::string f = term_factors(i, false);
    std::string cs = c.to_string();
    std::string piece;
    if (f.empty()) {
      piece = cs;
    } else if (c == RationalFn(1)) {
      piece = f;
    } else if (c == RationalFn(-1)) {
      piece = "-" + f;
    } else {
      piece = "(" + cs + ")*" + f;
    }
    if (out.empty()) {
      out = piece;
    } else if (piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

std::string WeylSection::to_latex() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : terms_) {
    std::string f = term_factors(i, true);
    std::string piece = f.empty() ? c.to_latex() : "\\left(" + c.to_latex() + "\\right)" + f;
    out += out.empty() ? piece : " + " + piece;
  }
  return out;
}

WeylSection commutative_mul(const WeylSection& a, const WeylSection& b) {
  return wick_core(a, b, nullptr, 0, 0);
}

WeylSection wick_mul(const WeylSection& a, const WeylSection& b, const ChartGeometry& g) {
  check_geometry(a, g);
  return wick_core(a, b, &g, 0, 0);
}

namespace {
std::pair<WeylSection, WeylSection> split_parity(const WeylSection& a) {
  return {a.filter([](const TermIndex& i) { return i.form_degree() % 2 == 0; }),
          a.filter([](const TermIndex& i) { return i.form_degree() % 2 == 1; })};
}

WeylSection bracket_core(const WeylSection& a, const WeylSection& b, const ChartGeometry& g,
                         int min_c, int hshift) {
  check_geometry(a, g);
  auto [ae, ao] = split_parity(a);
  auto [be, bo] = split_parity(b);
  WeylSection r = wick_core(a, b, &g, min_c, hshift);
  r -= wick_core(be, a, &g, min_c, hshift);
  r -= wick_core(bo, ae, &g, min_c, hshift);
  r += wick_core(bo, ao, &g, min_c, hshift);
  return r;
}
}  // namespace

WeylSection graded_bracket(const WeylSection& a, const WeylSection& b, const ChartGeometry& g) {
  return bracket_core(a, b, g, 0, 0);
}

WeylSection hbar_bracket(const WeylSection& a, const WeylSection& b, const ChartGeometry& g) {
  // The uncontracted parts cancel in a graded bracket.
  return bracket_core(a, b, g, 1, -1);
}

WeylSection d_y(const WeylSection& a, int i) {
  WeylSection r = empty_like(a);
  for (const auto& [idx, c] : a.terms()) {
    if (idx.y[i] == 0) continue;
    TermIndex o = idx;
    --o.y[i];
    r.add_term(o, c * Scalar(idx.y[i]));
  }
  return r;
}

WeylSection d_yb(const WeylSection& a, int j) {
  WeylSection r = empty_like(a);
  for (const auto& [idx, c] : a.terms()) {
    if (idx.yb[j] == 0) continue;
    TermIndex o = idx;
    --o.yb[j];
    r.add_term(o, c * Scalar(idx.yb[j]));
  }
  return r;
}

WeylSection wedge_left(std::uint8_t bit, const WeylSection& a) {
  WeylSection r = empty_like(a);
  for (const auto& [idx, c] : a.terms()) {
    int s = wedge_sign(bit, idx.form);
    if (s == 0) continue;
    TermIndex o = idx;
    o.form |= bit;
    r.add_term(o, s > 0 ? c : -c);
  }
  return r;
}

namespace {
int interior_sign(std::uint8_t bit, std::uint8_t form) {
  return std::popcount(static_cast<unsigned>(form & (bit - 1u))) % 2 ? -1 : 1;
}

// Core of the delta inverses: sum over the selected generators of
// fiber-variable * interior, divided by the supplied degree.
WeylSection delta_inverse_core(const WeylSection& a, bool holo, bool anti,
                               const std::function<int(const TermIndex&)>& degree) {
  WeylSection r = empty_like(a);
  for (const auto& [idx, c] : a.terms()) {
    int p = degree(idx);
    if (p == 0) continue;
    Scalar inv = Scalar::rational(1, p);
    for (int k = 0; k < a.n(); ++k) {
      if (holo && (idx.form & dz_bit(k))) {
        TermIndex o = idx;
        o.form &= static_cast<std::uint8_t>(~dz_bit(k));
        ++o.y[k];
        r.add_term(o, c * (inv * Scalar(interior_sign(dz_bit(k), idx.form))));
      }
      if (anti && (idx.form & dzb_bit(k))) {
        TermIndex o = idx;
        o.form &= static_cast<std::uint8_t>(~dzb_bit(k));
        ++o.yb[k];
        r.add_term(o, c * (inv * Scalar(interior_sign(dzb_bit(k), idx.form))));
      }
    }
  }
  return r;
}
}  // namespace

WeylSection interior(std::uint8_t bit, const WeylSection& a) {
  WeylSection r = empty_like(a);
  for (const auto& [idx, c] : a.terms()) {
    if (!(idx.form & bit)) continue;
    TermIndex o = idx;
    o.form &= static_cast<std::uint8_t>(~bit);
    r.add_term(o, interior_sign(bit, idx.form) > 0 ? c : -c);
  }
  return r;
}

WeylSection delta10(const WeylSection& a) {
  WeylSection r = empty_like(a);
  for (int i = 0; i < a.n(); ++i) r += wedge_left(dz_bit(i), d_y(a, i));
  return r;
}

WeylSection delta01(const WeylSection& a) {
  WeylSection r = empty_like(a);
  for (int j = 0; j < a.n(); ++j) r += wedge_left(dzb_bit(j), d_yb(a, j));
  return r;
}

WeylSection delta(const WeylSection& a) { return delta10(a) + delta01(a); }

WeylSection delta10_inv(const WeylSection& a) {
  return delta_inverse_core(a, true, false,
                            [](const TermIndex& i) { return i.dz_degree() + i.y_degree(); });
}

WeylSection delta01_inv(const WeylSection& a) {
  return delta_inverse_core(a, false, true,
                            [](const TermIndex& i) { return i.dzb_degree() + i.yb_degree(); });
}

WeylSection delta_inv(const WeylSection& a) {
  return delta_inverse_core(a, true, true, [](const TermIndex& i) {
    return i.form_degree() + i.y_degree() + i.yb_degree();
  });
}

WeylSection pi_0star(const WeylSection& a) {
  return a.filter([](const TermIndex& i) { return i.dz_degree() == 0 && i.y_degree() == 0; });
}

HPoly symbol(const WeylSection& a) {
  HPoly r;
  for (const auto& [i, c] : a.terms()) {
    if (i.form == 0 && i.y_degree() == 0 && i.yb_degree() == 0) r.add(i.h, c);
  }
  return r;
}

WeylSection symbol_section(const WeylSection& a) {
  return a.filter(
      [](const TermIndex& i) { return i.form == 0 && i.y_degree() == 0 && i.yb_degree() == 0; });
}

namespace {
WeylSection nabla_part(const WeylSection& a, const ChartGeometry& g, bool holo) {
  check_geometry(a, g);
  const int n = g.n;
  WeylSection r = empty_like(a);
  const auto& gam = holo ? g.christoffel : g.christoffel_bar;
  for (const auto& [idx, c] : a.terms()) {
    for (int m = 0; m < n; ++m) {
      std::uint8_t bit = holo ? dz_bit(m) : dzb_bit(m);
      int s = wedge_sign(bit, idx.form);
      if (s == 0) continue;
      TermIndex base = idx;
      base.form |= bit;
      RationalFn dc = c.derivative(holo ? z_var(m) : zb_var(m));
      r.add_term(base, s > 0 ? dc : -dc);
      const FiberIndex& fib = holo ? idx.y : idx.yb;
      for (int k = 0; k < n; ++k) {
        if (fib[k] == 0) continue;
        for (int j = 0; j < n; ++j) {
          const RationalFn& G = gam[k][m][j];
          if (G.is_zero()) continue;
          TermIndex o = base;
          FiberIndex& f = holo ? o.y : o.yb;
          --f[k];
          ++f[j];
          r.add_term(o, c * G * Scalar(-s * fib[k]));
        }
      }
    }
  }
  return r;
}
}  // namespace

WeylSection nabla10(const WeylSection& a, const ChartGeometry& g) { return nabla_part(a, g, true); }
WeylSection nabla01(const WeylSection& a, const ChartGeometry& g) { return nabla_part(a, g, false); }
WeylSection nabla(const WeylSection& a, const ChartGeometry& g) { return nabla10(a, g) + nabla01(a, g); }

WeylSection nabla_tilde10(const WeylSection& a, const ChartGeometry& g) {
  return delta10_inv(nabla10(a, g));
}

WeylSection evaluate_hbar(const WeylSection& a, const Scalar& k) {
  if (k.is_zero()) throw std::domain_error("level must be nonzero");
  if (a.level()) {
    if (*a.level() == k) return a;
    throw std::invalid_argument("section already evaluated at another level");
  }
  WeylSection r(a.n(), a.trunc(), k);
  r.set_exact(a.exact());
  for (const auto& [i, c] : a.terms()) {
    TermIndex o = i;
    o.h = 0;
    r.add_term(o, c * pow(k, -i.h));
  }
  return r;
}

WeylSection filtration_cut(const WeylSection& a, int max_weight) {
  return a.filter([max_weight](const TermIndex& i) { return i.weight() <= max_weight; });
}

WeylSection curvature_section(const ChartGeometry& g, Trunc t) {
  WeylSection r(g.n, t);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      for (int k = 0; k < g.n; ++k) {
        for (int l = 0; l < g.n; ++l) {
          TermIndex idx;
          idx.form = dz_bit(i) | dzb_bit(j);
          idx.y[k] = 1;
          idx.yb[l] = 1;
          r.add_term(idx, g.curvature[i][j][k][l]);
        }
      }
    }
  }
  return r;
}

WeylSection omega_form(const ChartGeometry& g, Trunc t) {
  WeylSection r(g.n, t);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      TermIndex idx;
      idx.form = dz_bit(i) | dzb_bit(j);
      r.add_term(idx, g.omega[i][j]);
    }
  }
  return r;
}

WeylSection alpha_section(const ChartGeometry& g, const AlphaForm& a, Trunc t) {
  WeylSection r(g.n, t);
  for (const auto& [h, m] : a.coeff) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        TermIndex idx;
        idx.form = dz_bit(i) | dzb_bit(j);
        idx.h = h;
        r.add_term(idx, m[i][j]);
      }
    }
  }
  return r;
}

}  // namespace fedq
