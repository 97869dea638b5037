#include "cascadeho/exactalg.hpp"

#include "cascadeho/errors.hpp"
#include "cascadeho/parallel.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cascadeho {

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) {
  Rat c = v;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat parse_rational(const std::string& text) {
  auto bad = [&] { return std::invalid_argument("not a rational: '" + text + "'"); };
  auto valid_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-') throw bad();
  Rat r;
  r.get_num() = Int(num);
  r.get_den() = Int(den);
  if (r.get_den() == 0) throw bad();
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<Int>>& rows) {
  std::size_t nc = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), nc);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != nc) throw std::invalid_argument("ragged matrix");
    for (std::size_t c = 0; c < nc; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Int IntMatrix::get(std::size_t r, std::size_t c) const {
  auto it = entries_.find({r, c});
  return it == entries_.end() ? Int(0) : it->second;
}

void IntMatrix::set(std::size_t r, std::size_t c, const Int& v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
  if (v == 0)
    entries_.erase({r, c});
  else
    entries_[{r, c}] = v;
}

void IntMatrix::add(std::size_t r, std::size_t c, const Int& v) { set(r, c, get(r, c) + v); }

std::vector<std::vector<Int>> IntMatrix::dense() const {
  std::vector<std::vector<Int>> d(rows_, std::vector<Int>(cols_, 0));
  for (auto& [k, v] : entries_) d[k.first][k.second] = v;
  return d;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (auto& [k, v] : entries_) t.entries_[{k.second, k.first}] = v;
  return t;
}

IntMatrix IntMatrix::select(const std::vector<std::size_t>& rs,
                            const std::vector<std::size_t>& cs) const {
  IntMatrix out(rs.size(), cs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) {
      auto it = entries_.find({rs[i], cs[j]});
      if (it != entries_.end()) out.entries_[{i, j}] = it->second;
    }
  return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  std::vector<std::vector<std::pair<std::size_t, const Int*>>> orow(o.rows_);
  for (auto& [k, v] : o.entries_) orow[k.first].push_back({k.second, &v});
  std::map<Key, Int> acc;
  for (auto& [k, v] : entries_)
    for (auto& [c, w] : orow[k.second]) acc[{k.first, c}] += v * *w;
  IntMatrix out(rows_, o.cols_);
  for (auto& [k, v] : acc)
    if (v != 0) out.entries_[k] = v;
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape");
  IntMatrix out = *this;
  for (auto& [k, v] : o.entries_) out.add(k.first, k.second, v);
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape");
  IntMatrix out = *this;
  for (auto& [k, v] : o.entries_) out.add(k.first, k.second, -v);
  return out;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

RatMatrix RatMatrix::from(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (auto& [k, v] : m.entries()) r.at(k.first, k.second) = Rat(v);
  return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  RatMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
    }
  return out;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape");
  RatMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape");
  RatMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

bool RatMatrix::operator==(const RatMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rat& x) { return x == 0; });
}

std::size_t RatMatrix::rank() const {
  RatMatrix a = *this;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && a.at(p, c) == 0) ++p;
    if (p == rows_) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(a.at(p, j), a.at(r, j));
    for (std::size_t i = r + 1; i < rows_; ++i) {
      if (a.at(i, c) == 0) continue;
      Rat f = a.at(i, c) / a.at(r, c);
      for (std::size_t j = c; j < cols_; ++j) a.at(i, j) -= f * a.at(r, j);
    }
    ++r;
  }
  return r;
}

std::size_t rank_over_q(const IntMatrix& m) { return RatMatrix::from(m).rank(); }

// Fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  auto a = m.dense();
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = t;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// ---------------------------------------------------------------- Smith form

namespace {

struct Dense {
  std::size_t r = 0, c = 0;
  std::vector<Int> a;
  Dense(std::size_t r_, std::size_t c_) : r(r_), c(c_), a(r_ * c_, 0) {}
  Int& at(std::size_t i, std::size_t j) { return a[i * c + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * c + j]; }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < c; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < r; ++k) std::swap(at(k, i), at(k, j));
  }
  // row_i += f * row_j
  void axpy_row(std::size_t i, std::size_t j, const Int& f) {
    for (std::size_t k = 0; k < c; ++k)
      if (at(j, k) != 0) at(i, k) += f * at(j, k);
  }
  void axpy_col(std::size_t i, std::size_t j, const Int& f) {
    for (std::size_t k = 0; k < r; ++k)
      if (at(k, j) != 0) at(k, i) += f * at(k, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < c; ++k) at(i, k) = -at(i, k);
  }

  static Dense identity(std::size_t n) {
    Dense d(n, n);
    for (std::size_t i = 0; i < n; ++i) d.at(i, i) = 1;
    return d;
  }
  static Dense from(const IntMatrix& m) {
    Dense d(m.rows(), m.cols());
    for (auto& [k, v] : m.entries()) d.at(k.first, k.second) = v;
    return d;
  }
  IntMatrix to_matrix() const {
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (at(i, j) != 0) m.set(i, j, at(i, j));
    return m;
  }
};

// Reduces s in place to Smith form. Row operations are mirrored on u (u <- E u),
// column operations on v (v <- v F), so u * m * v == s throughout.
void smith_reduce(Dense& s, Dense* u, Dense* v) {
  auto row_swap = [&](std::size_t i, std::size_t j) {
    s.swap_rows(i, j);
    if (u) u->swap_rows(i, j);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    s.swap_cols(i, j);
    if (v) v->swap_cols(i, j);
  };
  auto row_axpy = [&](std::size_t i, std::size_t j, const Int& f) {
    s.axpy_row(i, j, f);
    if (u) u->axpy_row(i, j, f);
  };
  auto col_axpy = [&](std::size_t i, std::size_t j, const Int& f) {
    s.axpy_col(i, j, f);
    if (v) v->axpy_col(i, j, f);
  };

  std::size_t n = std::min(s.r, s.c);
  for (std::size_t t = 0; t < n; ++t) {
    // Pivot-size control: smallest nonzero |entry| of the trailing block.
    std::size_t pi = s.r, pj = s.c;
    for (std::size_t i = t; i < s.r; ++i)
      for (std::size_t j = t; j < s.c; ++j)
        if (s.at(i, j) != 0 && (pi == s.r || abs(s.at(i, j)) < abs(s.at(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == s.r) break;
    row_swap(t, pi);
    col_swap(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < s.r; ++i) {
        if (s.at(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), s.at(i, t).get_mpz_t(), s.at(t, t).get_mpz_t());
        row_axpy(i, t, -q);
        if (s.at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < s.c; ++j) {
        if (s.at(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), s.at(t, j).get_mpz_t(), s.at(t, t).get_mpz_t());
        col_axpy(j, t, -q);
        if (s.at(t, j) != 0) clean = false;
      }
      if (!clean) {
        // a remainder smaller than the pivot survived; move it into place
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < s.r; ++i)
          if (s.at(i, t) != 0 && abs(s.at(i, t)) < abs(s.at(bi, bj))) bi = i, bj = t;
        for (std::size_t j = t + 1; j < s.c; ++j)
          if (s.at(t, j) != 0 && abs(s.at(t, j)) < abs(s.at(bi, bj))) bi = t, bj = j;
        row_swap(t, bi);
        col_swap(t, bj);
        continue;
      }
      // Divisibility: fold an offending row into the pivot row and redo.
      std::size_t bad = s.r;
      for (std::size_t i = t + 1; i < s.r && bad == s.r; ++i)
        for (std::size_t j = t + 1; j < s.c; ++j)
          if (s.at(i, j) != 0 && !mpz_divisible_p(s.at(i, j).get_mpz_t(), s.at(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == s.r) break;
      row_axpy(t, bad, 1);
    }
    if (s.at(t, t) < 0) {
      s.negate_row(t);
      if (u) u->negate_row(t);
    }
  }
}

} // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  Dense s = Dense::from(m);
  Dense u = Dense::identity(m.rows());
  Dense v = Dense::identity(m.cols());
  smith_reduce(s, &u, &v);
  return {u.to_matrix(), s.to_matrix(), v.to_matrix()};
}

std::vector<Int> invariant_factors(const IntMatrix& m) {
  Dense s = Dense::from(m);
  smith_reduce(s, nullptr, nullptr);
  std::vector<Int> out;
  for (std::size_t i = 0; i < std::min(s.r, s.c); ++i)
    if (s.at(i, i) != 0) out.push_back(s.at(i, i));
  return out;
}

// ---------------------------------------------------------------- gradings

long GradingMode::normalize(long g) const {
  if (kind == Kind::Integer) return g;
  long n = modulus;
  return ((g % n) + n) % n;
}

std::string GradingMode::label(long g) const {
  if (kind == Kind::Parity) return normalize(g) == 0 ? "even" : "odd";
  return std::to_string(normalize(g));
}

std::optional<std::size_t> ChainComplex::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].id == id) return i;
  return std::nullopt;
}

std::string HomologyGroup::describe() const {
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  // group equal torsion factors as (Z/n)^k
  for (std::size_t i = 0; i < torsion.size();) {
    std::size_t j = i;
    while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
    if (!first) os << " + ";
    first = false;
    if (j - i == 1)
      os << "Z/" << torsion[i].get_str();
    else
      os << "(Z/" << torsion[i].get_str() << ")^" << (j - i);
    i = j;
  }
  if (first) os << "0";
  return os.str();
}

HomologyGroup HomologyResult::at(const std::string& cls, long grading) const {
  auto it = groups.find({cls, mode.normalize(grading)});
  return it == groups.end() ? HomologyGroup{} : it->second;
}

bool HomologyResult::same_groups(const HomologyResult& o) const {
  auto nonzero = [](const HomologyResult& h) {
    std::map<HomologyKey, HomologyGroup> out;
    for (auto& [k, g] : h.groups)
      if (!g.is_zero()) out[k] = g;
    return out;
  };
  auto a = nonzero(*this), b = nonzero(o);
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (ia->first != ib->first || !ia->second.same_group(ib->second)) return false;
  return true;
}

// ---------------------------------------------------------------- complexes

SquareCheck verify_square_zero(const ChainComplex& c) {
  SquareCheck out;
  IntMatrix sq = c.differential * c.differential;
  std::optional<IntMatrix::Key> best;
  for (auto& [k, v] : sq.entries())
    if (!best || std::make_pair(k.second, k.first) < std::make_pair(best->second, best->first))
      best = k;
  if (best) {
    out.ok = false;
    out.witness = {c.generators[best->second].id, c.generators[best->first].id};
    out.value = sq.get(best->first, best->second);
  }
  return out;
}

std::vector<std::string> structural_issues(const ChainComplex& c) {
  std::vector<std::string> issues;
  if (c.differential.rows() != c.size() || c.differential.cols() != c.size()) {
    issues.push_back("differential shape does not match generator count");
    return issues;
  }
  for (auto& [k, v] : c.differential.entries()) {
    const auto& tgt = c.generators[k.first];
    const auto& src = c.generators[k.second];
    std::string where = "(" + src.id + " -> " + tgt.id + ")";
    if (c.mode.normalize(src.grading - 1) != c.mode.normalize(tgt.grading))
      issues.push_back("grading does not drop by one " + where);
    if (src.homotopy_class != tgt.homotopy_class)
      issues.push_back("homotopy class not preserved " + where);
    if (src.orbit != tgt.orbit && !(tgt.action < src.action))
      issues.push_back("action does not decrease " + where);
  }
  return issues;
}

namespace {

struct Blocks {
  // (class, grading) -> generator indices
  std::map<HomologyKey, std::vector<std::size_t>> members;
};

Blocks split_blocks(const ChainComplex& c) {
  Blocks b;
  for (std::size_t i = 0; i < c.size(); ++i)
    b.members[{c.generators[i].homotopy_class, c.mode.normalize(c.generators[i].grading)}]
        .push_back(i);
  for (auto& [k, v] : c.differential.entries()) {
    const auto& tgt = c.generators[k.first];
    const auto& src = c.generators[k.second];
    if (src.homotopy_class != tgt.homotopy_class ||
        c.mode.normalize(src.grading - 1) != c.mode.normalize(tgt.grading))
      throw InvalidComplex("differential entry " + src.id + " -> " + tgt.id +
                           " breaks the (class, grading) splitting");
  }
  return b;
}

template <class RankOf>
std::map<HomologyKey, HomologyGroup> assemble(const ChainComplex& c, const Blocks& b,
                                              RankOf&& factors_of) {
  // D_k : C_k -> C_{k-1}, keyed by the source block.
  std::vector<HomologyKey> keys;
  for (auto& [k, _] : b.members) keys.push_back(k);
  std::vector<std::vector<Int>> factors(keys.size());
  static const std::vector<std::size_t> none;
  parallel_for(keys.size(), [&](std::size_t i) {
    auto [cls, g] = keys[i];
    auto it = b.members.find({cls, c.mode.normalize(g - 1)});
    const auto& rows = it == b.members.end() ? none : it->second;
    factors[i] = factors_of(c.differential.select(rows, b.members.at(keys[i])));
  });
  std::map<HomologyKey, std::vector<Int>> by_key;
  for (std::size_t i = 0; i < keys.size(); ++i) by_key[keys[i]] = factors[i];

  std::map<HomologyKey, HomologyGroup> out;
  for (auto& [key, gens] : b.members) {
    auto [cls, g] = key;
    const auto& out_factors = by_key.at(key);
    auto up = by_key.find({cls, c.mode.normalize(g + 1)});
    HomologyGroup grp;
    std::size_t rank_up = up == by_key.end() ? 0 : up->second.size();
    grp.free_rank = gens.size() - out_factors.size() - rank_up;
    if (up != by_key.end())
      for (auto& f : up->second)
        if (f > 1) grp.torsion.push_back(f);
    out[key] = grp;
  }
  return out;
}

} // namespace

HomologyResult homology(const ChainComplex& c) {
  if (c.differential.rows() != c.size() || c.differential.cols() != c.size())
    throw InvalidComplex("differential shape does not match generator count");
  auto sq = verify_square_zero(c);
  if (!sq.ok) throw SquareNonzero(sq.witness->first, sq.witness->second, to_string(sq.value));
  Blocks b = split_blocks(c);
  HomologyResult h;
  h.mode = c.mode;
  h.groups = assemble(c, b, [](const IntMatrix& m) { return invariant_factors(m); });
  return h;
}

std::map<HomologyKey, std::size_t> rationalize(const HomologyResult& h) {
  std::map<HomologyKey, std::size_t> out;
  for (auto& [k, g] : h.groups) out[k] = g.free_rank;
  return out;
}

std::map<HomologyKey, std::size_t> rational_homology(const ChainComplex& c) {
  auto sq = verify_square_zero(c);
  if (!sq.ok) throw SquareNonzero(sq.witness->first, sq.witness->second, to_string(sq.value));
  Blocks b = split_blocks(c);
  auto groups = assemble(c, b, [](const IntMatrix& m) {
    // only the count matters here; ones stand in for the pivots
    return std::vector<Int>(rank_over_q(m), Int(1));
  });
  std::map<HomologyKey, std::size_t> out;
  for (auto& [k, g] : groups) out[k] = g.free_rank;
  return out;
}

} // namespace cascadeho
