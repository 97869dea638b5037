#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cascadeho {

using Int = mpz_class;
using Rat = mpq_class;

std::string to_string(const Int& v);
std::string to_string(const Rat& v);
Rat parse_rational(const std::string& text); // throws std::invalid_argument

class IntMatrix {
public:
  using Key = std::pair<std::size_t, std::size_t>;

  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_dense(const std::vector<std::vector<Int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Int& v);
  void add(std::size_t r, std::size_t c, const Int& v);

  const std::map<Key, Int>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  std::vector<std::vector<Int>> dense() const;
  IntMatrix transpose() const;
  IntMatrix select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const;
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::map<Key, Int> entries_;
};

class RatMatrix {
public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  static RatMatrix from(const IntMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix operator+(const RatMatrix& o) const;
  RatMatrix operator-(const RatMatrix& o) const;
  bool operator==(const RatMatrix& o) const;
  bool is_zero() const;
  std::size_t rank() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> data_;
};

Int determinant(const IntMatrix& m); // square only
std::size_t rank_over_q(const IntMatrix& m);

struct SmithForm {
  IntMatrix u, s, v; // u * m * v == s
};

SmithForm smith_normal_form(const IntMatrix& m);
// Nonzero diagonal of the Smith form, in divisibility order.
std::vector<Int> invariant_factors(const IntMatrix& m);

// Grading conventions: integers, integers mod an even N, or bare parity.
struct GradingMode {
  enum class Kind { Integer, Modular, Parity };
  Kind kind = Kind::Integer;
  long modulus = 0; // N for Modular, 2 for Parity, 0 for Integer

  static GradingMode integer() { return {}; }
  static GradingMode modular(long n) { return {Kind::Modular, n}; }
  static GradingMode parity() { return {Kind::Parity, 2}; }

  long normalize(long g) const;
  bool operator==(const GradingMode& o) const { return kind == o.kind && modulus == o.modulus; }
  std::string label(long g) const;
};

struct ChainGenerator {
  std::string id;
  long grading = 0;
  std::string homotopy_class;
  Rat action = 1;
  std::string orbit; // orbits sharing a name may map to each other at equal action
};

struct ChainComplex {
  GradingMode mode;
  std::vector<ChainGenerator> generators;
  IntMatrix differential; // column = source, row = target

  std::size_t size() const { return generators.size(); }
  std::optional<std::size_t> index_of(const std::string& id) const;
};

struct HomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;
  bool stable = true;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool same_group(const HomologyGroup& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  std::string describe() const; // e.g. "Z^2 + Z/2"
};

using HomologyKey = std::pair<std::string, long>; // (homotopy class, grading)

struct HomologyResult {
  GradingMode mode;
  std::map<HomologyKey, HomologyGroup> groups;
  std::optional<long> stable_range;

  HomologyGroup at(const std::string& cls, long grading) const;
  // Equality of the nonzero groups only.
  bool same_groups(const HomologyResult& o) const;
};

struct SquareCheck {
  bool ok = true;
  std::optional<std::pair<std::string, std::string>> witness;
  Int value;
};

SquareCheck verify_square_zero(const ChainComplex& c);

// Structural problems: grading drop, class preservation, action decrease.
std::vector<std::string> structural_issues(const ChainComplex& c);

HomologyResult homology(const ChainComplex& c); // throws SquareNonzero, InvalidComplex
std::map<HomologyKey, std::size_t> rationalize(const HomologyResult& h);
// Rational Betti numbers straight from ranks, without any Smith form.
std::map<HomologyKey, std::size_t> rational_homology(const ChainComplex& c);

} // namespace cascadeho
