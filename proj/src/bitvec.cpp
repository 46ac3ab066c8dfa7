#include "xchan/bitvec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace xchan::gf2 {

namespace {
constexpr int kWordBits = 64;

int word_count(int len) { return (len + kWordBits - 1) / kWordBits; }
}  // namespace

BitVec::BitVec(int len) : len_(len) {
  if (len < 0) throw std::domain_error("BitVec length must be nonnegative");
  w_.assign(word_count(len), 0);
}

BitVec BitVec::from_bits(std::initializer_list<int> bits) {
  BitVec v(static_cast<int>(bits.size()));
  int i = 1;
  for (int b : bits) v.set(i++, b != 0);
  return v;
}

BitVec BitVec::from_string(const std::string& s) {
  BitVec v(static_cast<int>(s.size()));
  for (int i = 0; i < static_cast<int>(s.size()); ++i)
    v.set(i + 1, s[static_cast<size_t>(i)] == '1');
  return v;
}

bool BitVec::get(int i) const {
  if (i < 1 || i > len_) throw std::out_of_range("BitVec index");
  return (w_[static_cast<size_t>(i - 1) >> 6] >> ((i - 1) & 63)) & 1u;
}

void BitVec::set(int i, bool value) {
  if (i < 1 || i > len_) throw std::out_of_range("BitVec index");
  std::uint64_t mask = std::uint64_t{1} << ((i - 1) & 63);
  if (value)
    w_[static_cast<size_t>(i - 1) >> 6] |= mask;
  else
    w_[static_cast<size_t>(i - 1) >> 6] &= ~mask;
}

bool BitVec::is_zero() const {
  for (std::uint64_t w : w_)
    if (w) return false;
  return true;
}

int BitVec::popcount() const {
  int n = 0;
  for (std::uint64_t w : w_) n += std::popcount(w);
  return n;
}

int BitVec::leading_index() const {
  for (size_t k = 0; k < w_.size(); ++k) {
    if (w_[k])
      return static_cast<int>(k) * kWordBits + std::countr_zero(w_[k]) + 1;
  }
  return kInfinity;
}

BitVec BitVec::prefix(int k) const {
  if (k < 0 || k > len_) throw std::out_of_range("BitVec prefix");
  BitVec out(k);
  for (size_t i = 0; i < out.w_.size(); ++i) out.w_[i] = w_[i];
  out.trim_tail();
  return out;
}

BitVec BitVec::embed_bottom(int n) const {
  if (n < len_) throw std::out_of_range("BitVec embed_bottom");
  BitVec out(n);
  int shift = n - len_;
  for (int i = 1; i <= len_; ++i)
    if (get(i)) out.set(i + shift, true);
  return out;
}

BitVec BitVec::shifted_down(int k) const {
  BitVec out(len_);
  if (k >= len_) return out;
  const int wshift = k >> 6;
  const int bshift = k & 63;
  const int nw = static_cast<int>(w_.size());
  for (int i = nw - 1; i >= wshift; --i) {
    std::uint64_t v = w_[static_cast<size_t>(i - wshift)] << bshift;
    if (bshift && i - wshift - 1 >= 0)
      v |= w_[static_cast<size_t>(i - wshift - 1)] >> (kWordBits - bshift);
    out.w_[static_cast<size_t>(i)] = v;
  }
  out.trim_tail();
  return out;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  if (len_ != other.len_) throw std::invalid_argument("BitVec xor length");
  for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= other.w_[i];
  return *this;
}

std::string BitVec::to_string() const {
  std::string s(static_cast<size_t>(len_), '0');
  for (int i = 1; i <= len_; ++i)
    if (get(i)) s[static_cast<size_t>(i - 1)] = '1';
  return s;
}

void BitVec::trim_tail() {
  if (len_ % kWordBits != 0 && !w_.empty())
    w_.back() &= (std::uint64_t{1} << (len_ % kWordBits)) - 1;
}

LowerToeplitzGF2 toeplitz_from_gain(double g, int n) {
  if (!(g > 1.0) || !(g <= 2.0))
    throw std::domain_error("gain must lie in (1,2]");
  if (n < 1) throw std::domain_error("matrix dimension must be positive");

  BitVec col(n);
  col.set(1, true);
  if (g == 2.0) {
    for (int i = 2; i <= n; ++i) col.set(i, true);
    return {n, col};
  }
  // frac = g-1 in (0,1); extract its fractional bits exactly from the
  // significand, never by repeated floating multiplication.
  double frac = g - 1.0;
  int ex = 0;
  double f = std::frexp(frac, &ex);  // frac = f * 2^ex, f in [0.5,1)
  auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
  for (int k = 1; k < n; ++k) {
    int bit_pos = 53 - ex - k;  // bit k of frac
    bool bit = bit_pos >= 0 && bit_pos <= 52 && ((m >> bit_pos) & 1u);
    col.set(k + 1, bit);
  }
  return {n, col};
}

BitVec matvec(const LowerToeplitzGF2& m, const BitVec& x) {
  if (x.len() != m.dim) throw std::invalid_argument("matvec dimension");
  BitVec y(m.dim);
  for (int i = 1; i <= m.dim; ++i)
    if (x.get(i)) y ^= m.first_column.shifted_down(i - 1);
  return y;
}

SolveResult solve_unique(const Gf2System& sys) {
  const int m = static_cast<int>(sys.columns.size());
  if (m > 64) throw std::domain_error("solve_unique supports up to 64 columns");
  for (const BitVec& c : sys.columns)
    if (c.len() != sys.rhs.len())
      throw std::invalid_argument("system column length mismatch");

  // Column elimination, tracking which original columns were folded into
  // each pivot.
  struct Pivot {
    int lead;
    BitVec vec;
    std::uint64_t combo;
  };
  std::vector<Pivot> pivots;
  pivots.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    BitVec v = sys.columns[static_cast<size_t>(j)];
    std::uint64_t combo = std::uint64_t{1} << j;
    for (const Pivot& p : pivots) {
      if (v.leading_index() == p.lead) {
        v ^= p.vec;
        combo ^= p.combo;
      }
    }
    if (v.is_zero()) return {SolveStatus::kNotUnique, BitVec(m)};
    pivots.push_back({v.leading_index(), std::move(v), combo});
    // keep pivots sorted by leading index so reduction is a single pass
    for (size_t k = pivots.size(); k > 1; --k) {
      if (pivots[k - 1].lead < pivots[k - 2].lead)
        std::swap(pivots[k - 1], pivots[k - 2]);
      else
        break;
    }
  }

  BitVec r = sys.rhs;
  std::uint64_t combo = 0;
  for (const Pivot& p : pivots) {
    if (r.leading_index() == p.lead) {
      r ^= p.vec;
      combo ^= p.combo;
    }
  }
  if (!r.is_zero()) return {SolveStatus::kNoSolution, BitVec(m)};

  BitVec coeffs(m);
  for (int j = 0; j < m; ++j)
    if ((combo >> j) & 1u) coeffs.set(j + 1, true);
  return {SolveStatus::kUnique, coeffs};
}

int rank(std::span<const BitVec> columns) {
  std::vector<BitVec> pivots;
  for (const BitVec& c : columns) {
    BitVec v = c;
    for (const BitVec& p : pivots)
      if (v.leading_index() == p.leading_index()) v ^= p;
    if (v.is_zero()) continue;
    pivots.push_back(std::move(v));
    for (size_t k = pivots.size(); k > 1; --k) {
      if (pivots[k - 1].leading_index() < pivots[k - 2].leading_index())
        std::swap(pivots[k - 1], pivots[k - 2]);
      else
        break;
    }
  }
  return static_cast<int>(pivots.size());
}

}  // namespace xchan::gf2
