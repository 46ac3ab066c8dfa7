#ifndef XCHAN_BITVEC_HPP
#define XCHAN_BITVEC_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace xchan::gf2 {

// Index of the leading one for the all-zero vector.
inline constexpr int kInfinity = std::numeric_limits<int>::max();

// Binary column vector over GF(2), word-packed. Index 1 is the
// most-significant bit level, matching the top of the received signal.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int len);
  static BitVec from_bits(std::initializer_list<int> bits);
  static BitVec from_string(const std::string& s);  // e.g. "1010"

  int len() const { return len_; }
  bool get(int i) const;        // 1-based
  void set(int i, bool value);  // 1-based
  bool is_zero() const;
  int popcount() const;

  // Smallest i with bit i set; kInfinity for the zero vector.
  int leading_index() const;

  // First k levels as a vector of length k (k <= len).
  BitVec prefix(int k) const;

  // This vector placed at the bottom of a length-n vector,
  // zero-padded on top (n >= len).
  BitVec embed_bottom(int n) const;

  // Bits moved k levels down within the same length; bits shifted
  // past the end are dropped.
  BitVec shifted_down(int k) const;

  BitVec& operator^=(const BitVec& other);
  friend BitVec operator^(BitVec a, const BitVec& b) {
    a ^= b;
    return a;
  }
  friend bool operator==(const BitVec&, const BitVec&) = default;

  std::string to_string() const;

 private:
  void trim_tail();

  int len_ = 0;
  std::vector<std::uint64_t> w_;
};

inline int leading_index(const BitVec& x) { return x.leading_index(); }

// Lower-triangular binary Toeplitz matrix with unit diagonal, defined by
// its first column (the leading bits of a channel gain's binary
// expansion). Entry (i,j) = first_column[i-j+1] for i >= j.
struct LowerToeplitzGF2 {
  int dim = 0;
  BitVec first_column;
};

// Builds the matrix for a gain g in (1,2]. Bit k of the first column is
// the k-th fractional binary digit of g; dyadic gains use the terminating
// expansion, and g = 2 maps to the all-ones column so the unit diagonal
// is preserved. Bits are extracted by exact scaled-integer arithmetic.
LowerToeplitzGF2 toeplitz_from_gain(double g, int n);

// y = M x over GF(2). Requires x.len() == M.dim.
BitVec matvec(const LowerToeplitzGF2& m, const BitVec& x);

struct Gf2System {
  std::vector<BitVec> columns;  // all of rhs's length
  BitVec rhs;
};

enum class SolveStatus { kUnique, kNotUnique, kNoSolution };

struct SolveResult {
  SolveStatus status = SolveStatus::kNoSolution;
  BitVec coeffs;  // length = column count; valid when status is kUnique
};

// Solves sum_k c_k col_k = rhs. kNotUnique when the columns are linearly
// dependent, kNoSolution when independent but inconsistent. At most 64
// columns.
SolveResult solve_unique(const Gf2System& sys);

// GF(2) rank by column elimination.
int rank(std::span<const BitVec> columns);

}  // namespace xchan::gf2

#endif  // XCHAN_BITVEC_HPP
