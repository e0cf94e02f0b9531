#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sparsegf2 {

// Fixed-length bit vector packed 64 bits per word.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}
  static BitVector from_indices(std::size_t nbits, const std::vector<std::uint32_t>& idx);
  static BitVector from_string(const std::string& bits);  // "0110..."

  std::size_t size() const { return nbits_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  void set(std::size_t i) { words_[i >> 6] |= 1ULL << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  BitVector& operator^=(const BitVector& o);
  bool operator==(const BitVector& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }

  std::size_t popcount() const;
  bool none() const;
  // Index of the lowest set bit, or size() if none.
  std::size_t lowest() const;
  std::vector<std::uint32_t> indices() const;
  std::string to_string() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// m x n matrix over GF(2), stored by rows. Zero rows are rejected.
class GF2Matrix {
 public:
  explicit GF2Matrix(std::size_t n_cols = 0) : n_cols_(n_cols) {}

  void add_row(BitVector row);
  void add_row_indices(const std::vector<std::uint32_t>& idx);

  std::size_t n_cols() const { return n_cols_; }
  std::size_t n_rows() const { return rows_.size(); }
  const BitVector& row(std::size_t i) const { return rows_[i]; }
  const std::vector<BitVector>& rows() const { return rows_; }
  std::size_t row_weight(std::size_t i) const { return row_weights_[i]; }
  std::size_t total_units() const;

  bool operator==(const GF2Matrix& o) const { return n_cols_ == o.n_cols_ && rows_ == o.rows_; }

 private:
  std::size_t n_cols_;
  std::vector<BitVector> rows_;
  std::vector<std::size_t> row_weights_;
};

// Incremental row basis over GF(2). The basis is kept fully reduced: every
// pivot column (lowest set bit of its row) is zero in all other basis rows.
class RankState {
 public:
  explicit RankState(std::size_t n_cols);

  // Returns true when the row lies in the span of the rows seen so far.
  bool absorb(const BitVector& row);
  bool absorb_indices(const std::vector<std::uint32_t>& idx);

  std::size_t n_cols() const { return n_cols_; }
  std::size_t rank() const { return basis_.size(); }
  std::size_t m_seen() const { return m_seen_; }
  std::size_t corank() const { return m_seen_ - basis_.size(); }
  const std::vector<BitVector>& basis() const { return basis_; }
  const std::vector<std::uint32_t>& pivots() const { return pivots_; }

 private:
  bool absorb_reduced(BitVector v);

  std::size_t n_cols_;
  std::vector<BitVector> basis_;
  std::vector<std::uint32_t> pivots_;
  std::vector<std::int32_t> row_of_pivot_;
  BitVector pivot_mask_;
  std::size_t m_seen_ = 0;
};

// m - rank; the number of null vectors is 2^corank.
std::size_t corank(const GF2Matrix& matrix);

struct NullSpace {
  std::vector<std::uint32_t> vectors;     // bit i set = row i in the combination
  std::vector<std::uint64_t> weight_profile;  // index l: count with l rows
};

// All a with aM = 0 (including 0). Requires n_rows <= max_m <= 24.
NullSpace enumerate_null_vectors(const GF2Matrix& matrix, std::size_t max_m = 24);

// True iff every column sum is even.
bool is_one_null(const GF2Matrix& matrix);

enum class MatrixFormat { sparse, dense };

// Sparse: header "# gf2 sparse n=<cols> m=<rows>" then one line per row with
// the 0-based column indices of its units. Dense: one 0/1 string per row.
void write_matrix(std::ostream& os, const GF2Matrix& matrix, MatrixFormat format);
GF2Matrix read_matrix(std::istream& is, MatrixFormat format);

}  // namespace sparsegf2
