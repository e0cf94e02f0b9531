#include "sparsegf2/gf2.hpp"

#include <bit>
#include <istream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "sparsegf2/errors.hpp"

namespace sparsegf2 {

BitVector BitVector::from_indices(std::size_t nbits, const std::vector<std::uint32_t>& idx) {
  BitVector v(nbits);
  for (auto i : idx) {
    if (i >= nbits) throw DimensionMismatch("column index " + std::to_string(i) + " out of range");
    v.flip(i);
  }
  return v;
}

BitVector BitVector::from_string(const std::string& bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i);
    else if (bits[i] != '0')
      throw ParseError("dense row may only contain 0 and 1");
  }
  return v;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  if (o.nbits_ != nbits_) throw DimensionMismatch("bit vector lengths differ");
  std::uint64_t* a = words_.data();
  const std::uint64_t* b = o.words_.data();
  const std::size_t nw = words_.size();
  for (std::size_t w = 0; w < nw; ++w) a[w] ^= b[w];
  return *this;
}

std::size_t BitVector::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::none() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::size_t BitVector::lowest() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  return nbits_;
}

std::vector<std::uint32_t> BitVector::indices() const {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t x = words_[w];
    while (x) {
      out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

std::string BitVector::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i)
    if (test(i)) s[i] = '1';
  return s;
}

void GF2Matrix::add_row(BitVector row) {
  if (row.size() != n_cols_) throw DimensionMismatch("row length does not match column count");
  std::size_t w = row.popcount();
  if (w == 0) throw InvalidParam("zero rows are not allowed in a GF2Matrix");
  rows_.push_back(std::move(row));
  row_weights_.push_back(w);
}

void GF2Matrix::add_row_indices(const std::vector<std::uint32_t>& idx) {
  add_row(BitVector::from_indices(n_cols_, idx));
}

std::size_t GF2Matrix::total_units() const {
  std::size_t t = 0;
  for (auto w : row_weights_) t += w;
  return t;
}

RankState::RankState(std::size_t n_cols)
    : n_cols_(n_cols), row_of_pivot_(n_cols, -1), pivot_mask_(n_cols) {}

bool RankState::absorb(const BitVector& row) {
  if (row.size() != n_cols_) throw DimensionMismatch("row length does not match column count");
  return absorb_reduced(row);
}

bool RankState::absorb_indices(const std::vector<std::uint32_t>& idx) {
  return absorb_reduced(BitVector::from_indices(n_cols_, idx));
}

bool RankState::absorb_reduced(BitVector v) {
  ++m_seen_;
  // Each basis row holds exactly one pivot column, so clearing the pivots
  // present in v takes one XOR per pivot and never creates new ones.
  const auto& vw = v.words();
  const auto& pm = pivot_mask_.words();
  std::vector<std::uint32_t> hits;
  for (std::size_t w = 0; w < vw.size(); ++w) {
    std::uint64_t x = vw[w] & pm[w];
    while (x) {
      hits.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(x)));
      x &= x - 1;
    }
  }
  for (auto p : hits) v ^= basis_[static_cast<std::size_t>(row_of_pivot_[p])];
  const std::size_t q = v.lowest();
  if (q == n_cols_) return true;
  for (auto& b : basis_)
    if (b.test(q)) b ^= v;
  row_of_pivot_[q] = static_cast<std::int32_t>(basis_.size());
  pivots_.push_back(static_cast<std::uint32_t>(q));
  pivot_mask_.set(q);
  basis_.push_back(std::move(v));
  return false;
}

std::size_t corank(const GF2Matrix& matrix) {
  RankState st(matrix.n_cols());
  for (const auto& r : matrix.rows()) st.absorb(r);
  return st.corank();
}

NullSpace enumerate_null_vectors(const GF2Matrix& matrix, std::size_t max_m) {
  const std::size_t m = matrix.n_rows();
  if (max_m > 24) throw TooLarge("null-vector enumeration is limited to 24 rows");
  if (m > max_m) throw TooLarge("matrix has " + std::to_string(m) + " rows, enumeration limit is " +
                                std::to_string(max_m));
  NullSpace out;
  out.weight_profile.assign(m + 1, 0);
  BitVector acc(matrix.n_cols());
  std::uint32_t code = 0;
  out.vectors.push_back(0);
  out.weight_profile[0] = 1;
  const std::uint64_t total = 1ULL << m;
  // Gray-code walk: step i flips row ctz(i).
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    acc ^= matrix.row(bit);
    code ^= 1U << bit;
    if (acc.none()) {
      out.vectors.push_back(code);
      ++out.weight_profile[static_cast<std::size_t>(std::popcount(code))];
    }
  }
  return out;
}

bool is_one_null(const GF2Matrix& matrix) {
  BitVector acc(matrix.n_cols());
  for (const auto& r : matrix.rows()) acc ^= r;
  return acc.none();
}

void write_matrix(std::ostream& os, const GF2Matrix& matrix, MatrixFormat format) {
  if (format == MatrixFormat::dense) {
    for (const auto& r : matrix.rows()) os << r.to_string() << '\n';
    return;
  }
  os << "# gf2 sparse n=" << matrix.n_cols() << " m=" << matrix.n_rows() << '\n';
  for (const auto& r : matrix.rows()) {
    auto idx = r.indices();
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
    os << '\n';
  }
}

GF2Matrix read_matrix(std::istream& is, MatrixFormat format) {
  std::string line;
  if (format == MatrixFormat::dense) {
    std::vector<BitVector> rows;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      rows.push_back(BitVector::from_string(line));
      if (rows.back().size() != rows.front().size())
        throw ParseError("dense rows have different lengths");
    }
    GF2Matrix out(rows.empty() ? 0 : rows.front().size());
    for (auto& r : rows) out.add_row(std::move(r));
    return out;
  }
  static const std::regex header(R"(#\s*gf2\s+sparse\s+n=(\d+)(\s+m=(\d+))?\s*)");
  std::smatch match;
  if (!std::getline(is, line) || !std::regex_match(line, match, header))
    throw ParseError("sparse matrix must start with '# gf2 sparse n=<cols> m=<rows>'");
  const std::size_t n = std::stoul(match[1].str());
  // match points into `line`, which the loop below overwrites
  const std::optional<std::size_t> m_declared =
      match[3].matched ? std::optional<std::size_t>(std::stoul(match[3].str())) : std::nullopt;
  GF2Matrix out(n);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::uint32_t> idx;
    long v;
    while (ls >> v) {
      if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw ParseError("column index " + std::to_string(v) + " out of range");
      idx.push_back(static_cast<std::uint32_t>(v));
    }
    if (!ls.eof()) throw ParseError("non-integer token in sparse row '" + line + "'");
    out.add_row_indices(idx);
  }
  if (m_declared && *m_declared != out.n_rows())
    throw ParseError("row count does not match header");
  return out;
}

}  // namespace sparsegf2
