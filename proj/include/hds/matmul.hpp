#pragma once

// Binary matrix multiplication via sliding match counts.
//
// Rows of A become pattern segments: 0 -> x, 1 -> its 1-indexed column
// number. Columns of B become text segments: 0 -> y, 1 -> its 1-indexed row
// number, with a separator after every column and (m-1)*l separators padding
// both ends. Then the match count at alignment offset(i, j) equals
// (A*B)[i][j]: x matches nothing in the text, y and the separator match
// nothing in the pattern, and column number k+1 meets row number k+1 exactly
// when the segments face each other with zero internal shift.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hds/mismatch.hpp"
#include "hds/symbol_string.hpp"

namespace hds {

struct BinaryMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> data;  // row-major, entries in {0, 1}

  BinaryMatrix() = default;
  BinaryMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), data(r * c, 0) {}

  std::uint8_t at(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  void set(std::size_t i, std::size_t j, std::uint8_t v) {
    if (v > 1) throw std::invalid_argument("binary matrix entry must be 0/1");
    data[i * cols + j] = v;
  }
};

struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint32_t> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::uint32_t at(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  std::uint32_t& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

struct ReductionLayout {
  std::size_t inner = 0;        // l: A's columns == B's rows
  std::size_t pattern_rows = 0; // m
  std::size_t text_cols = 0;    // B's columns
  std::uint32_t x_symbol = 0, y_symbol = 0, separator = 0;
  std::size_t head_pad = 0, tail_pad = 0;
  AlphabetSpec alphabet;

  // Alignment at which pattern row i faces text column j.
  std::size_t offset(std::size_t i, std::size_t j) const {
    return head_pad + j * (inner + 1) - i * inner;
  }
};

namespace detail {

inline AlphabetSpec reduction_alphabet(std::size_t inner) {
  // Symbols 1..l plus x, y and the separator.
  std::uint32_t delta = 1;
  while ((std::uint64_t{1} << delta) < inner + 4) ++delta;
  return make_alphabet(delta);
}

}  // namespace detail

inline ReductionLayout make_reduction_layout(std::size_t pattern_rows,
                                             std::size_t inner,
                                             std::size_t text_cols) {
  if (inner == 0 || pattern_rows == 0 || text_cols == 0)
    throw std::invalid_argument("reduction: empty matrix dimension");
  ReductionLayout layout;
  layout.inner = inner;
  layout.pattern_rows = pattern_rows;
  layout.text_cols = text_cols;
  layout.x_symbol = static_cast<std::uint32_t>(inner + 1);
  layout.y_symbol = static_cast<std::uint32_t>(inner + 2);
  layout.separator = static_cast<std::uint32_t>(inner + 3);
  layout.head_pad = (pattern_rows - 1) * inner;
  layout.tail_pad = (pattern_rows - 1) * inner;
  layout.alphabet = detail::reduction_alphabet(inner);
  return layout;
}

inline SymbolString encode_pattern(const BinaryMatrix& a) {
  const ReductionLayout layout = make_reduction_layout(a.rows, a.cols, 1);
  std::vector<std::uint32_t> symbols;
  symbols.reserve(a.rows * a.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k)
      symbols.push_back(a.at(i, k) ? static_cast<std::uint32_t>(k + 1)
                                   : layout.x_symbol);
  return SymbolString(layout.alphabet, std::move(symbols));
}

// pattern_rows fixes the padding; the reduction is pairwise and the text
// must leave room for every row/column alignment of that pattern.
inline SymbolString encode_text(const BinaryMatrix& b,
                                std::size_t pattern_rows,
                                ReductionLayout* layout_out = nullptr) {
  const ReductionLayout layout =
      make_reduction_layout(pattern_rows, b.rows, b.cols);
  std::vector<std::uint32_t> symbols;
  symbols.reserve(layout.head_pad + b.cols * (b.rows + 1) + layout.tail_pad);
  symbols.insert(symbols.end(), layout.head_pad, layout.separator);
  for (std::size_t j = 0; j < b.cols; ++j) {
    for (std::size_t k = 0; k < b.rows; ++k)
      symbols.push_back(b.at(k, j) ? static_cast<std::uint32_t>(k + 1)
                                   : layout.y_symbol);
    symbols.push_back(layout.separator);
  }
  symbols.insert(symbols.end(), layout.tail_pad, layout.separator);
  if (layout_out) *layout_out = layout;
  return SymbolString(layout.alphabet, std::move(symbols));
}

struct ReductionRun {
  IntMatrix product;
  CountArray match_counts;
  ReductionLayout layout;
};

// Distinct (i, j) pairs share an alignment only when (j-j')(l+1) = (i-i')l
// has a nonzero solution in range, i.e. when both m >= l+2 and cols >= l+1.
inline void check_collision_free(std::size_t m, std::size_t inner,
                                 std::size_t cols) {
  if (m >= inner + 2 && cols >= inner + 1)
    throw std::invalid_argument(
        "reduction rejected: with m >= l+2 and text columns >= l+1, distinct "
        "row/column pairs would share an alignment and the product could not "
        "be read off the match counts");
}

inline ReductionRun multiply_via_matching_full(const BinaryMatrix& a,
                                               const BinaryMatrix& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("reduction: inner dimensions disagree");
  check_collision_free(a.rows, a.cols, b.cols);

  ReductionRun run;
  const SymbolString pattern = encode_pattern(a);
  const SymbolString text = encode_text(b, a.rows, &run.layout);
  run.match_counts = match_count_array(pattern, text);

  run.product = IntMatrix(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j)
      run.product.at(i, j) = run.match_counts[run.layout.offset(i, j)];
  return run;
}

inline IntMatrix multiply_via_matching(const BinaryMatrix& a,
                                       const BinaryMatrix& b) {
  return multiply_via_matching_full(a, b).product;
}

// Definitional product, kept here as the reduction's reference.
inline IntMatrix multiply_direct(const BinaryMatrix& a, const BinaryMatrix& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("multiply: inner dimensions disagree");
  IntMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k)
      if (a.at(i, k))
        for (std::size_t j = 0; j < b.cols; ++j)
          c.at(i, j) += b.at(k, j);
  return c;
}

}  // namespace hds
