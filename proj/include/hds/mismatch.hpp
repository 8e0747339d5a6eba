#pragma once

// Exact offline mismatch/match counting at all alignments.
//
// sliding_mismatch_counts is the definitional window loop.
// sliding_mismatch_counts_fast splits pattern symbols by frequency:
// frequent symbols are counted with an exact integer cross-correlation of
// 0/1 indicator sequences, rare symbols with per-occurrence position lists.
// Both produce identical output for every input.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hds/symbol_string.hpp"

namespace hds {

inline std::uint32_t hamming_distance(const SymbolString& a,
                                      const SymbolString& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_distance: length mismatch");
  if (a.alphabet() != b.alphabet())
    throw std::invalid_argument("hamming_distance: alphabet mismatch");
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += (a[i] != b[i]);
  return count;
}

namespace detail {

inline void check_sliding_pre(const SymbolString& pattern,
                              const SymbolString& text) {
  if (pattern.alphabet() != text.alphabet())
    throw std::invalid_argument("sliding counts: alphabet mismatch");
  if (text.size() < pattern.size())
    throw std::invalid_argument("sliding counts: text shorter than pattern");
}

inline void fft(std::vector<std::complex<double>>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / static_cast<double>(len) *
                       (invert ? -1.0 : 1.0);
    const std::complex<double> step(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
  if (invert) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

// counts[i] = sum_j pat[j] * text[i + j], for i in [0, |text| - |pat| + 1).
// Returns false when the rounding residual of the transform is too large to
// guarantee exact integers; callers then fall back to the quadratic path.
inline bool correlate_indicators(const std::vector<std::uint8_t>& pat,
                                 const std::vector<std::uint8_t>& text,
                                 std::vector<std::uint64_t>& counts) {
  const std::size_t m = pat.size();
  const std::size_t t = text.size();
  const std::size_t alignments = t - m + 1;

  std::size_t size = 1;
  while (size < t + m) size <<= 1;

  std::vector<std::complex<double>> fa(size), fb(size);
  for (std::size_t i = 0; i < t; ++i) fa[i] = static_cast<double>(text[i]);
  for (std::size_t j = 0; j < m; ++j)
    fb[m - 1 - j] = static_cast<double>(pat[j]);  // reversed: correlation

  fft(fa, false);
  fft(fb, false);
  for (std::size_t i = 0; i < size; ++i) fa[i] *= fb[i];
  fft(fa, true);

  counts.assign(alignments, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < alignments; ++i) {
    const double re = fa[i + m - 1].real();
    const double rounded = std::round(re);
    worst = std::max(worst, std::abs(re - rounded));
    counts[i] = static_cast<std::uint64_t>(rounded < 0.0 ? 0.0 : rounded);
  }
  return worst < 0.25;
}

}  // namespace detail

inline CountArray sliding_mismatch_counts(const SymbolString& pattern,
                                          const SymbolString& text) {
  detail::check_sliding_pre(pattern, text);
  const std::size_t m = pattern.size();
  const std::size_t alignments = text.size() - m + 1;
  CountArray result(alignments, 0);
  for (std::size_t i = 0; i < alignments; ++i) {
    std::uint32_t count = 0;
    for (std::size_t j = 0; j < m; ++j) count += (pattern[j] != text[i + j]);
    result[i] = count;
  }
  return result;
}

inline CountArray sliding_mismatch_counts_fast(const SymbolString& pattern,
                                               const SymbolString& text) {
  detail::check_sliding_pre(pattern, text);
  const std::size_t m = pattern.size();
  const std::size_t t = text.size();
  const std::size_t alignments = t - m + 1;
  if (m == 0) return CountArray(alignments, 0);

  // Occurrence positions per symbol.
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> pat_pos;
  for (std::size_t j = 0; j < m; ++j)
    pat_pos[pattern[j]].push_back(static_cast<std::uint32_t>(j));

  const std::size_t threshold = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(m))));

  std::vector<std::uint64_t> matches(alignments, 0);
  std::vector<std::uint8_t> pat_ind(m), text_ind(t);
  std::vector<std::uint64_t> corr;

  for (const auto& [symbol, positions] : pat_pos) {
    if (positions.size() >= threshold) {
      std::fill(pat_ind.begin(), pat_ind.end(), std::uint8_t{0});
      for (std::uint32_t p : positions) pat_ind[p] = 1;
      for (std::size_t i = 0; i < t; ++i) text_ind[i] = (text[i] == symbol);
      if (detail::correlate_indicators(pat_ind, text_ind, corr)) {
        for (std::size_t i = 0; i < alignments; ++i) matches[i] += corr[i];
        continue;
      }
      // Transform residual too large for guaranteed exactness; this symbol
      // is recounted with the exact integer path below.
    }
    for (std::size_t q = 0; q < t; ++q) {
      if (text[q] != symbol) continue;
      for (std::uint32_t p : positions) {
        if (q >= p && q - p < alignments) matches[q - p] += 1;
      }
    }
  }

  CountArray result(alignments, 0);
  for (std::size_t i = 0; i < alignments; ++i)
    result[i] = static_cast<std::uint32_t>(m - matches[i]);
  return result;
}

// Per-alignment Hamming distances of s1 against every |s1|-length window of
// s2, where |s2| = 2|s1|; the result has |s1| + 1 entries.
inline CountArray ham_array(const SymbolString& s1, const SymbolString& s2) {
  if (s2.size() != 2 * s1.size())
    throw std::invalid_argument("ham_array: |s2| must equal 2|s1|");
  return sliding_mismatch_counts(s1, s2);
}

inline CountArray match_count_array(const SymbolString& pattern,
                                    const SymbolString& text) {
  CountArray result = sliding_mismatch_counts_fast(pattern, text);
  const auto m = static_cast<std::uint32_t>(pattern.size());
  for (auto& v : result) v = m - v;
  return result;
}

}  // namespace hds
