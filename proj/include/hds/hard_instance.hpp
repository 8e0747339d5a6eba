#pragma once

// Hard-instance construction and decoding.
//
// A multiset V of mu^2 random binary vectors of length mu is encoded as a
// base string of length r = mu^3: vector v_i becomes the two-symbol block
// rho_i over {star, i}, and the blocks are concatenated. The fixed string
// places a copy of the base string at every position that is a power of two
// from the end, with a filler symbol elsewhere. Update blocks of length 2r
// are built from choice schedules: each round writes the symbol i directly
// to the right of rho_i at the round's slide offset, so the match counts
// over the round's mu alignments equal the round's vector sum in reverse
// order. A dictionary of blocks with pairwise-distinct Hamming arrays makes
// blocks uniquely recoverable from output windows.
//
// Reserved symbol values, all inside one delta-bit alphabet:
//   star         = mu^2      (encodes 0-bits inside base-string blocks)
//   block filler = mu^2 + 1  (background symbol of update blocks)
//   fixed filler = 2^delta-1 (background symbol of the fixed string; does
//                             not occur in updates)
// with delta = ceil(log2(r + 2)).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hds/mismatch.hpp"
#include "hds/rng.hpp"
#include "hds/symbol_string.hpp"

namespace hds {

struct VectorMultiset {
  std::uint32_t mu = 0;
  std::vector<std::vector<std::uint8_t>> vectors;  // mu^2 vectors in {0,1}^mu
};

inline std::uint32_t star_symbol(std::uint32_t mu) { return mu * mu; }
inline std::uint32_t block_filler_symbol(std::uint32_t mu) {
  return mu * mu + 1;
}

inline std::uint32_t base_length(std::uint32_t mu) { return mu * mu * mu; }

inline AlphabetSpec alphabet_for_mu(std::uint32_t mu) {
  const std::uint32_t r = base_length(mu);
  return make_alphabet(static_cast<std::uint32_t>(std::bit_width(
      std::bit_ceil(static_cast<std::uint64_t>(r) + 2) - 1)));
}

inline std::uint32_t fixed_filler_symbol(std::uint32_t mu) {
  return static_cast<std::uint32_t>(alphabet_for_mu(mu).size() - 1);
}

inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// ---- vectors -------------------------------------------------------------

inline VectorMultiset sample_vectors(std::uint32_t mu, std::uint64_t seed) {
  if (mu < 2) throw std::invalid_argument("sample_vectors: mu must be >= 2");
  Rng rng(seed);
  VectorMultiset v;
  v.mu = mu;
  v.vectors.resize(static_cast<std::size_t>(mu) * mu);
  for (auto& vec : v.vectors) {
    vec.resize(mu);
    for (auto& bit : vec) bit = rng.next_bit() ? 1 : 0;
  }
  return v;
}

// Element-wise integer sum of mu distinct elements of the multiset.
inline std::vector<std::uint32_t> vsum(const VectorMultiset& v,
                                       const std::vector<std::uint32_t>& indices) {
  if (indices.size() != v.mu)
    throw std::invalid_argument("vsum: exactly mu element positions required");
  std::set<std::uint32_t> seen(indices.begin(), indices.end());
  if (seen.size() != indices.size())
    throw std::invalid_argument("vsum: element positions must be distinct");
  std::vector<std::uint32_t> sum(v.mu, 0);
  for (std::uint32_t idx : indices) {
    if (idx >= v.vectors.size())
      throw std::invalid_argument("vsum: element position out of range");
    for (std::uint32_t k = 0; k < v.mu; ++k) sum[k] += v.vectors[idx][k];
  }
  return sum;
}

struct VsumCount {
  std::uint64_t count = 0;
  bool exact = true;  // false: sampled lower bound, enumeration exceeded cap
};

// Number of distinct vector sums over mu-element distinct picks from the
// masked multiset. Exhaustive when the number of combinations fits the cap,
// otherwise a seeded sampled lower bound.
inline VsumCount count_distinct_vsums(const VectorMultiset& v,
                                      const std::vector<bool>& mask,
                                      std::uint64_t cap,
                                      std::uint64_t seed = 0) {
  if (cap == 0)
    throw std::invalid_argument("count_distinct_vsums: cap must be positive");
  if (mask.size() != v.vectors.size())
    throw std::invalid_argument("count_distinct_vsums: mask size mismatch");

  std::vector<std::uint32_t> allowed;
  for (std::uint32_t i = 0; i < mask.size(); ++i)
    if (mask[i]) allowed.push_back(i);
  if (allowed.size() < v.mu) return VsumCount{0, true};

  // Combination count with saturation at cap+1.
  std::uint64_t combos = 1;
  for (std::uint32_t i = 0; i < v.mu; ++i) {
    combos = combos * (allowed.size() - i) / (i + 1);
    if (combos > cap) break;
  }

  std::set<std::vector<std::uint32_t>> sums;
  std::vector<std::uint32_t> pick(v.mu);
  if (combos <= cap) {
    // Lexicographic enumeration over positions of `allowed`.
    std::vector<std::uint32_t> c(v.mu);
    std::iota(c.begin(), c.end(), 0u);
    for (;;) {
      for (std::uint32_t i = 0; i < v.mu; ++i) pick[i] = allowed[c[i]];
      sums.insert(vsum(v, pick));
      std::int64_t i = static_cast<std::int64_t>(v.mu) - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] ==
                           allowed.size() - v.mu + static_cast<std::uint32_t>(i))
        --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (auto k = static_cast<std::size_t>(i) + 1; k < v.mu; ++k)
        c[k] = c[k - 1] + 1;
    }
    return VsumCount{sums.size(), true};
  }

  Rng rng(seed);
  for (std::uint64_t trial = 0; trial < cap; ++trial) {
    // Partial Fisher-Yates over a copy of the allowed positions.
    std::vector<std::uint32_t> pool = allowed;
    for (std::uint32_t i = 0; i < v.mu; ++i) {
      const auto j = i + static_cast<std::uint32_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      pick[i] = pool[i];
    }
    sums.insert(vsum(v, pick));
  }
  return VsumCount{sums.size(), false};
}

// ---- base string -----------------------------------------------------------

// Block rho_i: 1-bits become the symbol i, 0-bits become star.
inline SymbolString encode_rho(const std::vector<std::uint8_t>& vec,
                               std::uint32_t index, std::uint32_t mu) {
  if (vec.size() != mu)
    throw std::invalid_argument("encode_rho: vector length must equal mu");
  if (index >= mu * mu)
    throw std::invalid_argument("encode_rho: index must be below mu^2");
  std::vector<std::uint32_t> symbols(mu);
  for (std::uint32_t k = 0; k < mu; ++k)
    symbols[k] = vec[k] ? index : star_symbol(mu);
  return SymbolString(alphabet_for_mu(mu), std::move(symbols));
}

inline SymbolString build_base_string(const VectorMultiset& v) {
  const AlphabetSpec alphabet = alphabet_for_mu(v.mu);
  std::vector<std::uint32_t> symbols;
  symbols.reserve(base_length(v.mu));
  for (std::uint32_t i = 0; i < v.vectors.size(); ++i) {
    const SymbolString rho = encode_rho(v.vectors[i], i, v.mu);
    symbols.insert(symbols.end(), rho.symbols().begin(), rho.symbols().end());
  }
  return SymbolString(alphabet, std::move(symbols));
}

// Positions {n - 2^j : base_len < 2^j <= n} where copies of the base string
// start, descending position order.
inline std::vector<std::uint64_t> copy_positions(std::uint64_t n,
                                                 std::uint64_t base_len) {
  std::vector<std::uint64_t> positions;
  for (std::uint64_t p = 1; p <= n; p <<= 1)
    if (p > base_len) positions.push_back(n - p);
  return positions;
}

// Fixed string: filler everywhere, a copy of `base` at each power-of-two
// suffix longer than |base|. Copies cannot overlap since consecutive
// placements are a full suffix length apart.
inline SymbolString build_fixed_string(const SymbolString& base,
                                       std::uint64_t n,
                                       std::uint32_t filler) {
  if (n < 2 * base.size())
    throw std::invalid_argument("build_fixed_string: n must be >= 2|base|");
  std::vector<std::uint32_t> symbols(n, filler);
  for (std::uint64_t pos : copy_positions(n, base.size()))
    for (std::size_t k = 0; k < base.size(); ++k) symbols[pos + k] = base[k];
  return SymbolString(base.alphabet(), std::move(symbols));
}

struct HardInstance {
  std::uint32_t mu = 0;
  std::uint32_t base_len = 0;  // r = mu^3
  AlphabetSpec alphabet;
  std::uint32_t star = 0;
  std::uint32_t block_filler = 0;
  std::uint32_t fixed_filler = 0;
  std::uint64_t seed = 0;
  VectorMultiset vectors;
  SymbolString base;   // length r
  SymbolString fixed;  // length n
};

inline HardInstance make_hard_instance(std::uint32_t mu, std::uint64_t n,
                                       std::uint64_t seed) {
  HardInstance inst;
  inst.mu = mu;
  inst.base_len = base_length(mu);
  inst.alphabet = alphabet_for_mu(mu);
  inst.star = star_symbol(mu);
  inst.block_filler = block_filler_symbol(mu);
  inst.fixed_filler = fixed_filler_symbol(mu);
  inst.seed = seed;
  inst.vectors = sample_vectors(mu, seed);
  inst.base = build_base_string(inst.vectors);
  inst.fixed = build_fixed_string(inst.base, n, inst.fixed_filler);
  return inst;
}

// ---- choice schedules ------------------------------------------------------

// Rounds are grouped into processes of `rounds_per_process` rounds. A round
// slides the block by mu steps; process boundaries add one extra slide,
// which shifts every write position off the previously used residue and
// frees all occupied slots.
struct ChoiceSchedule {
  std::uint32_t mu = 0;
  std::uint32_t rounds_per_process = 1;
  std::vector<std::vector<std::uint32_t>> rounds;  // mu distinct picks each

  std::uint64_t offset_of_round(std::size_t k) const {
    const std::uint64_t p = k / rounds_per_process;
    const std::uint64_t q = k % rounds_per_process;
    return p * (static_cast<std::uint64_t>(rounds_per_process) * mu + 1) +
           q * mu;
  }

  std::uint64_t write_position(std::size_t round, std::uint32_t pick) const {
    return offset_of_round(round) +
           (static_cast<std::uint64_t>(pick) + 1) * mu;
  }

  // Total slide steps = last round offset + mu.
  std::uint64_t total_slides() const {
    return rounds.empty() ? 0 : offset_of_round(rounds.size() - 1) + mu;
  }
};

// Structural validity: every round picks exactly mu distinct multiset
// elements, writes stay inside the 2r block, no position is written twice,
// and every scheduled alignment stays within the r+1 Hamming array entries.
// The strict budget additionally caps total slides at r/32 (too tight to
// admit any round at small mu, hence optional).
inline void validate_schedule(const ChoiceSchedule& s, bool strict = false) {
  if (s.mu < 2 || s.rounds_per_process == 0)
    throw std::invalid_argument("schedule: bad shape parameters");
  const std::uint64_t r = base_length(s.mu);
  std::set<std::uint64_t> occupied;
  for (std::size_t k = 0; k < s.rounds.size(); ++k) {
    const auto& round = s.rounds[k];
    if (round.size() != s.mu)
      throw std::invalid_argument("schedule: round " + std::to_string(k) +
                                  " must pick exactly mu elements");
    std::set<std::uint32_t> distinct(round.begin(), round.end());
    if (distinct.size() != round.size())
      throw std::invalid_argument("schedule: round " + std::to_string(k) +
                                  " picks must be distinct");
    for (std::uint32_t pick : round) {
      if (pick >= s.mu * s.mu)
        throw std::invalid_argument("schedule: pick index out of range");
      const std::uint64_t pos = s.write_position(k, pick);
      if (pos >= 2 * r)
        throw std::invalid_argument("schedule: write beyond the block");
      if (!occupied.insert(pos).second)
        throw std::invalid_argument("schedule: round " + std::to_string(k) +
                                    " writes an occupied position");
    }
  }
  if (s.total_slides() > r)
    throw std::invalid_argument("schedule: alignments exceed the array");
  if (strict && s.total_slides() > r / 32)
    throw std::invalid_argument("schedule: slide budget r/32 exceeded");
}

inline ChoiceSchedule make_random_schedule(const VectorMultiset& v,
                                           std::uint32_t processes,
                                           std::uint32_t rounds_per_process,
                                           Rng& rng) {
  ChoiceSchedule s;
  s.mu = v.mu;
  s.rounds_per_process = rounds_per_process;
  const std::uint64_t total_rounds =
      static_cast<std::uint64_t>(processes) * rounds_per_process;
  std::set<std::uint64_t> occupied;
  for (std::uint64_t k = 0; k < total_rounds; ++k) {
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t i = 0; i < v.mu * v.mu; ++i)
      if (!occupied.count(s.write_position(k, i))) candidates.push_back(i);
    if (candidates.size() < v.mu)
      throw std::runtime_error("schedule sampling: too few free positions");
    std::vector<std::uint32_t> round;
    for (std::uint32_t c = 0; c < v.mu; ++c) {
      const auto j =
          c + static_cast<std::uint32_t>(rng.below(candidates.size() - c));
      std::swap(candidates[c], candidates[j]);
      round.push_back(candidates[c]);
      occupied.insert(s.write_position(k, candidates[c]));
    }
    std::sort(round.begin(), round.end());
    s.rounds.push_back(std::move(round));
  }
  validate_schedule(s);
  return s;
}

// ---- update blocks ---------------------------------------------------------

struct UpdateBlock {
  SymbolString block;   // length 2r
  CountArray profile;   // predicted match counts, one per alignment in [0, r]
};

// Apply a schedule to a fresh all-filler block. The profile predicts, for
// alignment d, the number of matches between the base string and
// block[d, d+r-1]: inside round k's window (offset, offset+mu] the counts
// are the round's vector sum reversed; everywhere else they are zero, since
// a written symbol i matches base symbols only inside rho_i, which it faces
// during exactly its own round's mu alignments.
inline UpdateBlock build_update_block(const VectorMultiset& v,
                                      const ChoiceSchedule& schedule) {
  if (schedule.mu != v.mu)
    throw std::invalid_argument("build_update_block: mu mismatch");
  const std::uint32_t mu = v.mu;
  const std::uint64_t r = base_length(mu);
  const std::uint32_t filler = block_filler_symbol(mu);

  std::vector<std::uint32_t> symbols(2 * r, filler);
  CountArray profile(r + 1, 0);

  for (std::size_t k = 0; k < schedule.rounds.size(); ++k) {
    const auto& round = schedule.rounds[k];
    if (round.size() != mu)
      throw std::invalid_argument("build_update_block: round " +
                                  std::to_string(k) +
                                  " must pick exactly mu elements");
    for (std::uint32_t pick : round) {
      const std::uint64_t pos = schedule.write_position(k, pick);
      if (pos >= 2 * r)
        throw std::invalid_argument("build_update_block: round " +
                                    std::to_string(k) +
                                    " writes beyond the block");
      if (symbols[pos] != filler)
        throw std::invalid_argument("build_update_block: round " +
                                    std::to_string(k) +
                                    " writes an occupied position");
      symbols[pos] = pick;
    }
    const std::vector<std::uint32_t> sum = vsum(v, round);
    const std::uint64_t offset = schedule.offset_of_round(k);
    if (offset + mu > r)
      throw std::invalid_argument("build_update_block: alignments exceed array");
    for (std::uint32_t step = 1; step <= mu; ++step)
      profile[offset + step] = sum[mu - step];
  }
  return UpdateBlock{SymbolString(alphabet_for_mu(mu), std::move(symbols)),
                     std::move(profile)};
}

// ---- block dictionary ------------------------------------------------------

struct BlockDictionary {
  std::uint32_t mu = 0;
  SymbolString base;                   // the string keys are computed against
  std::vector<SymbolString> blocks;    // pairwise-distinct ham_array keys
  std::vector<CountArray> keys;        // keys[i] = ham_array(base, blocks[i])
  std::map<CountArray, std::size_t> index;
  bool incomplete = false;  // retry budget exhausted before reaching count

  std::optional<std::size_t> lookup(const CountArray& key) const {
    auto it = index.find(key);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Collect `count` blocks whose Hamming arrays against the base string are
// pairwise distinct. Blocks come from random valid schedules; if the retry
// budget runs out, uniformly random blocks over [r] fill the gap, and if
// that fails too the dictionary is returned partial with the incomplete
// flag set.
inline BlockDictionary build_dictionary(const VectorMultiset& v,
                                        std::size_t count,
                                        std::uint64_t seed,
                                        std::size_t max_attempts = 0) {
  if (count == 0)
    throw std::invalid_argument("build_dictionary: count must be >= 1");
  const std::uint32_t mu = v.mu;
  const std::uint64_t r = base_length(mu);
  if (max_attempts == 0) max_attempts = 64 * count + 64;

  BlockDictionary dict;
  dict.mu = mu;
  dict.base = build_base_string(v);

  Rng rng(seed);
  auto try_insert = [&](SymbolString block) {
    CountArray key = ham_array(dict.base, block);
    if (dict.index.count(key)) return false;
    dict.index.emplace(key, dict.blocks.size());
    dict.blocks.push_back(std::move(block));
    dict.keys.push_back(std::move(key));
    return true;
  };

  std::size_t attempts = 0;
  while (dict.blocks.size() < count && attempts < max_attempts) {
    ++attempts;
    // Schedule shape drawn small enough that alignments fit r.
    for (int shape_try = 0; shape_try < 32; ++shape_try) {
      const auto processes = static_cast<std::uint32_t>(1 + rng.below(3));
      const auto rpp = static_cast<std::uint32_t>(1 + rng.below(3));
      ChoiceSchedule probe_shape;
      probe_shape.mu = mu;
      probe_shape.rounds_per_process = rpp;
      probe_shape.rounds.resize(
          static_cast<std::size_t>(processes) * rpp);
      if (probe_shape.offset_of_round(probe_shape.rounds.size() - 1) + mu <=
          r) {
        try_insert(
            build_update_block(v, make_random_schedule(v, processes, rpp, rng))
                .block);
        break;
      }
    }
  }
  // Fallback: unstructured random blocks still give distinct keys.
  attempts = 0;
  while (dict.blocks.size() < count && attempts < max_attempts) {
    ++attempts;
    std::vector<std::uint32_t> symbols(2 * r);
    for (auto& s : symbols) s = static_cast<std::uint32_t>(rng.below(r));
    try_insert(SymbolString(dict.base.alphabet(), std::move(symbols)));
  }
  dict.incomplete = dict.blocks.size() < count;
  return dict;
}

// ---- update sequences ------------------------------------------------------

struct UpdateLayout {
  std::uint64_t t0 = 0, t1 = 0;     // block-bearing interval
  std::uint64_t pad = 0;            // leading outside-filled positions in it
  std::uint32_t outside_symbol = 0;
  std::vector<std::uint64_t> block_starts;  // arrival time of each block
};

struct UpdateSequence {
  SymbolString updates;                   // length n
  UpdateLayout layout;
  std::vector<std::size_t> ground_truth;  // dictionary index per block slot
};

// Updates of length n: dictionary blocks tile [t0, t1] right-aligned (a
// left pad of outside symbols absorbs any remainder), everything else is
// the outside symbol.
inline UpdateSequence build_update_sequence(const BlockDictionary& dict,
                                            std::uint64_t n, std::uint64_t t0,
                                            std::uint64_t t1,
                                            std::uint32_t outside_symbol,
                                            std::uint64_t seed) {
  if (dict.blocks.empty())
    throw std::invalid_argument("build_update_sequence: empty dictionary");
  if (t1 < t0 || t1 >= n)
    throw std::invalid_argument("build_update_sequence: bad interval");
  const std::uint64_t block_len = 2 * base_length(dict.mu);
  const std::uint64_t span = t1 - t0 + 1;
  const std::uint64_t block_count = span / block_len;
  const std::uint64_t pad = span - block_count * block_len;

  const AlphabetSpec alphabet = alphabet_for_mu(dict.mu);
  if (!alphabet.contains(outside_symbol))
    throw std::invalid_argument("build_update_sequence: outside symbol");

  UpdateSequence seq;
  seq.layout.t0 = t0;
  seq.layout.t1 = t1;
  seq.layout.pad = pad;
  seq.layout.outside_symbol = outside_symbol;

  std::vector<std::uint32_t> symbols(n, outside_symbol);
  Rng rng(seed);
  for (std::uint64_t b = 0; b < block_count; ++b) {
    const auto pick = static_cast<std::size_t>(rng.below(dict.blocks.size()));
    const std::uint64_t start = t0 + pad + b * block_len;
    const SymbolString& block = dict.blocks[pick];
    for (std::uint64_t k = 0; k < block_len; ++k)
      symbols[start + k] = block[static_cast<std::size_t>(k)];
    seq.layout.block_starts.push_back(start);
    seq.ground_truth.push_back(pick);
  }
  seq.updates = SymbolString(alphabet, std::move(symbols));
  return seq;
}

// ---- decoding --------------------------------------------------------------

enum class DecodeStatus { recovered, skipped, undecodable };

struct DecodedBlock {
  std::size_t slot = 0;          // position in the layout's block list
  std::uint64_t start_time = 0;
  DecodeStatus status = DecodeStatus::skipped;
  std::size_t dict_index = 0;    // valid when status == recovered
};

struct IntervalGeometry {
  std::uint64_t t0 = 0, t1 = 0, t2 = 0;  // t1-t0+1 == t2-t1 == 2^ell
};

namespace detail {

inline std::uint64_t geometry_interval_length(const IntervalGeometry& g) {
  if (g.t1 < g.t0 || g.t2 <= g.t1)
    throw std::invalid_argument("decode geometry: need t0 <= t1 < t2");
  const std::uint64_t len = g.t1 - g.t0 + 1;
  if (g.t2 - g.t1 != len)
    throw std::invalid_argument("decode geometry: intervals must match");
  if (!std::has_single_bit(len))
    throw std::invalid_argument("decode geometry: length must be 2^ell");
  return len;
}

}  // namespace detail

// Recover update blocks from the outputs D[t1+1, t2].
//
// The copy of the base string heading the 2^ell-length suffix of the fixed
// string is the decoding target. For each time t in the window the known
// window symbols (outside values, initial fill) contribute a computable
// mismatch count; unknown block symbols aligned with the fixed filler each
// contribute exactly one mismatch. A block whose r+1 target alignments all
// fall inside the window with no other unknown symbol touching any base-
// string copy yields its full Hamming array, which the dictionary maps back
// to the block. Boundary blocks failing the geometry are reported skipped;
// a clean extraction whose key is absent from the dictionary is reported
// undecodable.
inline std::vector<DecodedBlock> decode_blocks(
    const CountArray& d_window, const HardInstance& inst,
    const BlockDictionary& dict, const SymbolString& updates_known,
    const UpdateLayout& layout, const IntervalGeometry& geo) {
  const std::uint64_t interval = detail::geometry_interval_length(geo);
  const std::uint64_t n = inst.fixed.size();
  const std::uint64_t r = inst.base_len;
  if (interval < 2 * r)
    throw std::invalid_argument("decode geometry: 2^ell must be >= 2r");
  if (geo.t2 >= updates_known.size() || updates_known.size() != n)
    throw std::invalid_argument("decode: updates must cover [0, n) with t2 < n");
  if (d_window.size() != geo.t2 - geo.t1)
    throw std::invalid_argument("decode: output window length mismatch");
  if (interval > n)
    throw std::invalid_argument("decode geometry: suffix exceeds fixed string");

  const std::uint64_t target = n - interval;  // head copy of the suffix
  const std::uint64_t block_len = 2 * r;

  // Known update values with block spans scrubbed; the decoder must not
  // depend on them.
  std::vector<std::uint32_t> known(updates_known.symbols().begin(),
                                   updates_known.symbols().end());
  std::vector<std::uint8_t> unknown(n, 0);
  std::vector<std::int64_t> owner(n, -1);
  for (std::size_t b = 0; b < layout.block_starts.size(); ++b) {
    const std::uint64_t start = layout.block_starts[b];
    for (std::uint64_t k = 0; k < block_len; ++k) {
      known[start + k] = 0;
      unknown[start + k] = 1;
      owner[start + k] = static_cast<std::int64_t>(b);
    }
  }

  const std::vector<std::uint64_t> copies = copy_positions(n, r);
  std::vector<std::uint8_t> on_copy(n, 0);  // fixed positions inside a copy
  for (std::uint64_t pos : copies)
    for (std::uint64_t k = 0; k < r; ++k) on_copy[pos + k] = 1;

  // Per time step: known-mismatch total, unknown-on-filler count, and
  // whether any unknown symbol sits on a copy other than the target window.
  const std::uint64_t window_len = geo.t2 - geo.t1;
  std::vector<std::uint64_t> known_mismatch(window_len, 0);
  std::vector<std::uint64_t> filler_hits(window_len, 0);
  std::vector<std::uint8_t> other_copy_touched(window_len, 0);
  std::vector<std::int64_t> target_owner(window_len, -1);
  std::vector<std::uint64_t> target_cover(window_len, 0);

  for (std::uint64_t w = 0; w < window_len; ++w) {
    const std::uint64_t t = geo.t1 + 1 + w;
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::int64_t a = static_cast<std::int64_t>(i) +
                             static_cast<std::int64_t>(t) -
                             static_cast<std::int64_t>(n) + 1;
      const std::uint32_t fixed_sym = inst.fixed[static_cast<std::size_t>(i)];
      if (a < 0) {  // initial fill is the known symbol 0
        known_mismatch[w] += (fixed_sym != 0);
        continue;
      }
      const auto ai = static_cast<std::uint64_t>(a);
      if (!unknown[ai]) {
        known_mismatch[w] += (fixed_sym != known[ai]);
        continue;
      }
      if (!on_copy[i]) {
        ++filler_hits[w];  // filler matches no update symbol
        continue;
      }
      if (i >= target && i < target + r) {
        if (target_owner[w] == -1) target_owner[w] = owner[ai];
        if (target_owner[w] != owner[ai]) other_copy_touched[w] = 1;
        ++target_cover[w];
      } else {
        other_copy_touched[w] = 1;
      }
    }
  }

  std::vector<DecodedBlock> result;
  for (std::size_t b = 0; b < layout.block_starts.size(); ++b) {
    DecodedBlock out;
    out.slot = b;
    out.start_time = layout.block_starts[b];

    // Alignment alpha of the block against the target copy appears at time
    // t = start + 2^ell - 1 + alpha.
    const std::uint64_t t_first = layout.block_starts[b] + interval - 1;
    bool clean = true;
    CountArray key(r + 1, 0);
    for (std::uint64_t alpha = 0; alpha <= r && clean; ++alpha) {
      const std::uint64_t t = t_first + alpha;
      if (t < geo.t1 + 1 || t > geo.t2) {
        clean = false;
        break;
      }
      const std::uint64_t w = t - (geo.t1 + 1);
      if (other_copy_touched[w] || target_cover[w] != r ||
          target_owner[w] != static_cast<std::int64_t>(b)) {
        clean = false;
        break;
      }
      const std::uint64_t residual =
          d_window[w] - known_mismatch[w] - filler_hits[w];
      key[alpha] = static_cast<std::uint32_t>(residual);
    }

    if (!clean) {
      out.status = DecodeStatus::skipped;
    } else if (auto idx = dict.lookup(key)) {
      out.status = DecodeStatus::recovered;
      out.dict_index = *idx;
    } else {
      out.status = DecodeStatus::undecodable;
    }
    result.push_back(out);
  }
  return result;
}

}  // namespace hds
