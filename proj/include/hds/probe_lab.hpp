#pragma once

// Probe-log analyses: information transfer between adjacent time intervals,
// its bit encoding, the encode/replay procedure, and interval-tree probe
// accounting.
//
// IT(t0, t1, t2) is the set of cells written during [t0, t1], read at some
// time t in [t1+1, t2] and not written during [t1+1, t]. All probes of one
// arrival share its timestamp; where the definition compares times within
// one arrival, log order decides. Cells never written (or written only
// during engine setup, t = -1) belong to pre-stream state and are never IT
// members.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hds/bitstring.hpp"
#include "hds/cell_store.hpp"
#include "hds/engine.hpp"
#include "hds/symbol_string.hpp"

namespace hds {

struct ITSet {
  std::uint64_t t0 = 0, t1 = 0, t2 = 0;
  // Cells ordered by address, each with its value at the end of t1.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;

  std::size_t size() const { return cells.size(); }
};

struct RunCapture {
  CountArray outputs;
  ProbeLog log;
};

// Run a backend against an instrumented store and capture outputs plus the
// full probe log.
inline RunCapture instrumented_run(BackendKind backend,
                                   const SymbolString& fixed,
                                   const SymbolString& updates,
                                   std::uint32_t word_bits,
                                   OfflineAlgo offline = OfflineAlgo::convolution) {
  CellStore store(word_bits, StoreMode::instrumented);
  StreamEngine engine(fixed, backend, store, offline);
  RunCapture capture;
  capture.outputs = engine.run_sequence(updates);
  capture.log = store.take_log(updates.size());
  return capture;
}

inline void check_triple(const ProbeLog& log, std::uint64_t t0,
                         std::uint64_t t1, std::uint64_t t2) {
  if (!(t0 <= t1 && t1 < t2 && t2 < log.arrivals))
    throw std::invalid_argument(
        "information transfer: need t0 <= t1 < t2 < arrivals");
}

// Single pass in log order: a read at t in [t1+1, t2] whose most recent
// write (log order) falls in [t0, t1] certifies its cell; the write's value
// is the cell's value at the end of t1,
// since no later write precedes the read.
inline ITSet information_transfer(const ProbeLog& log, std::uint64_t t0,
                                  std::uint64_t t1, std::uint64_t t2) {
  check_triple(log, t0, t1, t2);
  std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::uint64_t>>
      last_write;  // addr -> (t, value)
  std::unordered_map<std::uint64_t, std::uint64_t> members;
  for (const auto& rec : log.records) {
    if (rec.kind == ProbeKind::write) {
      last_write[rec.addr] = {rec.t, rec.value};
      continue;
    }
    if (rec.t < static_cast<std::int64_t>(t1) + 1 ||
        rec.t > static_cast<std::int64_t>(t2))
      continue;
    auto it = last_write.find(rec.addr);
    if (it == last_write.end()) continue;
    const std::int64_t wt = it->second.first;
    if (wt >= static_cast<std::int64_t>(t0) &&
        wt <= static_cast<std::int64_t>(t1))
      members.emplace(rec.addr, it->second.second);
  }
  ITSet set;
  set.t0 = t0;
  set.t1 = t1;
  set.t2 = t2;
  set.cells.assign(members.begin(), members.end());
  std::sort(set.cells.begin(), set.cells.end());
  return set;
}

// ---- encoding --------------------------------------------------------------
//
// Layout: [|IT| : w bits] then per cell [address : w bits][value : w bits],
// exactly w * (2|IT| + 1) bits in total.

inline BitString encode_it(const ITSet& set, std::uint32_t word_bits) {
  if (word_bits < 64 &&
      set.size() >= (std::uint64_t{1} << word_bits))
    throw std::invalid_argument("encode_it: size does not fit one word");
  BitString bits;
  bits.append(set.size(), word_bits);
  for (const auto& [addr, value] : set.cells) {
    bits.append(addr, word_bits);
    bits.append(value, word_bits);
  }
  return bits;
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> decode_it_encoding(
    const BitString& bits, std::uint32_t word_bits) {
  if (bits.bit_size() < word_bits)
    throw std::invalid_argument("decode_it_encoding: truncated bit string");
  const std::uint64_t count = bits.slice(0, word_bits);
  if (bits.bit_size() !=
      static_cast<std::size_t>(word_bits) * (2 * count + 1))
    throw std::invalid_argument("decode_it_encoding: length mismatch");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  cells.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t base = word_bits * (1 + 2 * i);
    cells.emplace_back(bits.slice(base, word_bits),
                       bits.slice(base + word_bits, word_bits));
  }
  return cells;
}

// ---- replay ---------------------------------------------------------------
//
// Re-simulates [0, t0-1] normally, skips [t0, t1] (those update symbols are
// treated as unknown), then resumes over [t1+1, t2] with reads intercepted:
// a read of a tabled cell returns the stored value, and a write to a tabled
// cell removes it. Returns the outputs for [t1+1, t2], which must equal the
// original run's.
//
// `original_log`, when given, only powers the integrity check for reads
// that needed a skipped-interval write yet found no table entry; no values
// are taken from it.
inline CountArray decode_and_replay(BackendKind backend,
                                    const SymbolString& fixed,
                                    const SymbolString& updates_outside,
                                    const BitString& encoding,
                                    std::uint64_t t0, std::uint64_t t1,
                                    std::uint64_t t2, std::uint32_t word_bits,
                                    OfflineAlgo offline = OfflineAlgo::convolution,
                                    const ProbeLog* original_log = nullptr) {
  if (!(t0 <= t1 && t1 < t2 && t2 < updates_outside.size()))
    throw std::invalid_argument("replay: need t0 <= t1 < t2 < arrivals");

  std::unordered_map<std::uint64_t, std::uint64_t> table;
  for (const auto& [addr, value] : decode_it_encoding(encoding, word_bits))
    table.emplace(addr, value);

  std::unordered_set<std::uint64_t> gap_written;
  if (original_log) {
    for (const auto& rec : original_log->records) {
      if (rec.kind == ProbeKind::write &&
          rec.t >= static_cast<std::int64_t>(t0) &&
          rec.t <= static_cast<std::int64_t>(t1))
        gap_written.insert(rec.addr);
    }
  }

  CellStore store(word_bits, StoreMode::native);
  StreamEngine engine(fixed, backend, store, offline);
  for (std::uint64_t t = 0; t < t0; ++t)
    engine.arrive(updates_outside[static_cast<std::size_t>(t)]);
  engine.skip(t1 - t0 + 1);

  store.begin_interception(std::move(table),
                           original_log ? &gap_written : nullptr);
  CountArray outputs;
  outputs.reserve(static_cast<std::size_t>(t2 - t1));
  for (std::uint64_t t = t1 + 1; t <= t2; ++t)
    outputs.push_back(engine.arrive(updates_outside[static_cast<std::size_t>(t)]));
  store.end_interception();
  return outputs;
}

// ---- interval tree ---------------------------------------------------------

struct TreeNodeIT {
  std::uint64_t t0 = 0, t1 = 0, t2 = 0;
  std::uint64_t it_size = 0;
};

struct TreeItReport {
  std::vector<TreeNodeIT> nodes;  // internal nodes, root first
  std::uint64_t total_it = 0;
  std::uint64_t total_reads = 0;
  std::uint64_t attributed_reads = 0;
};

// Balanced binary tree over the time axis [0, n); node v spanning [a, a+2^h)
// pairs [a, a+2^(h-1)-1] with [a+2^(h-1), a+2^h-1]. A read whose most recent
// write lies in the left span while the read lies in the right span lands in
// IT(v), and v is exactly the lowest common ancestor of the two leaves, so
// each read counts toward at most one node.
inline TreeItReport interval_tree_analysis(const ProbeLog& log,
                                           std::uint64_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("interval tree: n must be a power of two");
  const std::uint32_t height =
      static_cast<std::uint32_t>(std::countr_zero(n));

  // nodes[h][a >> h]: per-node member sets, h = subtree height >= 1.
  std::vector<std::vector<std::unordered_set<std::uint64_t>>> members(
      height + 1);
  for (std::uint32_t h = 1; h <= height; ++h)
    members[h].resize(n >> h);

  TreeItReport report;
  std::unordered_map<std::uint64_t, std::int64_t> last_write;
  for (const auto& rec : log.records) {
    if (rec.kind == ProbeKind::write) {
      last_write[rec.addr] = rec.t;
      continue;
    }
    ++report.total_reads;
    if (rec.t < 0 || rec.t >= static_cast<std::int64_t>(n)) continue;
    auto it = last_write.find(rec.addr);
    if (it == last_write.end() || it->second < 0) continue;  // pre-stream
    const auto wt = static_cast<std::uint64_t>(it->second);
    const auto rt = static_cast<std::uint64_t>(rec.t);
    if (wt == rt) continue;  // same leaf
    const std::uint32_t h =
        static_cast<std::uint32_t>(std::bit_width(wt ^ rt));
    if (members[h][rt >> h].insert(rec.addr).second) {
      // new cell for this node
    }
    ++report.attributed_reads;
  }

  for (std::uint32_t h = height; h >= 1; --h) {
    for (std::uint64_t k = 0; k < (n >> h); ++k) {
      const std::uint64_t a = k << h;
      TreeNodeIT node;
      node.t0 = a;
      node.t1 = a + (std::uint64_t{1} << (h - 1)) - 1;
      node.t2 = a + (std::uint64_t{1} << h) - 1;
      node.it_size = members[h][k].size();
      report.total_it += node.it_size;
      report.nodes.push_back(node);
    }
  }
  return report;
}

// ---- probe statistics ------------------------------------------------------

struct ProbeStats {
  std::uint64_t total = 0, reads = 0, writes = 0, setup = 0;
  std::vector<std::uint64_t> per_arrival;
  double amortized = 0.0;  // probes per arrival, setup excluded
};

inline ProbeStats probe_stats(const ProbeLog& log, std::uint64_t arrivals) {
  ProbeStats stats;
  stats.per_arrival.resize(arrivals, 0);
  for (const auto& rec : log.records) {
    ++stats.total;
    if (rec.kind == ProbeKind::read) ++stats.reads; else ++stats.writes;
    if (rec.t < 0) {
      ++stats.setup;
    } else if (rec.t < static_cast<std::int64_t>(arrivals)) {
      ++stats.per_arrival[static_cast<std::size_t>(rec.t)];
    }
  }
  if (arrivals > 0)
    stats.amortized = static_cast<double>(stats.total - stats.setup) /
                      static_cast<double>(arrivals);
  return stats;
}

// Counter-based variant for long runs where keeping a log is impractical.
inline ProbeStats probe_stats(const CellStore& store, std::uint64_t arrivals) {
  ProbeStats stats;
  stats.total = store.total_probes();
  stats.reads = store.total_reads();
  stats.writes = store.total_writes();
  stats.setup = store.setup_probes();
  stats.per_arrival = store.per_arrival_probes();
  stats.per_arrival.resize(arrivals, 0);
  if (arrivals > 0)
    stats.amortized = static_cast<double>(stats.total - stats.setup) /
                      static_cast<double>(arrivals);
  return stats;
}

}  // namespace hds
