#pragma once

// The streaming problem: maintain the last-n window and answer each arrival
// with the Hamming distance against the fixed string. Backends keep all
// state behind a CellStore, with symbols packed floor(w/delta) per cell.
//
// naive    -- per arrival, re-read the fixed string and the whole window and
//             count mismatches.
// blackbox -- offline-to-online level decomposition. The fixed string splits
//             into pieces piece(j) = F'[n-2^(j+1), n-2^j-1] of length 2^j
//             plus the final symbol. Whenever t is a multiple of 2^j, level j
//             computes the contribution of piece(j) to the next 2^j outputs
//             with one offline sliding-count call over the most recent
//             2^(j+1)-1 window symbols and parks the results in a per-level
//             pending queue. Each output sums one pending value per level
//             plus a directly computed term for F'[n-1].
//
// A remark on provenance: in a pure cell-probe argument an offline algorithm
// may simply read all input and output all answers, which already yields the
// log-factor online conversion; the level scheme here is the standard
// executable counterpart of that conversion, not a transcription of it.
//
// Streams of length up to the window are exact; when |fixed| is not a power
// of two the engine pads on the left with a filler symbol drawn from a
// one-bit-wider internal alphabet. The filler can never equal a stream
// symbol, so the padded positions contribute a constant that is subtracted
// from every output.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hds/cell_store.hpp"
#include "hds/mismatch.hpp"
#include "hds/symbol_string.hpp"

namespace hds {

enum class BackendKind { naive, blackbox };

// Which offline counter the blackbox levels call.
enum class OfflineAlgo { convolution, window_scan };

inline const char* to_string(BackendKind k) {
  return k == BackendKind::naive ? "naive" : "blackbox";
}

struct LevelStats {
  std::uint32_t level = 0;
  std::uint64_t flushes = 0;
  std::uint64_t probes = 0;
};

namespace detail {
inline void logic_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(what);
}
}  // namespace detail

class StreamEngine {
 public:
  StreamEngine(const SymbolString& fixed, BackendKind backend,
               CellStore& store,
               OfflineAlgo offline = OfflineAlgo::convolution)
      : store_(store), backend_(backend), offline_(offline) {
    if (fixed.empty())
      throw std::invalid_argument("engine: fixed string must be non-empty");
    n_ = fixed.size();
    padded_n_ = std::bit_ceil(n_);
    pad_ = padded_n_ - n_;

    user_delta_ = fixed.alphabet().delta;
    delta_ = pad_ > 0 ? user_delta_ + 1 : user_delta_;
    if (delta_ > store_.word_bits())
      throw std::invalid_argument("engine: symbol does not fit one cell");
    if (store_.word_bits() < 64 &&
        (std::uint64_t{1} << store_.word_bits()) < padded_n_)
      throw std::invalid_argument(
          "engine: cell width below log2 of the window length");

    per_cell_ = store_.word_bits() / delta_;
    fixed_cells_ = (padded_n_ + per_cell_ - 1) / per_cell_;
    fixed_base_ = 0;
    window_base_ = fixed_cells_;
    pending_base_ = 2 * fixed_cells_;
    levels_ = static_cast<std::uint32_t>(std::bit_width(padded_n_) - 1);
    if (backend_ == BackendKind::blackbox)
      level_stats_.resize(levels_);

    const std::uint32_t filler = std::uint32_t{1} << user_delta_;

    // Engine setup happens before the stream: stamp it t = -1.
    store_.set_time(-1);
    std::uint64_t i = 0;
    for (std::uint64_t cell = 0; cell < fixed_cells_; ++cell) {
      std::uint64_t word = 0;
      for (std::uint32_t k = 0; k < per_cell_ && i < padded_n_; ++k, ++i) {
        const std::uint32_t sym =
            i < pad_ ? filler : fixed[static_cast<std::size_t>(i - pad_)];
        word |= static_cast<std::uint64_t>(sym) << (k * delta_);
      }
      store_.write(fixed_base_ + cell, word);
    }
    // The window region and pending queues stay untouched: never-written
    // cells read as 0, which is exactly the all-zero initial fill.
  }

  std::uint64_t length() const { return n_; }
  std::uint64_t padded_length() const { return padded_n_; }
  std::uint64_t pad_amount() const { return pad_; }
  std::uint64_t clock() const { return clock_; }
  BackendKind backend() const { return backend_; }
  std::uint32_t symbol_bits() const { return delta_; }
  std::uint32_t symbols_per_cell() const { return per_cell_; }

  // Process one arrival and return Ham(fixed, updated window).
  std::uint32_t arrive(std::uint32_t symbol) {
    if (symbol >= (std::uint64_t{1} << user_delta_))
      throw std::invalid_argument("arrive: symbol outside the alphabet");
    const std::uint64_t t = clock_;
    store_.set_time(static_cast<std::int64_t>(t));

    std::uint64_t padded_out;
    if (backend_ == BackendKind::naive) {
      write_window_symbol(t, symbol);
      padded_out = naive_scan(t);
    } else {
      for (std::uint32_t j = 0; j < levels_; ++j) {
        if ((t & ((std::uint64_t{1} << j) - 1)) == 0) flush_level(j, t);
      }
      write_window_symbol(t, symbol);
      padded_out = pending_sum(t);
      padded_out += (read_symbol(fixed_base_, padded_n_ - 1) != symbol);
    }
    ++clock_;

    detail::logic_check(padded_out >= pad_,
                        "engine: padded output below pad correction");
    return static_cast<std::uint32_t>(padded_out - pad_);
  }

  // Feed a whole update sequence into a freshly constructed engine and
  // collect the outputs.
  CountArray run_sequence(const SymbolString& updates) {
    if (clock_ != 0)
      throw std::invalid_argument("run_sequence requires a fresh engine");
    if (updates.alphabet().delta != user_delta_)
      throw std::invalid_argument("run_sequence: alphabet mismatch");
    CountArray outputs;
    outputs.reserve(updates.size());
    for (std::size_t i = 0; i < updates.size(); ++i)
      outputs.push_back(arrive(updates[i]));
    return outputs;
  }

  // Advance the clock without processing arrivals. Replay-only: the skipped
  // interval's state stays absent and must be served by interception.
  void skip(std::uint64_t arrivals) { clock_ += arrivals; }

  const std::vector<LevelStats>& level_stats() const { return level_stats_; }

  // Current window content, oldest first. Diagnostic: bypasses probes.
  std::vector<std::uint32_t> window_snapshot() const {
    std::vector<std::uint32_t> out(padded_n_);
    for (std::uint64_t i = 0; i < padded_n_; ++i) {
      const std::uint64_t slot =
          (clock_ + i) % padded_n_;  // position i holds arrival clock-n+i
      const std::uint64_t cell = window_base_ + slot / per_cell_;
      const std::uint32_t shift =
          static_cast<std::uint32_t>(slot % per_cell_) * delta_;
      out[i] = static_cast<std::uint32_t>((store_.peek(cell) >> shift) &
                                          symbol_mask());
    }
    return out;
  }

 private:
  std::uint64_t symbol_mask() const {
    return (std::uint64_t{1} << delta_) - 1;
  }

  std::uint32_t read_symbol(std::uint64_t base, std::uint64_t index) {
    const std::uint64_t word = store_.read(base + index / per_cell_);
    const std::uint32_t shift =
        static_cast<std::uint32_t>(index % per_cell_) * delta_;
    return static_cast<std::uint32_t>((word >> shift) & symbol_mask());
  }

  void write_window_symbol(std::uint64_t t, std::uint32_t symbol) {
    const std::uint64_t slot = t % padded_n_;
    const std::uint64_t cell = window_base_ + slot / per_cell_;
    const std::uint32_t shift =
        static_cast<std::uint32_t>(slot % per_cell_) * delta_;
    std::uint64_t word = store_.read(cell);  // read-modify-write
    word &= ~(symbol_mask() << shift);
    word |= static_cast<std::uint64_t>(symbol) << shift;
    store_.write(cell, word);
  }

  // Read symbols [first, first+count) of a region, one probe per cell.
  void read_symbol_run(std::uint64_t base, std::uint64_t first,
                       std::uint64_t count, std::uint32_t* out) {
    std::uint64_t cell_index = ~std::uint64_t{0};
    std::uint64_t word = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t index = first + i;
      const std::uint64_t c = index / per_cell_;
      if (c != cell_index) {
        word = store_.read(base + c);
        cell_index = c;
      }
      const std::uint32_t shift =
          static_cast<std::uint32_t>(index % per_cell_) * delta_;
      out[i] = static_cast<std::uint32_t>((word >> shift) & symbol_mask());
    }
  }

  // Window symbols of arrivals [a, a+count), negative arrivals being the
  // all-zero initial fill. Slots may wrap once.
  void read_window_arrivals(std::int64_t a, std::uint64_t count,
                            std::uint32_t* out) {
    const auto n = static_cast<std::int64_t>(padded_n_);
    std::uint64_t done = 0;
    while (done < count) {
      const std::int64_t arrival = a + static_cast<std::int64_t>(done);
      const std::uint64_t slot =
          static_cast<std::uint64_t>(((arrival % n) + n) % n);
      const std::uint64_t run =
          std::min<std::uint64_t>(count - done, padded_n_ - slot);
      read_symbol_run(window_base_, slot, run, out + done);
      done += run;
    }
  }

  std::uint64_t naive_scan(std::uint64_t t) {
    scratch_fixed_.resize(padded_n_);
    scratch_text_.resize(padded_n_);
    read_symbol_run(fixed_base_, 0, padded_n_, scratch_fixed_.data());
    // Window position i holds arrival t-n+1+i.
    read_window_arrivals(static_cast<std::int64_t>(t) -
                             static_cast<std::int64_t>(padded_n_) + 1,
                         padded_n_, scratch_text_.data());
    std::uint64_t mismatches = 0;
    for (std::uint64_t i = 0; i < padded_n_; ++i)
      mismatches += (scratch_fixed_[i] != scratch_text_[i]);
    return mismatches;
  }

  std::uint64_t pending_slot(std::uint32_t level, std::uint64_t t) const {
    // Level j owns 2^j cells at pending_base_ + (2^j - 1).
    return pending_base_ + ((std::uint64_t{1} << level) - 1) +
           (t & ((std::uint64_t{1} << level) - 1));
  }

  std::uint64_t pending_sum(std::uint64_t t) {
    std::uint64_t sum = 0;
    for (std::uint32_t j = 0; j < levels_; ++j)
      sum += store_.read(pending_slot(j, t));
    return sum;
  }

  // Contribution of piece(j) = F'[n-2^(j+1), n-2^j-1] to the outputs at
  // times [t, t+2^j). Runs before arrival t is appended; the needed text is
  // the 2^(j+1)-1 most recent window symbols, i.e. arrivals
  // [t-2^(j+1)+1, t-1], which yield exactly 2^j alignments.
  void flush_level(std::uint32_t j, std::uint64_t t) {
    detail::logic_check((t & ((std::uint64_t{1} << j) - 1)) == 0,
                        "blackbox: misaligned level flush");
    const std::uint64_t probes_before = store_.total_probes();
    const std::uint64_t piece_len = std::uint64_t{1} << j;
    const std::uint64_t text_len = 2 * piece_len - 1;

    scratch_fixed_.resize(piece_len);
    scratch_text_.resize(text_len);
    read_symbol_run(fixed_base_, padded_n_ - 2 * piece_len, piece_len,
                    scratch_fixed_.data());
    read_window_arrivals(static_cast<std::int64_t>(t) -
                             static_cast<std::int64_t>(text_len),
                         text_len, scratch_text_.data());

    const AlphabetSpec internal{delta_};
    SymbolString piece(internal, std::vector<std::uint32_t>(
                                     scratch_fixed_.begin(),
                                     scratch_fixed_.begin() + piece_len));
    SymbolString text(internal, std::vector<std::uint32_t>(
                                    scratch_text_.begin(),
                                    scratch_text_.begin() + text_len));
    const CountArray counts = offline_ == OfflineAlgo::convolution
                                  ? sliding_mismatch_counts_fast(piece, text)
                                  : sliding_mismatch_counts(piece, text);
    detail::logic_check(counts.size() == piece_len,
                        "blackbox: unexpected alignment count");
    for (std::uint64_t d = 0; d < piece_len; ++d)
      store_.write(pending_slot(j, t + d), counts[d]);

    auto& stats = level_stats_[j];
    stats.level = j;
    stats.flushes += 1;
    stats.probes += store_.total_probes() - probes_before;
  }

  CellStore& store_;
  BackendKind backend_;
  OfflineAlgo offline_;

  std::uint64_t n_ = 0, padded_n_ = 0, pad_ = 0;
  std::uint32_t user_delta_ = 0, delta_ = 0, per_cell_ = 0, levels_ = 0;
  std::uint64_t fixed_base_ = 0, window_base_ = 0, pending_base_ = 0,
                fixed_cells_ = 0;
  std::uint64_t clock_ = 0;

  std::vector<LevelStats> level_stats_;
  std::vector<std::uint32_t> scratch_fixed_, scratch_text_;
};

inline CountArray run_sequence(StreamEngine& engine,
                               const SymbolString& updates) {
  return engine.run_sequence(updates);
}

}  // namespace hds
