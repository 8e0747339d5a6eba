#pragma once

// The instrumented w-bit cell memory. Every piece of backend state lives in
// a store; computation over values already read is free. Instrumented mode
// additionally records a full timestamped probe log. Replay interception
// serves reads of lost cells from a decoded table and drops table entries on
// overwrite.
//
// Time stamps are arrival indices; probes issued before the first arrival
// (engine setup) carry t = -1. Within one arrival, log order refines the
// time axis.

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hds {

enum class ProbeKind : std::uint8_t { read = 0, write = 1 };

struct ProbeRecord {
  std::int64_t t;  // arrival index; -1 for pre-stream setup
  ProbeKind kind;
  std::uint64_t addr;
  std::uint64_t value;  // value read or written
};

struct ProbeLog {
  std::uint32_t word_bits = 64;
  std::uint64_t arrivals = 0;  // length of the time axis
  std::vector<ProbeRecord> records;
};

enum class StoreMode { native, instrumented };

class CellStore {
 public:
  explicit CellStore(std::uint32_t word_bits,
                     StoreMode mode = StoreMode::native)
      : word_bits_(word_bits), mode_(mode) {
    if (word_bits_ < 1 || word_bits_ > 64)
      throw std::invalid_argument("cell word width must be in [1, 64]");
  }

  std::uint32_t word_bits() const { return word_bits_; }
  StoreMode mode() const { return mode_; }

  std::uint64_t value_mask() const {
    return word_bits_ == 64 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << word_bits_) - 1;
  }

  void set_time(std::int64_t t) { now_ = t; }
  std::int64_t time() const { return now_; }

  std::uint64_t read(std::uint64_t addr) {
    check_addr(addr);
    std::uint64_t value;
    if (intercepting_) {
      auto hit = table_.find(addr);
      if (hit != table_.end()) {
        value = hit->second;
      } else {
        integrity_check_on_miss(addr);
        value = raw(addr);
      }
    } else {
      value = raw(addr);
    }
    account(ProbeKind::read, addr, value);
    return value;
  }

  void write(std::uint64_t addr, std::uint64_t value) {
    check_addr(addr);
    if (value > value_mask())
      throw std::invalid_argument("cell value does not fit word width");
    if (intercepting_) {
      table_.erase(addr);  // overwrite invalidates the decoded copy
      resume_written_.insert(addr);
    }
    if (addr >= cells_.size()) cells_.resize(addr + 1, 0);
    cells_[addr] = value;
    account(ProbeKind::write, addr, value);
  }

  // Diagnostic access: no probe is charged and nothing is logged.
  std::uint64_t peek(std::uint64_t addr) const {
    return addr < cells_.size() ? cells_[addr] : 0;
  }

  // ---- counters -------------------------------------------------------

  std::uint64_t total_reads() const { return reads_; }
  std::uint64_t total_writes() const { return writes_; }
  std::uint64_t total_probes() const { return reads_ + writes_; }
  std::uint64_t setup_probes() const { return setup_probes_; }
  const std::vector<std::uint64_t>& per_arrival_probes() const {
    return per_arrival_;
  }

  const std::vector<ProbeRecord>& records() const { return records_; }

  ProbeLog take_log(std::uint64_t arrivals) {
    ProbeLog log;
    log.word_bits = word_bits_;
    log.arrivals = arrivals;
    log.records = std::move(records_);
    records_.clear();
    return log;
  }

  // ---- replay interception ---------------------------------------------
  //
  // gap_written, when provided, is the set of cells the original run wrote
  // during the skipped interval; a read that needs one of those cells but
  // finds it neither in the table nor rewritten since resume indicates a
  // broken information-transfer computation.

  void begin_interception(
      std::unordered_map<std::uint64_t, std::uint64_t> table,
      const std::unordered_set<std::uint64_t>* gap_written = nullptr) {
    intercepting_ = true;
    table_ = std::move(table);
    gap_written_ = gap_written;
    resume_written_.clear();
  }

  void end_interception() {
    intercepting_ = false;
    table_.clear();
    gap_written_ = nullptr;
    resume_written_.clear();
  }

 private:
  std::uint64_t raw(std::uint64_t addr) const {
    return addr < cells_.size() ? cells_[addr] : 0;  // never-written cells read 0
  }

  void check_addr(std::uint64_t addr) const {
    if (word_bits_ < 64 && addr > value_mask())
      throw std::invalid_argument("cell address does not fit word width");
  }

  void integrity_check_on_miss(std::uint64_t addr) const {
    if (gap_written_ && gap_written_->count(addr) &&
        !resume_written_.count(addr)) {
      throw std::runtime_error(
          "replay integrity failure: cell " + std::to_string(addr) +
          " was written during the skipped interval but is absent from the "
          "decoded information transfer");
    }
  }

  void account(ProbeKind kind, std::uint64_t addr, std::uint64_t value) {
    if (kind == ProbeKind::read) ++reads_; else ++writes_;
    if (now_ < 0) {
      ++setup_probes_;
    } else {
      const auto t = static_cast<std::size_t>(now_);
      if (t >= per_arrival_.size()) per_arrival_.resize(t + 1, 0);
      ++per_arrival_[t];
    }
    if (mode_ == StoreMode::instrumented)
      records_.push_back(ProbeRecord{now_, kind, addr, value});
  }

  std::uint32_t word_bits_;
  StoreMode mode_;
  std::vector<std::uint64_t> cells_;
  std::int64_t now_ = -1;

  std::uint64_t reads_ = 0, writes_ = 0, setup_probes_ = 0;
  std::vector<std::uint64_t> per_arrival_;
  std::vector<ProbeRecord> records_;

  bool intercepting_ = false;
  std::unordered_map<std::uint64_t, std::uint64_t> table_;
  const std::unordered_set<std::uint64_t>* gap_written_ = nullptr;
  std::unordered_set<std::uint64_t> resume_written_;
};

// ---- HPL1 probe log file format ----------------------------------------
//
// Little-endian binary: magic "HPL1", u32 word_bits, u64 arrivals,
// u64 record count, then per record: i64 t, u8 kind, u64 addr, u64 value.

namespace detail {

template <typename T>
void put_le(std::ostream& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::istream& in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c < 0) throw std::runtime_error("HPL1: truncated file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace detail

inline void write_probe_log(std::ostream& out, const ProbeLog& log) {
  out.write("HPL1", 4);
  detail::put_le<std::uint32_t>(out, log.word_bits);
  detail::put_le<std::uint64_t>(out, log.arrivals);
  detail::put_le<std::uint64_t>(out, log.records.size());
  for (const auto& r : log.records) {
    detail::put_le<std::int64_t>(out, r.t);
    detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(r.kind));
    detail::put_le<std::uint64_t>(out, r.addr);
    detail::put_le<std::uint64_t>(out, r.value);
  }
}

inline ProbeLog read_probe_log(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != "HPL1")
    throw std::runtime_error("not an HPL1 probe log (bad magic)");
  ProbeLog log;
  log.word_bits = detail::get_le<std::uint32_t>(in);
  log.arrivals = detail::get_le<std::uint64_t>(in);
  const auto count = detail::get_le<std::uint64_t>(in);
  log.records.reserve(count);
  std::int64_t prev_t = INT64_MIN;
  for (std::uint64_t i = 0; i < count; ++i) {
    ProbeRecord r;
    r.t = detail::get_le<std::int64_t>(in);
    r.kind = static_cast<ProbeKind>(detail::get_le<std::uint8_t>(in));
    r.addr = detail::get_le<std::uint64_t>(in);
    r.value = detail::get_le<std::uint64_t>(in);
    if (r.t < prev_t)
      throw std::runtime_error("HPL1: record timestamps must be non-decreasing");
    prev_t = r.t;
    log.records.push_back(r);
  }
  return log;
}

inline void save_probe_log(const std::string& path, const ProbeLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_probe_log(out, log);
}

inline ProbeLog load_probe_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open probe log: " + path);
  return read_probe_log(in);
}

}  // namespace hds
