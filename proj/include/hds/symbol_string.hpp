#pragma once

// delta-bit alphabets, symbol strings, per-alignment count arrays and the
// HDS1 text serialization format.

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hds {

struct AlphabetSpec {
  std::uint32_t delta = 1;  // bits per symbol

  std::uint64_t size() const { return std::uint64_t{1} << delta; }
  bool contains(std::uint64_t symbol) const { return symbol < size(); }

  friend bool operator==(const AlphabetSpec&, const AlphabetSpec&) = default;
};

// Symbols are stored as plain integers; delta is capped so any symbol fits
// a 32-bit value with room for one internal widening bit.
inline AlphabetSpec make_alphabet(std::uint32_t delta) {
  if (delta < 1 || delta > 30)
    throw std::invalid_argument("alphabet delta must be in [1, 30]");
  return AlphabetSpec{delta};
}

class SymbolString {
 public:
  SymbolString() = default;

  SymbolString(AlphabetSpec alphabet, std::vector<std::uint32_t> symbols)
      : alphabet_(alphabet), symbols_(std::move(symbols)) {
    for (std::uint32_t s : symbols_) {
      if (!alphabet_.contains(s))
        throw std::invalid_argument("symbol value exceeds alphabet size");
    }
  }

  static SymbolString filled(AlphabetSpec alphabet, std::size_t len,
                             std::uint32_t symbol) {
    return SymbolString(alphabet,
                        std::vector<std::uint32_t>(len, symbol));
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const AlphabetSpec& alphabet() const { return alphabet_; }
  std::uint32_t operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const std::uint32_t> symbols() const { return symbols_; }

  SymbolString substr(std::size_t pos, std::size_t len) const {
    if (pos + len > symbols_.size())
      throw std::out_of_range("substring exceeds string length");
    return SymbolString(
        alphabet_, std::vector<std::uint32_t>(symbols_.begin() + pos,
                                              symbols_.begin() + pos + len));
  }

  friend bool operator==(const SymbolString&, const SymbolString&) = default;

 private:
  AlphabetSpec alphabet_;
  std::vector<std::uint32_t> symbols_;
};

// One count per alignment.
using CountArray = std::vector<std::uint32_t>;

// ---- HDS1 serialization ----------------------------------------------
//
//   HDS1
//   delta=<k>
//   len=<n>
//   <n whitespace-separated decimal symbol values>

inline void write_symbol_string(std::ostream& out, const SymbolString& s) {
  out << "HDS1\n";
  out << "delta=" << s.alphabet().delta << "\n";
  out << "len=" << s.size() << "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << s[i];
    out << (((i + 1) % 32 == 0 || i + 1 == s.size()) ? '\n' : ' ');
  }
}

inline SymbolString read_symbol_string(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != "HDS1")
    throw std::runtime_error("not an HDS1 string file (bad magic)");

  auto read_field = [&](const std::string& key) -> std::uint64_t {
    std::string tok;
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
      throw std::runtime_error("HDS1: expected " + key + "=<value>");
    return std::stoull(tok.substr(key.size() + 1));
  };

  const auto delta = static_cast<std::uint32_t>(read_field("delta"));
  const std::uint64_t len = read_field("len");
  AlphabetSpec alphabet = make_alphabet(delta);

  std::vector<std::uint32_t> symbols;
  symbols.reserve(len);
  for (std::uint64_t i = 0; i < len; ++i) {
    std::uint64_t v;
    if (!(in >> v)) throw std::runtime_error("HDS1: truncated symbol list");
    if (!alphabet.contains(v))
      throw std::runtime_error("HDS1: symbol value exceeds alphabet size");
    symbols.push_back(static_cast<std::uint32_t>(v));
  }
  return SymbolString(alphabet, std::move(symbols));
}

inline void save_symbol_string(const std::string& path,
                               const SymbolString& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_symbol_string(out, s);
}

inline SymbolString load_symbol_string(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open string file: " + path);
  return read_symbol_string(in);
}

}  // namespace hds
