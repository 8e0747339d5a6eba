#pragma once

// Append-only bit string with exact bit length, used for the information
// transfer encoding.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hds {

class BitString {
 public:
  std::size_t bit_size() const { return bits_; }

  void append(std::uint64_t value, std::uint32_t width) {
    if (width == 0 || width > 64)
      throw std::invalid_argument("bit field width must be in [1, 64]");
    if (width < 64 && (value >> width) != 0)
      throw std::invalid_argument("bit field value does not fit its width");
    for (std::uint32_t k = 0; k < width; ++k) {
      const std::size_t pos = bits_ + k;
      if (pos / 64 >= words_.size()) words_.push_back(0);
      if ((value >> k) & 1u) words_[pos / 64] |= (std::uint64_t{1} << (pos % 64));
    }
    bits_ += width;
  }

  std::uint64_t slice(std::size_t pos, std::uint32_t width) const {
    if (width == 0 || width > 64 || pos + width > bits_)
      throw std::out_of_range("bit slice out of range");
    std::uint64_t value = 0;
    for (std::uint32_t k = 0; k < width; ++k) {
      const std::size_t p = pos + k;
      if ((words_[p / 64] >> (p % 64)) & 1u) value |= (std::uint64_t{1} << k);
    }
    return value;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_ = 0;
};

}  // namespace hds
