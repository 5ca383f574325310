#include "logdet/rng.hpp"

namespace logdet {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

CounterStream::CounterStream(std::uint64_t seed) noexcept : seed_(seed) {}

std::array<std::uint64_t, 2> CounterStream::bits(std::uint64_t row, std::uint64_t col,
                                                 std::uint64_t lane) const noexcept {
  // Row and column indices stay below 2^32 for any matrix we can store.
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(col), static_cast<std::uint32_t>(row),
      static_cast<std::uint32_t>(lane), static_cast<std::uint32_t>(lane >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32(ctr, key);
  return {(static_cast<std::uint64_t>(out[0]) << 32) | out[1],
          (static_cast<std::uint64_t>(out[2]) << 32) | out[3]};
}

std::array<double, 2> CounterStream::uniforms(std::uint64_t row, std::uint64_t col,
                                              std::uint64_t lane) const noexcept {
  const auto b = bits(row, col, lane);
  return {to_open_unit(b[0]), to_open_unit(b[1])};
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
  const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(tag),
                                            static_cast<std::uint32_t>(tag >> 32), 0x5EEDu,
                                            0xD1CEu};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(parent),
                                            static_cast<std::uint32_t>(parent >> 32)};
  const auto out = philox4x32(ctr, key);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace logdet
