#pragma once

#include <array>
#include <cstdint>

namespace logdet {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Stateless: output is a pure function of
/// (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream keyed by a 64-bit seed.
///
/// Every draw is addressed by a (row, col, lane) triple, so values never
/// depend on evaluation order or thread scheduling.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) noexcept;

  /// 128 random bits for the given address.
  std::array<std::uint64_t, 2> bits(std::uint64_t row, std::uint64_t col,
                                    std::uint64_t lane = 0) const noexcept;

  /// Two independent uniforms on the open interval (0, 1).
  std::array<double, 2> uniforms(std::uint64_t row, std::uint64_t col,
                                 std::uint64_t lane = 0) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Maps 64 random bits to (0, 1); never returns 0 or 1.
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Child seed for a sub-stream (trial index, purpose tag, ...).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept;

/// Purpose tags used when one trial needs several independent streams.
enum class StreamTag : std::uint64_t {
  kMatrix = 0,
  kPerturbation = 1,
  kReplacement = 2,
  kChiSquare = 3,
  kFreshRows = 4,
};

inline std::uint64_t derive_seed(std::uint64_t parent, StreamTag tag) noexcept {
  return derive_seed(parent, 0xA5A5'0000'0000'0000ULL | static_cast<std::uint64_t>(tag));
}

}  // namespace logdet
