#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eabr {

inline constexpr double kDefaultPeriodSeconds = 6.0;
inline constexpr std::size_t kDefaultBlockLength = 10;

// Available bandwidth (bps) per fixed-length period.
class ChannelTrace {
 public:
  // Throws ValidationError when empty, a bandwidth is not positive, or the
  // period duration is not positive.
  explicit ChannelTrace(std::vector<double> bandwidths, double period_duration = kDefaultPeriodSeconds);

  double period_duration() const noexcept { return period_duration_; }
  std::size_t size() const noexcept { return bandwidths_.size(); }
  double operator[](std::size_t i) const { return bandwidths_[i]; }
  std::span<const double> bandwidths() const noexcept { return bandwidths_; }

  friend bool operator==(const ChannelTrace&, const ChannelTrace&) = default;

 private:
  std::vector<double> bandwidths_;
  double period_duration_;
};

// 64-bit LCG: state' = state * 6364136223846793005 + 1442695040888963407.
// Seeded directly with the given value.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  // floor(n * (top 32 bits / 2^32)), uniform over [0, n).
  std::size_t next_index(std::size_t n) noexcept {
    const std::uint64_t top = next() >> 32;
    return static_cast<std::size_t>((top * static_cast<std::uint64_t>(n)) >> 32);
  }

 private:
  std::uint64_t state_;
};

// How the staircase turns at its extremes.
enum class StaircaseTurn {
  kSingle,  // ..., 19, 22, 19, ...  (cycle 2k-2)
  kHold,    // ..., 19, 22, 22, 19, ..., 4, 1, 1, 4, ...  (cycle 2k)
};

ChannelTrace constant(double bandwidth, std::size_t n_periods, double period_duration = kDefaultPeriodSeconds);

// Triangular wave up through `values` and back down, truncated to n_periods.
// `values` must be strictly increasing with at least two entries.
ChannelTrace staircase(std::span<const double> values, std::size_t n_periods,
                       StaircaseTurn turn = StaircaseTurn::kSingle, double period_duration = kDefaultPeriodSeconds);

// One uniformly drawn value per block of `block_len` periods, using Lcg64.
ChannelTrace random_blocks(std::span<const double> values, std::size_t block_len, std::size_t n_periods,
                           std::uint64_t seed, double period_duration = kDefaultPeriodSeconds);

// CSV header: period,bandwidth_bps. Periods must run 0..n-1 in order.
ChannelTrace load_trace(std::string_view text, double period_duration = kDefaultPeriodSeconds);
std::string serialize_trace(const ChannelTrace& trace);

// 1, 4, 7, ..., 22 Mbps: the capacity levels of the simulated channels.
std::vector<double> standard_channel_levels();

}  // namespace eabr
