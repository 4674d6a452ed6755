#include "eabr/channel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "eabr/csv.hpp"
#include "eabr/error.hpp"

namespace eabr {

ChannelTrace::ChannelTrace(std::vector<double> bandwidths, double period_duration)
    : bandwidths_(std::move(bandwidths)), period_duration_(period_duration) {
  if (bandwidths_.empty()) throw ValidationError("channel trace is empty");
  if (!(period_duration_ > 0.0) || !std::isfinite(period_duration_)) {
    throw ValidationError("period duration must be positive");
  }
  for (std::size_t i = 0; i < bandwidths_.size(); ++i) {
    if (!(bandwidths_[i] > 0.0) || !std::isfinite(bandwidths_[i])) {
      throw ValidationError(fmt::format("bandwidth at period {} must be positive (got {})", i, bandwidths_[i]));
    }
  }
}

ChannelTrace constant(double bandwidth, std::size_t n_periods, double period_duration) {
  if (n_periods == 0) throw ValidationError("n_periods must be at least 1");
  return ChannelTrace(std::vector<double>(n_periods, bandwidth), period_duration);
}

ChannelTrace staircase(std::span<const double> values, std::size_t n_periods, StaircaseTurn turn,
                       double period_duration) {
  if (values.size() < 2) throw ValidationError("staircase needs at least two values");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ValidationError("staircase values must be strictly increasing");
  }
  if (n_periods == 0) throw ValidationError("n_periods must be at least 1");

  std::vector<double> cycle(values.begin(), values.end());
  if (turn == StaircaseTurn::kSingle) {
    for (std::size_t i = values.size() - 1; i-- > 1;) cycle.push_back(values[i]);
  } else {
    for (std::size_t i = values.size(); i-- > 0;) cycle.push_back(values[i]);
  }

  std::vector<double> out(n_periods);
  for (std::size_t t = 0; t < n_periods; ++t) out[t] = cycle[t % cycle.size()];
  return ChannelTrace(std::move(out), period_duration);
}

ChannelTrace random_blocks(std::span<const double> values, std::size_t block_len, std::size_t n_periods,
                           std::uint64_t seed, double period_duration) {
  if (values.empty()) throw ValidationError("random channel needs at least one value");
  if (block_len == 0) throw ValidationError("block length must be at least 1");
  if (n_periods == 0) throw ValidationError("n_periods must be at least 1");

  Lcg64 rng(seed);
  std::vector<double> out(n_periods);
  double current = 0.0;
  for (std::size_t t = 0; t < n_periods; ++t) {
    if (t % block_len == 0) current = values[rng.next_index(values.size())];
    out[t] = current;
  }
  return ChannelTrace(std::move(out), period_duration);
}

ChannelTrace load_trace(std::string_view text, double period_duration) {
  const auto rows = csv::read(text, {"period", "bandwidth_bps"});
  std::vector<double> bw;
  bw.reserve(rows.size());
  for (const auto& row : rows) {
    const auto period = csv::parse_int(row, 0, "period");
    const auto expected = static_cast<std::int64_t>(bw.size());
    if (period < expected) throw ParseError(row.line, fmt::format("duplicate or out-of-order period {}", period));
    if (period > expected) throw ParseError(row.line, fmt::format("gap at period {}", expected));
    const double value = csv::parse_double(row, 1, "bandwidth_bps");
    if (!(value > 0.0)) throw ParseError(row.line, fmt::format("non-positive bandwidth {}", value));
    bw.push_back(value);
  }
  if (bw.empty()) throw ParseError(0, "trace has no periods");
  return ChannelTrace(std::move(bw), period_duration);
}

std::string serialize_trace(const ChannelTrace& trace) {
  std::string out = "period,bandwidth_bps\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out += fmt::format("{},{}\n", i, trace[i]);
  return out;
}

std::vector<double> standard_channel_levels() { return {1e6, 4e6, 7e6, 10e6, 13e6, 16e6, 19e6, 22e6}; }

}  // namespace eabr
