#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eabr/channel.hpp"
#include "eabr/model.hpp"

namespace eabr::cli {

// "22M" -> 22e6, "650K" -> 650e3, "1G" -> 1e9, "4000000" -> 4e6.
double parse_bandwidth(std::string_view text);

struct ChannelSpec {
  enum class Kind { kConstant, kStaircase, kRandom, kTrace };

  Kind kind = Kind::kConstant;
  std::vector<double> values;  // bandwidths, bps
  StaircaseTurn turn = StaircaseTurn::kSingle;
  std::size_t block = kDefaultBlockLength;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string path;
};

// constant:<bw> | staircase[:<v1,v2,...>] | staircase-hold[:<v1,...>] |
// random[:values=<v1,...>,block=<n>,seed=<n>] | trace:<path>
ChannelSpec parse_channel_spec(std::string_view text);

ChannelTrace make_trace(const ChannelSpec& spec, std::size_t n_segments, double segment_duration);

// Preset label, "a,b,c", or "<file>.json[#combination]".
ModelParams resolve_params(std::string_view text);

// Runs the command line; returns the process exit code. Diagnostics go to
// `err`, primary output to files or `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eabr::cli
