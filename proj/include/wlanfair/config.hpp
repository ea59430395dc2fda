#pragma once

#include <string>

#include "wlanfair/sweep.hpp"

namespace wlanfair {

// Loads a sweep specification from a small TOML-style file:
//
//   [scenario]
//   name = "s1"        # optional, default "custom"
//   up = 1             # required
//   down = 1           # required
//   window = 42        # optional
//   rtt = 0.1          # optional
//
//   [sweep]
//   buffers = [5, 20, 84]                  # required, strictly ascending
//   variants = ["new_cubic", "simulation"] # optional, default all four
//   seeds = [1, 2, 3, 4, 5]                # optional
//
//   [sim]
//   duration = 100.0   # all optional
//   warmup = 0.0
//   wireless_rate = 11e6
//   data_frame = 1040
//   ack_frame = 40
//   wired_delay = 1e-3
//
// Unknown sections or keys, malformed values and violated invariants all
// raise ConfigError with file and line.
SweepSpec load_config(const std::string& path);

}  // namespace wlanfair
