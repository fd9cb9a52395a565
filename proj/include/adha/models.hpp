#pragma once

#include "adha/simulation.hpp"

namespace adha {

/// Two-mode heater: ON x' = -a (x - 30), OFF x' = -a x, both confined to
/// 18 <= x <= 22; ON -> OFF when x >= 21, OFF -> ON when x <= 19.
Adha heater_model(double a = 0.1);
SimConfig heater_sim_config(std::uint64_t seed = 0);

/// Four-gear chain on (v, w): each gear slows v and accumulates w; gears
/// shift at v = 20, 14 and 5 (detected within a 0.2-wide band below the
/// threshold so that fixed-step simulation can observe them).
Adha gearbox_model();
SimConfig gearbox_sim_config(std::uint64_t seed = 0);

}  // namespace adha
