#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "neurocactus/dynamics.hpp"
#include "neurocactus/graph.hpp"

namespace neurocactus {

// Minimal SVG line charts; convenience output, never an acceptance surface.

// x(t) per node with +-x_max guide lines when x_max is finite.
void write_state_svg(const std::filesystem::path& path, const Trajectory& traj);

// Weight trajectories per edge with the a_minus_lo / a_plus_hi guide lines.
void write_weights_svg(const std::filesystem::path& path, const Trajectory& traj,
                       const SignedGraph& g);

}  // namespace neurocactus
