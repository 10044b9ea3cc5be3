#pragma once

#include "onephase/config.hpp"
#include "onephase/freeboundary.hpp"

// Orchestrates profile -> domain -> relax(u1) -> seed U2 -> relax(u2) ->
// path -> minimax -> extract -> fit -> blowup at desk scale, writing all
// artifacts under cfg.out_dir. Deterministic for a fixed config.

namespace onephase {

PipelineReport run_pipeline(const RunConfig& cfg);

}  // namespace onephase
