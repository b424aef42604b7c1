#pragma once

// Everything in one include.

#include "linksynth/format.hpp"
#include "linksynth/geometry.hpp"
#include "linksynth/linkage.hpp"
#include "linksynth/linkage_json.hpp"
#include "linksynth/metrics.hpp"
#include "linksynth/seed.hpp"
#include "linksynth/targets.hpp"

#include "linksynth/lifting/bundle.hpp"

#include "linksynth/optim/enum_ga.hpp"
#include "linksynth/optim/ga.hpp"
#include "linksynth/optim/grid.hpp"
#include "linksynth/optim/pipeline.hpp"
#include "linksynth/optim/pso.hpp"
#include "linksynth/optim/topologies.hpp"

#include "linksynth/agents/loop.hpp"
#include "linksynth/agents/remote.hpp"
#include "linksynth/agents/scripted.hpp"

#include "linksynth/harness/baseline.hpp"
#include "linksynth/harness/config.hpp"
#include "linksynth/harness/report.hpp"
#include "linksynth/harness/run.hpp"
#include "linksynth/harness/stats.hpp"
#include "linksynth/harness/svg.hpp"
