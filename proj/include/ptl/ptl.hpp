#pragma once

#include "ptl/cli.hpp"
#include "ptl/dominance.hpp"
#include "ptl/env.hpp"
#include "ptl/env_io.hpp"
#include "ptl/front.hpp"
#include "ptl/policy.hpp"
#include "ptl/report.hpp"
#include "ptl/sim.hpp"
#include "ptl/svg.hpp"
#include "ptl/tedi.hpp"
#include "ptl/trajspace.hpp"
#include "ptl/traps.hpp"
