#pragma once

// Umbrella header for the solver library.

#include "rsf/errors.hpp"
#include "rsf/model.hpp"
#include "rsf/grid.hpp"
#include "rsf/linalg.hpp"
#include "rsf/flow_rule.hpp"
#include "rsf/aging_step.hpp"
#include "rsf/steady.hpp"
#include "rsf/limit.hpp"
#include "rsf/evolve_full.hpp"
#include "rsf/evolve_simplified.hpp"
#include "rsf/slider.hpp"
