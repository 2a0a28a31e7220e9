#pragma once

#include "aoi/burstiness.hpp"
#include "aoi/error.hpp"
#include "aoi/experiments.hpp"
#include "aoi/fbl_phy.hpp"
#include "aoi/markov_core.hpp"
#include "aoi/montecarlo.hpp"
#include "aoi/policy_io.hpp"
#include "aoi/policy_opt.hpp"
#include "aoi/random.hpp"
#include "aoi/scenario.hpp"
#include "aoi/state_space.hpp"
#include "aoi/table2_reference.hpp"
