#pragma once

// Umbrella header: downlink coverage probability of mmWave UAV networks,
// analytic (nested adaptive quadrature) and Monte Carlo.

#include "uavcov/analytic.hpp"
#include "uavcov/channel.hpp"
#include "uavcov/config.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/parallel.hpp"
#include "uavcov/quadrature.hpp"
#include "uavcov/rng.hpp"
#include "uavcov/special_functions.hpp"
#include "uavcov/sweep.hpp"
