#pragma once

#include "tsnsim/analytics.hpp"
#include "tsnsim/clock.hpp"
#include "tsnsim/config.hpp"
#include "tsnsim/delays.hpp"
#include "tsnsim/engine.hpp"
#include "tsnsim/experiments.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/network.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/shapers.hpp"
#include "tsnsim/simulation.hpp"
#include "tsnsim/time.hpp"
#include "tsnsim/topology.hpp"
#include "tsnsim/traffic.hpp"
