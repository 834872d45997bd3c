#pragma once

#include "grwalk/experiment/config.hpp"
#include "grwalk/experiment/runner.hpp"
#include "grwalk/experiment/scenarios.hpp"
