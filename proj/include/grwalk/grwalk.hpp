#pragma once

#include "grwalk/errors.hpp"
#include "grwalk/finite_group.hpp"
#include "grwalk/group.hpp"
#include "grwalk/induced_affine.hpp"
#include "grwalk/measure.hpp"
#include "grwalk/mixing.hpp"
#include "grwalk/padic.hpp"
#include "grwalk/rational.hpp"
#include "grwalk/representation.hpp"
#include "grwalk/walk.hpp"
