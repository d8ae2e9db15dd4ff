#pragma once

// Umbrella header.

#include "hdich/checkers.hpp"
#include "hdich/construct.hpp"
#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"
#include "hdich/growth_rate.hpp"
#include "hdich/matrix_ops.hpp"
#include "hdich/ode.hpp"
#include "hdich/projection_family.hpp"
#include "hdich/rescale.hpp"
#include "hdich/sigma_grid.hpp"
#include "hdich/sphere_search.hpp"
#include "hdich/systems.hpp"
#include "hdich/version.hpp"
