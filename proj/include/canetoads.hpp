#pragma once

// Umbrella header.

#include "canetoads/errors.hpp"
#include "canetoads/diffusion.hpp"
#include "canetoads/region.hpp"
#include "canetoads/grid.hpp"
#include "canetoads/config.hpp"
#include "canetoads/config_io.hpp"
#include "canetoads/rd_solver.hpp"
#include "canetoads/hj_solver.hpp"
#include "canetoads/path_optimizer.hpp"
#include "canetoads/front.hpp"
#include "canetoads/io.hpp"
#include "canetoads/experiment.hpp"
#include "canetoads/properties.hpp"
#include "canetoads/acceptance.hpp"
