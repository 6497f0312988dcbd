#pragma once

#include "thinfilm/bounds.hpp"
#include "thinfilm/config.hpp"
#include "thinfilm/error.hpp"
#include "thinfilm/evolve.hpp"
#include "thinfilm/functionals.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/imaging.hpp"
#include "thinfilm/nonlinear.hpp"
#include "thinfilm/pgm.hpp"
#include "thinfilm/presets.hpp"
#include "thinfilm/schedule.hpp"
#include "thinfilm/spectral.hpp"
#include "thinfilm/tff.hpp"
