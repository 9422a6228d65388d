#pragma once

#include "constants.hpp"
#include "errors.hpp"
#include "physparams.hpp"
#include "gaussdyn.hpp"
#include "quadrature.hpp"
#include "twomode.hpp"
#include "threemode.hpp"
#include "outputfield.hpp"
#include "sweep/config.hpp"
#include "sweep/presets.hpp"
#include "sweep/runner.hpp"
#include "sweep/emit.hpp"
