#pragma once

// Umbrella header for the library. The command-line layer lives in
// resetting/cli.hpp and is not included here.

#include "resetting/eigen1d.hpp"
#include "resetting/eigen_radial.hpp"
#include "resetting/error.hpp"
#include "resetting/mc.hpp"
#include "resetting/quadrature.hpp"
#include "resetting/rng.hpp"
#include "resetting/roots.hpp"
#include "resetting/special.hpp"
#include "resetting/speed.hpp"
#include "resetting/target.hpp"
