#ifndef TWOLEVEL_TWOLEVEL_HPP
#define TWOLEVEL_TWOLEVEL_HPP

#include "analytic.hpp"
#include "core.hpp"
#include "hydrogen.hpp"
#include "integrator.hpp"
#include "io.hpp"
#include "pulses.hpp"

#endif  // TWOLEVEL_TWOLEVEL_HPP
