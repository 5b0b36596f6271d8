// Umbrella header.
#ifndef TIADC_TIADC_HPP
#define TIADC_TIADC_HPP

#include "tiadc/analytic.hpp"
#include "tiadc/calibration.hpp"
#include "tiadc/core.hpp"
#include "tiadc/dft.hpp"
#include "tiadc/montecarlo.hpp"
#include "tiadc/simulator.hpp"
#include "tiadc/statistics.hpp"

#endif // TIADC_TIADC_HPP
