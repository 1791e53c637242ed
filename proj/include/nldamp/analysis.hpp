#pragma once

#include "nldamp/analysis/convergence.hpp"
#include "nldamp/analysis/grid.hpp"
#include "nldamp/analysis/lyapunov.hpp"
#include "nldamp/analysis/metrics.hpp"
#include "nldamp/analysis/passivity.hpp"
#include "nldamp/analysis/saturation.hpp"
