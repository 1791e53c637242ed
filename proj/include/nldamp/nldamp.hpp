#pragma once

#include "nldamp/analysis.hpp"
#include "nldamp/controllers.hpp"
#include "nldamp/experiments.hpp"
#include "nldamp/integrator.hpp"
#include "nldamp/io.hpp"
#include "nldamp/model.hpp"
