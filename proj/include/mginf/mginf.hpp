#pragma once

// Umbrella header: the whole library in one include.

#include "busy_cycle.hpp"
#include "busy_period.hpp"
#include "cli.hpp"
#include "convolution.hpp"
#include "errors.hpp"
#include "grid_function.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "root_finding.hpp"
#include "series.hpp"
#include "service_law.hpp"
#include "simulator.hpp"
#include "text_io.hpp"
#include "tolerance.hpp"
#include "validation.hpp"
