#pragma once

// Umbrella header: the full toolkit in dependency order.

#include "prequant/common.hpp"
#include "prequant/errors.hpp"
#include "prequant/chart.hpp"
#include "prequant/scalar_field.hpp"
#include "prequant/form.hpp"
#include "prequant/quadrature.hpp"
#include "prequant/calculus.hpp"
#include "prequant/smooth_map.hpp"
#include "prequant/integrate.hpp"
#include "prequant/symplectic.hpp"
#include "prequant/primitives.hpp"
#include "prequant/flow.hpp"
#include "prequant/darboux.hpp"
#include "prequant/averaging.hpp"
#include "prequant/path.hpp"
#include "prequant/connection.hpp"
#include "prequant/holonomy.hpp"
#include "prequant/gauge.hpp"
#include "prequant/fibration.hpp"
#include "prequant/spectrum.hpp"
#include "prequant/experiments.hpp"
#include "prequant/config.hpp"
#include "prequant/report.hpp"
#include "prequant/scenarios.hpp"
