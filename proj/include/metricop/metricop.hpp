#pragma once

// Umbrella header: metric operators, the lattice of Hilbert spaces they
// generate, scales of spaces, similarity taxonomy, boundedness maps, form
// restriction, and the quasi-Hermitian transform, plus grid discretizations
// and the scenario-driven command line front end.

#include "metricop/errors.hpp"
#include "metricop/matrix.hpp"
#include "metricop/eigensolve.hpp"
#include "metricop/metric.hpp"
#include "metricop/lattice.hpp"
#include "metricop/grid.hpp"
#include "metricop/growth.hpp"
#include "metricop/scale.hpp"
#include "metricop/similarity.hpp"
#include "metricop/pip.hpp"
#include "metricop/pseudo.hpp"
#include "metricop/report.hpp"
#include "metricop/demos.hpp"
#include "metricop/cli.hpp"
