#pragma once

#include "config.hpp"
#include "constants.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "exact.hpp"
#include "figures.hpp"
#include "grid.hpp"
#include "hamiltonian.hpp"
#include "io.hpp"
#include "observables.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "scenario.hpp"
#include "specfun.hpp"
#include "validation.hpp"
