#pragma once

// Umbrella header for the numerical library (the CLI lives in lzsm/cli.hpp).

#include "lzsm/adiabatic.hpp"
#include "lzsm/analysis.hpp"
#include "lzsm/errors.hpp"
#include "lzsm/majorana.hpp"
#include "lzsm/model.hpp"
#include "lzsm/oracle.hpp"
#include "lzsm/quadrature.hpp"
#include "lzsm/special.hpp"
#include "lzsm/zener.hpp"
