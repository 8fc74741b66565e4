#pragma once

#include "lwmi/boolean_engine.hpp"
#include "lwmi/errors.hpp"
#include "lwmi/formula.hpp"
#include "lwmi/geometry.hpp"
#include "lwmi/integrate.hpp"
#include "lwmi/json_exact.hpp"
#include "lwmi/measures.hpp"
#include "lwmi/montecarlo.hpp"
#include "lwmi/oracle.hpp"
#include "lwmi/poly_integration.hpp"
#include "lwmi/polynomial.hpp"
#include "lwmi/problem_io.hpp"
#include "lwmi/rational.hpp"
#include "lwmi/region.hpp"
#include "lwmi/universe.hpp"
#include "lwmi/weight.hpp"
#include "lwmi/wmi.hpp"
