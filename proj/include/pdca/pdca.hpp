#pragma once

#include "pdca/error.hpp"
#include "pdca/polycore.hpp"
#include "pdca/psdc.hpp"
#include "pdca/polyhedron.hpp"
#include "pdca/fdpg.hpp"
#include "pdca/linesearch.hpp"
#include "pdca/solvers.hpp"
#include "pdca/mvsk.hpp"
