#pragma once

#include "evocad/evolve/config.hpp"
#include "evocad/evolve/individual.hpp"
#include "evocad/evolve/operators.hpp"
#include "evocad/evolve/run.hpp"
#include "evocad/evolve/selection.hpp"
#include "evocad/evolve/trace.hpp"
