#pragma once

#include "evocad/csg/compile.hpp"
#include "evocad/csg/polygon.hpp"
#include "evocad/csg/program.hpp"
