#pragma once

#include "evocad/geometry/mesh.hpp"
#include "evocad/geometry/normalize.hpp"
#include "evocad/geometry/sampling.hpp"
#include "evocad/geometry/stl.hpp"
#include "evocad/geometry/vec3.hpp"
#include "evocad/geometry/voxel.hpp"
