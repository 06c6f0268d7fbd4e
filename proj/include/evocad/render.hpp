#pragma once

#include "evocad/render/image.hpp"
#include "evocad/render/png.hpp"
#include "evocad/render/raster.hpp"
