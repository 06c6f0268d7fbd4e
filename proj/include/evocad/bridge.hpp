#pragma once

#include "evocad/bridge/engine.hpp"
#include "evocad/bridge/external.hpp"
