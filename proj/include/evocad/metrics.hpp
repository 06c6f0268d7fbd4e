#pragma once

#include "evocad/metrics/distance.hpp"
#include "evocad/metrics/icp.hpp"
#include "evocad/metrics/kdtree.hpp"
#include "evocad/metrics/overlap.hpp"
#include "evocad/metrics/report.hpp"
#include "evocad/metrics/topology.hpp"
