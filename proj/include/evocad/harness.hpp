#pragma once

#include "evocad/harness/aggregate.hpp"
#include "evocad/harness/dataset.hpp"
#include "evocad/harness/evaluate.hpp"
#include "evocad/harness/output.hpp"
