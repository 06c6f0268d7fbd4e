#pragma once

#include "evocad/lm/backend.hpp"
#include "evocad/lm/extract.hpp"
#include "evocad/lm/fewshot.hpp"
#include "evocad/lm/message.hpp"
#include "evocad/lm/mock.hpp"
#include "evocad/lm/prompts.hpp"
#include "evocad/lm/ranking.hpp"
#include "evocad/lm/wire.hpp"
