#pragma once

#include "focuseval/errors.hpp"
#include "focuseval/focus.hpp"
#include "focuseval/grid.hpp"
#include "focuseval/metrics.hpp"
#include "focuseval/oracles.hpp"
#include "focuseval/pipeline.hpp"
#include "focuseval/questions.hpp"
#include "focuseval/questions_io.hpp"
#include "focuseval/report.hpp"
#include "focuseval/scene.hpp"
#include "focuseval/scene_io.hpp"
