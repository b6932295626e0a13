#pragma once

#include "algebra.hpp"
#include "color.hpp"
#include "config.hpp"
#include "error.hpp"
#include "evaluator.hpp"
#include "geometry.hpp"
#include "interval_index.hpp"
#include "lang.hpp"
#include "motion.hpp"
#include "refine.hpp"
#include "report.hpp"
#include "scene.hpp"
#include "svg.hpp"
#include "synth.hpp"
#include "tensor.hpp"
#include "verify.hpp"
