#pragma once

#include "famplan/analysis.hpp"
#include "famplan/brute_force.hpp"
#include "famplan/core.hpp"
#include "famplan/errors.hpp"
#include "famplan/montecarlo.hpp"
#include "famplan/polynomial.hpp"
#include "famplan/random.hpp"
#include "famplan/rational_function.hpp"
#include "famplan/series.hpp"
#include "famplan/share.hpp"
#include "famplan/symbolic.hpp"
