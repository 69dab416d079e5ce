#pragma once

#include "mdlhist/artifact.hpp"
#include "mdlhist/benchmark.hpp"
#include "mdlhist/criteria.hpp"
#include "mdlhist/dataset.hpp"
#include "mdlhist/densities.hpp"
#include "mdlhist/grid.hpp"
#include "mdlhist/hellinger.hpp"
#include "mdlhist/logcomb.hpp"
#include "mdlhist/model.hpp"
#include "mdlhist/rng.hpp"
#include "mdlhist/search.hpp"
