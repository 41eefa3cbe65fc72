#pragma once

#include "ncg/canonical.hpp"
#include "ncg/constructions.hpp"
#include "ncg/cost.hpp"
#include "ncg/dynamics.hpp"
#include "ncg/equilibrium.hpp"
#include "ncg/game.hpp"
#include "ncg/graph.hpp"
#include "ncg/io.hpp"
#include "ncg/metrics.hpp"
#include "ncg/parallel.hpp"
#include "ncg/rational.hpp"
#include "ncg/workbench.hpp"
