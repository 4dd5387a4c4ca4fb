#pragma once

#include "nehari/cone.hpp"
#include "nehari/config.hpp"
#include "nehari/energy.hpp"
#include "nehari/errors.hpp"
#include "nehari/green.hpp"
#include "nehari/grid.hpp"
#include "nehari/hypotheses.hpp"
#include "nehari/io.hpp"
#include "nehari/nehari_set.hpp"
#include "nehari/problem.hpp"
#include "nehari/sampling.hpp"
#include "nehari/solver.hpp"
#include "nehari/sweep.hpp"
#include "nehari/verify.hpp"
