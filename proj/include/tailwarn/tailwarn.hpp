#pragma once

#include "tailwarn/config.hpp"
#include "tailwarn/density.hpp"
#include "tailwarn/dynamics.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/estimator.hpp"
#include "tailwarn/experiments.hpp"
#include "tailwarn/io.hpp"
#include "tailwarn/noise.hpp"
#include "tailwarn/parallel.hpp"
#include "tailwarn/rng.hpp"
#include "tailwarn/simulate.hpp"
#include "tailwarn/stats.hpp"
#include "tailwarn/version.hpp"
