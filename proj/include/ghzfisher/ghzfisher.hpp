#pragma once

#include "ghzfisher/chart.hpp"
#include "ghzfisher/crb.hpp"
#include "ghzfisher/errors.hpp"
#include "ghzfisher/fisher_matrix.hpp"
#include "ghzfisher/ghz_state.hpp"
#include "ghzfisher/io.hpp"
#include "ghzfisher/measurement.hpp"
#include "ghzfisher/montecarlo.hpp"
#include "ghzfisher/qfim.hpp"
#include "ghzfisher/reparam.hpp"
