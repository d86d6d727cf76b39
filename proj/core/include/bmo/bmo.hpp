#pragma once

#include "bmo/concavity.hpp"
#include "bmo/error.hpp"
#include "bmo/extremals.hpp"
#include "bmo/geometry.hpp"
#include "bmo/induction.hpp"
#include "bmo/jn_bellman.hpp"
#include "bmo/martingale.hpp"
#include "bmo/osc_bellman.hpp"
#include "bmo/random.hpp"
#include "bmo/tree.hpp"
#include "bmo/types.hpp"
