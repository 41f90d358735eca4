#pragma once

#include "pdacache/budget.hpp"
#include "pdacache/compare.hpp"
#include "pdacache/constructions.hpp"
#include "pdacache/delivery.hpp"
#include "pdacache/errors.hpp"
#include "pdacache/gpda.hpp"
#include "pdacache/grid.hpp"
#include "pdacache/io.hpp"
#include "pdacache/ordering.hpp"
#include "pdacache/pda.hpp"
#include "pdacache/profile.hpp"
#include "pdacache/rate.hpp"
