#pragma once

#include "vacuous/calibration.hpp"
#include "vacuous/error.hpp"
#include "vacuous/geometry.hpp"
#include "vacuous/inference.hpp"
#include "vacuous/model.hpp"
#include "vacuous/random.hpp"
#include "vacuous/specfun.hpp"
#include "vacuous/tables.hpp"
