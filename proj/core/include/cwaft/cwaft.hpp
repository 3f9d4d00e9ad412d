#pragma once

#include "cwaft/bootstrap.hpp"
#include "cwaft/curves.hpp"
#include "cwaft/em.hpp"
#include "cwaft/error.hpp"
#include "cwaft/model.hpp"
#include "cwaft/numerics.hpp"
#include "cwaft/selection.hpp"
#include "cwaft/sim.hpp"
