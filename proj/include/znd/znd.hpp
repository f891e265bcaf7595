#pragma once

#include "znd/contour.hpp"
#include "znd/errors.hpp"
#include "znd/evans.hpp"
#include "znd/lopatinski.hpp"
#include "znd/ode.hpp"
#include "znd/params.hpp"
#include "znd/profile.hpp"
#include "znd/quadrature.hpp"
#include "znd/random.hpp"
#include "znd/report.hpp"
#include "znd/simulation.hpp"
#include "znd/stability.hpp"
