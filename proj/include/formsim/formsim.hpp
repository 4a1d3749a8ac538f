#pragma once

#include "formsim/angles.hpp"
#include "formsim/controller.hpp"
#include "formsim/csv.hpp"
#include "formsim/dynamics.hpp"
#include "formsim/estimator.hpp"
#include "formsim/formation.hpp"
#include "formsim/harness.hpp"
#include "formsim/lyapunov.hpp"
#include "formsim/metrics.hpp"
#include "formsim/profile.hpp"
#include "formsim/report.hpp"
#include "formsim/scenario.hpp"
#include "formsim/simlog.hpp"
#include "formsim/svg.hpp"
