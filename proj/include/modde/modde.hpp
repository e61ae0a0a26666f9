#pragma once

#include "modde/adaptation.hpp"
#include "modde/analysis.hpp"
#include "modde/bchm.hpp"
#include "modde/core.hpp"
#include "modde/crossover.hpp"
#include "modde/io.hpp"
#include "modde/mutation.hpp"
#include "modde/problems.hpp"
#include "modde/report.hpp"
#include "modde/runner.hpp"
