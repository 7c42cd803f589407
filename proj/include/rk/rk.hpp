#pragma once

// Umbrella header for the whole toolkit.

#include "rk/analysis.hpp"
#include "rk/csv.hpp"
#include "rk/elliptic.hpp"
#include "rk/errors.hpp"
#include "rk/harness.hpp"
#include "rk/integrate.hpp"
#include "rk/linalg.hpp"
#include "rk/parallel.hpp"
#include "rk/problems.hpp"
#include "rk/qc2.hpp"
#include "rk/rational.hpp"
#include "rk/table_report.hpp"
#include "rk/tableau.hpp"
#include "rk/tableau_io.hpp"
#include "rk/trees.hpp"
