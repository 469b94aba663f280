// sqzmet.hpp — umbrella header

#pragma once

#include "sqzmet/physics.hpp"
#include "sqzmet/spectral.hpp"
#include "sqzmet/lindblad.hpp"
#include "sqzmet/qfi.hpp"
#include "sqzmet/metrics.hpp"
#include "sqzmet/parallel.hpp"
#include "sqzmet/phase_matching.hpp"
#include "sqzmet/figures.hpp"
#include "sqzmet/csv.hpp"
