#pragma once

// Umbrella header for the dpkl library: discrete distribution estimation
// under KL loss, with and without differential privacy.

#include "dpkl/bounds.hpp"
#include "dpkl/data_io.hpp"
#include "dpkl/error.hpp"
#include "dpkl/estimators.hpp"
#include "dpkl/eval.hpp"
#include "dpkl/sampling.hpp"
#include "dpkl/sweep.hpp"
#include "dpkl/types.hpp"
