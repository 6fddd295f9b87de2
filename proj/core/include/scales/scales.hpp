#pragma once

#include "scales/covering.hpp"
#include "scales/errors.hpp"
#include "scales/estimators.hpp"
#include "scales/functional.hpp"
#include "scales/measure.hpp"
#include "scales/metric_space.hpp"
#include "scales/parallel.hpp"
#include "scales/product_space.hpp"
#include "scales/rng.hpp"
#include "scales/scale_estimate.hpp"
#include "scales/scaling.hpp"
#include "scales/theorems.hpp"
#include "scales/wiener.hpp"
