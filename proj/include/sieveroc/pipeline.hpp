#pragma once

#include "sieveroc/data.hpp"
#include "sieveroc/optimizer.hpp"
#include "sieveroc/sieve.hpp"

namespace sieveroc {

struct PipelineOptions {
  int order = 3;           // cubic integrated splines, quadratic density splines
  int interior_knots = 0;  // 0: closest integer to n^(1/3)
};

// The data-driven interior knot count.
int default_interior_knots(int n);

// The full estimation pipeline: interior knots at quantiles of the time
// anchors / marker values on [0, tau], design rows, projected-gradient fit.
// `init` (when dimensionally compatible) warm-starts the optimizer.
SieveFit fit_dataset(const Dataset& data, const PipelineOptions& pipeline = {},
                     const FitOptions& options = {},
                     const SieveParams* init = nullptr);

}  // namespace sieveroc
