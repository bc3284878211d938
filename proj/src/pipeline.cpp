#include "sieveroc/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace sieveroc {

int default_interior_knots(int n) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  return std::max(1, static_cast<int>(std::lround(std::cbrt(static_cast<double>(n)))));
}

SieveFit fit_dataset(const Dataset& data, const PipelineOptions& pipeline,
                     const FitOptions& options, const SieveParams* init) {
  const int k = pipeline.interior_knots > 0 ? pipeline.interior_knots
                                            : default_interior_knots(data.size());
  const KnotVector time_knots =
      make_knots(knot_anchors(data), k, pipeline.order, 0.0, data.tau_t);
  const KnotVector marker_knots =
      make_knots(marker_values(data), k, pipeline.order, 0.0, data.tau_m);
  const DesignRows design = build_design(data, time_knots, marker_knots);
  if (init != nullptr && init->parameter_count() != design.parameter_count())
    init = nullptr;  // knot collapse changed the dimension; cold start
  return fit(design, time_knots, marker_knots, options, init);
}

}  // namespace sieveroc
