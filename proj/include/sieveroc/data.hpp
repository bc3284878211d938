#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sieveroc {

enum class Status { Left, Interval, Right };

// One interval-censored record.  The latent event time T is known only to
// satisfy:
//   Left:     T <= u   (already positive at the first assessment; v stores u)
//   Interval: u < T <= v
//   Right:    T > v    (still negative at the last assessment; u stores v)
struct IntervalObservation {
  double u = 0.0;
  double v = 0.0;
  double marker = 0.0;
  Status status = Status::Right;
};

IntervalObservation make_left(double u, double marker);
IntervalObservation make_interval(double u, double v, double marker);
IntervalObservation make_right(double v, double marker);

struct Dataset {
  std::vector<IntervalObservation> observations;
  double tau_t = 0.0;  // time horizon; >= every u, v
  double tau_m = 0.0;  // marker ceiling; >= every marker
  int skipped_missing_marker = 0;

  int size() const { return static_cast<int>(observations.size()); }
};

// Builds a Dataset with tau bounds recomputed from the rows (the choice used
// everywhere: the observed maxima).  Throws DataError on an empty list.
Dataset dataset_from_observations(std::vector<IntervalObservation> rows);

// Raises the tau bounds; an override below the corresponding data maximum is
// a DataError.
void override_taus(Dataset& data, std::optional<double> tau_t,
                   std::optional<double> tau_m);

// The time value a row contributes to knot placement: u for Left, (u+v)/2
// for Interval, v for Right.
double knot_anchor(const IntervalObservation& obs);
std::vector<double> knot_anchors(const Dataset& data);
std::vector<double> marker_values(const Dataset& data);

// CSV schema: header "u,v,marker,status"; left rows leave v blank (or equal
// to u), right rows leave u blank (or equal to v); a blank marker drops the
// row (counted in skipped_missing_marker).
Dataset read_csv(const std::string& path);
Dataset read_csv(std::istream& in, const std::string& origin);
void write_csv(const Dataset& data, const std::string& path);
void write_csv(const Dataset& data, std::ostream& out);

}  // namespace sieveroc
