#include "sieveroc/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sieveroc/errors.hpp"
#include "sieveroc/numerics.hpp"

namespace sieveroc {

IntervalObservation make_left(double u, double marker) {
  if (!(u > 0.0) || !std::isfinite(u))
    throw std::invalid_argument("left observation needs assessment time u > 0");
  if (!(marker >= 0.0) || !std::isfinite(marker))
    throw std::invalid_argument("marker must be finite and >= 0");
  return {u, u, marker, Status::Left};
}

IntervalObservation make_interval(double u, double v, double marker) {
  if (!(u > 0.0) || !(u < v) || !std::isfinite(v))
    throw std::invalid_argument("interval observation needs 0 < u < v");
  if (!(marker >= 0.0) || !std::isfinite(marker))
    throw std::invalid_argument("marker must be finite and >= 0");
  return {u, v, marker, Status::Interval};
}

IntervalObservation make_right(double v, double marker) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("right observation needs assessment time v > 0");
  if (!(marker >= 0.0) || !std::isfinite(marker))
    throw std::invalid_argument("marker must be finite and >= 0");
  return {v, v, marker, Status::Right};
}

Dataset dataset_from_observations(std::vector<IntervalObservation> rows) {
  if (rows.empty()) throw DataError("no observations");
  Dataset d;
  d.observations = std::move(rows);
  for (const auto& o : d.observations) {
    d.tau_t = std::max(d.tau_t, std::max(o.u, o.v));
    d.tau_m = std::max(d.tau_m, o.marker);
  }
  return d;
}

void override_taus(Dataset& data, std::optional<double> tau_t,
                   std::optional<double> tau_m) {
  if (tau_t) {
    if (!(*tau_t >= data.tau_t))
      throw DataError("tau-t override " + format_double(*tau_t) +
                      " is below the observed maximum " + format_double(data.tau_t));
    data.tau_t = *tau_t;
  }
  if (tau_m) {
    if (!(*tau_m >= data.tau_m))
      throw DataError("tau-m override " + format_double(*tau_m) +
                      " is below the observed maximum " + format_double(data.tau_m));
    data.tau_m = *tau_m;
  }
}

double knot_anchor(const IntervalObservation& obs) {
  switch (obs.status) {
    case Status::Left:
      return obs.u;
    case Status::Interval:
      return 0.5 * (obs.u + obs.v);
    case Status::Right:
      return obs.v;
  }
  throw std::logic_error("unreachable status");
}

std::vector<double> knot_anchors(const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.observations.size());
  for (const auto& o : data.observations) out.push_back(knot_anchor(o));
  return out;
}

std::vector<double> marker_values(const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.observations.size());
  for (const auto& o : data.observations) out.push_back(o.marker);
  return out;
}

namespace {

std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return std::isspace(c) == 0; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line_no, const std::string& what) {
  throw DataError(origin + ":" + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& s, const std::string& origin, int line_no,
                    const char* what) {
  double value = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, value);
  if (res.ec != std::errc() || res.ptr != e)
    fail(origin, line_no, std::string("malformed ") + what + " '" + s + "'");
  if (!std::isfinite(value))
    fail(origin, line_no, std::string(what) + " must be finite");
  return value;
}

}  // namespace

Dataset read_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(origin + ": no observations");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  {
    const auto header = split_fields(lower(line));
    const std::vector<std::string> want = {"u", "v", "marker", "status"};
    if (header != want)
      throw DataError(origin + ":1: expected header 'u,v,marker,status', got '" + line + "'");
  }

  std::vector<IntervalObservation> rows;
  int skipped = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 4)
      fail(origin, line_no, "expected 4 fields, got " + std::to_string(f.size()));

    if (f[2].empty()) {  // missing marker: row excluded, not an error
      ++skipped;
      continue;
    }
    const double m = parse_number(f[2], origin, line_no, "marker");
    if (m < 0.0) fail(origin, line_no, "negative marker");

    const std::string status = lower(f[3]);
    try {
      if (status == "left") {
        if (f[0].empty()) fail(origin, line_no, "left row needs u");
        const double u = parse_number(f[0], origin, line_no, "u");
        if (!f[1].empty() && parse_number(f[1], origin, line_no, "v") != u)
          fail(origin, line_no,
               "left rows carry a single time: v must be blank or equal to u");
        rows.push_back(make_left(u, m));
      } else if (status == "right") {
        if (f[1].empty()) fail(origin, line_no, "right row needs v");
        const double v = parse_number(f[1], origin, line_no, "v");
        if (!f[0].empty() && parse_number(f[0], origin, line_no, "u") != v)
          fail(origin, line_no,
               "right rows carry a single time: u must be blank or equal to v");
        rows.push_back(make_right(v, m));
      } else if (status == "interval") {
        if (f[0].empty() || f[1].empty())
          fail(origin, line_no, "interval row needs both u and v");
        const double u = parse_number(f[0], origin, line_no, "u");
        const double v = parse_number(f[1], origin, line_no, "v");
        rows.push_back(make_interval(u, v, m));
      } else {
        fail(origin, line_no, "unknown status token '" + f[3] + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail(origin, line_no, e.what());
    }
  }
  if (rows.empty()) throw DataError(origin + ": no observations");
  Dataset d = dataset_from_observations(std::move(rows));
  d.skipped_missing_marker = skipped;
  return d;
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, path);
}

void write_csv(const Dataset& data, std::ostream& out) {
  out << "u,v,marker,status\n";
  for (const auto& o : data.observations) {
    switch (o.status) {
      case Status::Left:
        out << format_double(o.u) << ",," << format_double(o.marker) << ",left\n";
        break;
      case Status::Interval:
        out << format_double(o.u) << ',' << format_double(o.v) << ','
            << format_double(o.marker) << ",interval\n";
        break;
      case Status::Right:
        out << ',' << format_double(o.v) << ',' << format_double(o.marker)
            << ",right\n";
        break;
    }
  }
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(data, out);
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace sieveroc
