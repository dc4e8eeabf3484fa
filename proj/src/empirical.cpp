#include "resil/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "resil/errors.hpp"

namespace resil::empirical {

EmpiricalEvent::EmpiricalEvent(std::vector<OutageRecord> records) : records_(std::move(records)) {
  if (records_.empty()) {
    throw ValidationError("records", "event has no outage records");
  }
  for (const auto& r : records_) {
    if (!std::isfinite(r.outage_time) || !std::isfinite(r.restore_time)) {
      throw ValidationError(r.component_id, "component '" + r.component_id + "': times must be finite");
    }
    if (r.restore_time < r.outage_time) {
      throw ValidationError(r.component_id,
                            "component '" + r.component_id + "': restore_time precedes outage_time");
    }
    if (!std::isfinite(r.quantity) || !(r.quantity > 0.0)) {
      throw ValidationError(r.component_id,
                            "component '" + r.component_id + "': quantity must be positive");
    }
  }

  std::stable_sort(records_.begin(), records_.end(),
                   [](const OutageRecord& a, const OutageRecord& b) { return a.outage_time < b.outage_time; });

  const std::size_t n = records_.size();
  outage_times_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    outage_times_[i] = records_[i].outage_time;
  }

  restore_order_.resize(n);
  std::iota(restore_order_.begin(), restore_order_.end(), std::size_t{0});
  std::stable_sort(restore_order_.begin(), restore_order_.end(), [this](std::size_t a, std::size_t b) {
    return records_[a].restore_time < records_[b].restore_time;
  });
  restore_times_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    restore_times_[k] = records_[restore_order_[k]].restore_time;
  }

  for (const auto& r : records_) {
    total_quantity_ += r.quantity;
  }
}

std::vector<std::size_t> EmpiricalEvent::restore_rank() const {
  std::vector<std::size_t> rank(restore_order_.size());
  for (std::size_t k = 0; k < restore_order_.size(); ++k) {
    rank[restore_order_[k]] = k;
  }
  return rank;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    fields.push_back(trim(line.substr(begin, comma == std::string_view::npos ? line.npos : comma - begin)));
    if (comma == std::string_view::npos) {
      break;
    }
    begin = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view text, std::size_t line, std::string_view column) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "line " + std::to_string(line) + ": column '" + std::string(column) +
                               "' is not a number: '" + std::string(text) + "'");
  }
  return value;
}

struct Columns {
  std::size_t id;
  std::size_t outage;
  std::size_t restore;
  std::optional<std::size_t> quantity;
  std::size_t count;
};

Columns parse_header(std::string_view line) {
  const auto names = split_fields(line);
  const auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - names.begin());
  };
  const auto id = find("component_id");
  const auto outage = find("outage_time");
  const auto restore = find("restore_time");
  if (!id || !outage || !restore) {
    throw ParseError(1, "line 1: header must contain component_id,outage_time,restore_time");
  }
  return Columns{*id, *outage, *restore, find("quantity"), names.size()};
}

}  // namespace

EmpiricalEvent load_event(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Columns> columns;
  std::vector<OutageRecord> records;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    if (!columns) {
      if (line_no != 1) {
        throw ParseError(line_no, "line " + std::to_string(line_no) + ": header must be the first line");
      }
      columns = parse_header(line);
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != columns->count) {
      throw ParseError(line_no, "line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(columns->count) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    OutageRecord r;
    r.component_id = std::string(fields[columns->id]);
    r.outage_time = parse_number(fields[columns->outage], line_no, "outage_time");
    r.restore_time = parse_number(fields[columns->restore], line_no, "restore_time");
    if (columns->quantity && !fields[*columns->quantity].empty()) {
      r.quantity = parse_number(fields[*columns->quantity], line_no, "quantity");
    }
    if (r.restore_time < r.outage_time) {
      throw ValidationError(r.component_id, "line " + std::to_string(line_no) + ": component '" +
                                                r.component_id + "' restores before it goes out");
    }
    if (!(r.quantity > 0.0)) {
      throw ValidationError(r.component_id, "line " + std::to_string(line_no) + ": component '" +
                                                r.component_id + "' has nonpositive quantity");
    }
    records.push_back(std::move(r));
  }

  if (records.empty()) {
    throw ValidationError("records", "event file contains no outage records");
  }
  return EmpiricalEvent(std::move(records));
}

EmpiricalEvent load_event_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open event file '" + path + "'");
  }
  return load_event(in);
}

double StepCurve::value_at(double t) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                                   [](double x, const auto& bp) { return x < bp.first; });
  if (it == breakpoints.begin()) {
    return 0.0;
  }
  return std::prev(it)->second;
}

double StepCurve::integral(double a, double b) const {
  double sum = 0.0;
  double left = a;
  double value = value_at(a);
  for (const auto& [t, v] : breakpoints) {
    if (t <= a) {
      continue;
    }
    if (t >= b) {
      break;
    }
    sum += value * (t - left);
    left = t;
    value = v;
  }
  return sum + value * (b - left);
}

StepCurves step_curves(const EmpiricalEvent& e) {
  const auto& recs = e.records();
  const auto& order = e.restore_order();
  const std::size_t n = e.size();

  StepCurves curves;
  const auto push = [](StepCurve& curve, double t, double value) {
    if (!curve.breakpoints.empty() && curve.breakpoints.back().first == t) {
      curve.breakpoints.back().second = value;
    } else {
      curve.breakpoints.emplace_back(t, value);
    }
  };

  double outaged = 0.0;
  double restored = 0.0;
  std::size_t i = 0;  // next outage
  std::size_t k = 0;  // next restore
  while (i < n || k < n) {
    const double t_out = i < n ? recs[i].outage_time : INFINITY;
    const double t_res = k < n ? recs[order[k]].restore_time : INFINITY;
    const double t = std::min(t_out, t_res);
    while (i < n && recs[i].outage_time == t) {
      outaged += recs[i].quantity;
      ++i;
    }
    while (k < n && recs[order[k]].restore_time == t) {
      restored += recs[order[k]].quantity;
      ++k;
    }
    if (t == t_out) {
      push(curves.outages, t, outaged);
    }
    if (t == t_res) {
      push(curves.restores, t, restored);
    }
    push(curves.performance, t, k == n ? 0.0 : restored - outaged);
  }
  return curves;
}

double area_pairwise(const EmpiricalEvent& e) {
  const auto& recs = e.records();
  const auto& order = e.restore_order();
  double restore_sum = 0.0;
  double outage_sum = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    restore_sum += recs[order[k]].quantity * e.restore_times()[k];
    outage_sum += recs[k].quantity * recs[k].outage_time;
  }
  return restore_sum - outage_sum;
}

double area_repair(const EmpiricalEvent& e) {
  double sum = 0.0;
  for (const auto& r : e.records()) {
    sum += r.quantity * r.repair_time();
  }
  return sum;
}

double area_uniform(const EmpiricalEvent& e, double mean_quantity) {
  if (!(mean_quantity > 0.0) || !std::isfinite(mean_quantity)) {
    throw DomainError("area_uniform: mean quantity must be positive");
  }
  const double n = static_cast<double>(e.size());
  const double restore_mean = std::accumulate(e.restore_times().begin(), e.restore_times().end(), 0.0) / n;
  const double outage_mean = std::accumulate(e.outage_times().begin(), e.outage_times().end(), 0.0) / n;
  return n * mean_quantity * (restore_mean - outage_mean);
}

EmpiricalReport empirical_metrics(const EmpiricalEvent& e) {
  EmpiricalReport report;
  report.count = e.size();
  report.total_quantity = e.total_quantity();
  report.area = area_repair(e);
  report.area_pairwise = area_pairwise(e);
  report.mean_repair_time = report.area / report.total_quantity;

  const auto curves = step_curves(e);
  const auto& bps = curves.performance.breakpoints;
  double lowest = 0.0;
  report.nadir_time = bps.front().first;
  for (const auto& [t, v] : bps) {
    if (v < lowest) {
      lowest = v;
      report.nadir_time = t;
    }
  }
  report.nadir = -lowest + 0.0;

  report.duration = e.restore_times().back() - e.outage_times().front();
  return report;
}

}  // namespace resil::empirical
