#pragma once

#include <string>

#include <json.hpp>

#include "resil/empirical.hpp"
#include "resil/model.hpp"

namespace resil::io {

using json = nlohmann::json;

/// Parse a model document:
///
///   {"n_c": 14,
///    "outage":  {"type": "constant", "o_b": 2.69},
///    "restore": {"type": "lognormal", "r_a": 0.52, "mu": 1.64, "sigma": 1.56}}
///
/// Restore types are "constant" (r_a, r_b), "lognormal" (r_a, mu, sigma) and
/// "exponential" (r_a, tau). Unknown or missing keys and out-of-range values
/// throw ValidationError naming the field.
EventModel model_from_json(const json& doc);

json model_to_json(const EventModel& m);

/// Reads and parses a model file. Throws std::ios_base::failure when the file
/// cannot be read and ParseError for malformed JSON.
EventModel load_model_file(const std::string& path);

json nadir_to_json(const NadirResult& n);
json metrics_to_json(const EventModel& m, const MetricsReport& r);
json empirical_to_json(const empirical::EmpiricalReport& r);

}  // namespace resil::io
