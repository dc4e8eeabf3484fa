#include "resil/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "resil/errors.hpp"

namespace resil::io {

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ValidationError(where, where + ": expected a JSON object");
  }
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!names.contains(key)) {
      const std::string field = where.empty() ? key : where + "." + key;
      throw ValidationError(key, field + ": unknown key");
    }
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const std::string field = where.empty() ? key : where + "." + key;
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(key, field + ": missing");
  }
  if (!it->is_number()) {
    throw ValidationError(key, field + ": expected a number");
  }
  return it->get<double>();
}

std::string type_tag(const json& obj, const std::string& where) {
  const auto it = obj.find("type");
  if (it == obj.end() || !it->is_string()) {
    throw ValidationError("type", where + ".type: missing or not a string");
  }
  return it->get<std::string>();
}

}  // namespace

EventModel model_from_json(const json& doc) {
  check_keys(doc, "", {"n_c", "outage", "restore"});
  const double total = number(doc, "n_c", "");

  if (!doc.contains("outage")) {
    throw ValidationError("outage", "outage: missing");
  }
  const json& outage = doc.at("outage");
  check_keys(outage, "outage", {"type", "o_b"});
  if (type_tag(outage, "outage") != "constant") {
    throw ValidationError("type", "outage.type: only \"constant\" is supported");
  }
  const OutageModel out{number(outage, "o_b", "outage")};

  if (!doc.contains("restore")) {
    throw ValidationError("restore", "restore: missing");
  }
  const json& restore = doc.at("restore");
  if (!restore.is_object()) {
    throw ValidationError("restore", "restore: expected a JSON object");
  }
  const std::string kind = type_tag(restore, "restore");
  RestoreModel res;
  if (kind == "constant") {
    check_keys(restore, "restore", {"type", "r_a", "r_b"});
    res = ConstantRestore{number(restore, "r_a", "restore"), number(restore, "r_b", "restore")};
  } else if (kind == "lognormal") {
    check_keys(restore, "restore", {"type", "r_a", "mu", "sigma"});
    res = LognormalRestore{number(restore, "r_a", "restore"), number(restore, "mu", "restore"),
                           number(restore, "sigma", "restore")};
  } else if (kind == "exponential") {
    check_keys(restore, "restore", {"type", "r_a", "tau"});
    res = ExponentialRestore{number(restore, "r_a", "restore"), number(restore, "tau", "restore")};
  } else {
    throw ValidationError("type", "restore.type: unknown restore model '" + kind + "'");
  }
  return EventModel(total, out, res);
}

json model_to_json(const EventModel& m) {
  json restore;
  std::visit(
      [&restore](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantRestore>) {
          restore = {{"type", "constant"}, {"r_a", r.restore_start}, {"r_b", r.restore_end}};
        } else if constexpr (std::is_same_v<T, LognormalRestore>) {
          restore = {{"type", "lognormal"}, {"r_a", r.restore_start}, {"mu", r.mu}, {"sigma", r.sigma}};
        } else {
          restore = {{"type", "exponential"}, {"r_a", r.restore_start}, {"tau", r.tau}};
        }
      },
      m.restore());
  return {{"n_c", m.total()},
          {"outage", {{"type", "constant"}, {"o_b", m.outage_end()}}},
          {"restore", restore}};
}

EventModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open model file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, "model file '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

json nadir_to_json(const NadirResult& n) {
  json location;
  if (const auto* p = std::get_if<NadirPoint>(&n.location)) {
    location = {{"type", "point"}, {"time", p->time}};
  } else {
    const auto& i = std::get<NadirInterval>(n.location);
    location = {{"type", "interval"}, {"start", i.start}, {"end", i.end}};
  }
  json candidates = json::array();
  for (const auto& c : n.candidates) {
    candidates.push_back({{"time", c.time}, {"performance", c.performance}});
  }
  return {{"value", n.value}, {"location", location}, {"candidates", candidates}};
}

json metrics_to_json(const EventModel& m, const MetricsReport& r) {
  json out{{"area", r.area},
           {"area_numeric", r.area_numeric},
           {"area_discrepancy", r.area_discrepancy},
           {"nadir", nadir_to_json(r.nadir)},
           {"mean_outage_time", r.mean_outage_time},
           {"mean_restore_time", r.mean_restore_time},
           {"durations", r.durations}};
  if (std::holds_alternative<LognormalRestore>(m.restore())) {
    const auto stationary = lognormal_stationary_time(m);
    out["lognormal"] = {{"inflection_time", lognormal_inflection_time(m)},
                        {"stationary_time", stationary ? json(*stationary) : json(nullptr)}};
  }
  return out;
}

json empirical_to_json(const empirical::EmpiricalReport& r) {
  return {{"count", r.count},
          {"total_quantity", r.total_quantity},
          {"area", r.area},
          {"area_pairwise", r.area_pairwise},
          {"nadir", r.nadir},
          {"nadir_time", r.nadir_time},
          {"duration", r.duration},
          {"mean_repair_time", r.mean_repair_time}};
}

}  // namespace resil::io
