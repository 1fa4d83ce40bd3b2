#include "hypermon/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace hypermon {

namespace {

bool is_action_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

bool is_location_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

}  // namespace

Context Context::make(std::vector<std::string> actions,
                      std::vector<std::string> locations) {
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  std::sort(locations.begin(), locations.end());
  locations.erase(std::unique(locations.begin(), locations.end()),
                  locations.end());
  if (actions.size() < 2)
    throw UsageError("alphabet must contain at least two actions");
  if (locations.empty())
    throw UsageError("at least one location is required");
  for (const auto& a : actions)
    if (!is_action_token(a))
      throw UsageError("invalid action name '" + a +
                       "' (expected [a-z0-9_]+)");
  for (const auto& l : locations)
    if (!is_location_token(l))
      throw UsageError("invalid location name '" + l +
                       "' (expected [A-Za-z0-9_]+)");
  Context ctx;
  ctx.actions = std::move(actions);
  ctx.locations = std::move(locations);
  return ctx;
}

int Context::action_id(const std::string& name) const {
  auto it = std::lower_bound(actions.begin(), actions.end(), name);
  if (it == actions.end() || *it != name) return -1;
  return static_cast<int>(it - actions.begin());
}

int Context::location_id(const std::string& name) const {
  auto it = std::lower_bound(locations.begin(), locations.end(), name);
  if (it == locations.end() || *it != name) return -1;
  return static_cast<int>(it - locations.begin());
}

std::pair<ActionMap, int> head_tail(const Trace& t, int pos) {
  if (pos < 0 || pos >= t.num_positions())
    throw UsageError("position out of range");
  return {t.at(pos), t.succ(pos)};
}

std::vector<std::string> validate_trace(const json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) {
    errs.push_back("trace must be a JSON object");
    return errs;
  }
  auto string_list = [&](const char* key,
                         std::vector<std::string>& out) -> bool {
    if (!j.contains(key) || !j[key].is_array()) {
      errs.push_back(std::string("missing or non-array \"") + key + "\"");
      return false;
    }
    for (const auto& e : j[key]) {
      if (!e.is_string()) {
        errs.push_back(std::string("non-string entry in \"") + key + "\"");
        return false;
      }
      out.push_back(e.get<std::string>());
    }
    return true;
  };

  std::vector<std::string> locs, acts;
  bool have_locs = string_list("locations", locs);
  bool have_acts = string_list("actions", acts);

  if (have_locs) {
    if (locs.empty()) errs.push_back("empty location list");
    std::set<std::string> seen;
    for (const auto& l : locs) {
      if (!is_location_token(l))
        errs.push_back("invalid location name '" + l + "'");
      if (!seen.insert(l).second)
        errs.push_back("duplicate location '" + l + "'");
    }
  }
  if (have_acts) {
    if (acts.size() < 2)
      errs.push_back("alphabet must contain at least two actions");
    std::set<std::string> seen;
    for (const auto& a : acts) {
      if (!is_action_token(a))
        errs.push_back("invalid action name '" + a + "' (expected [a-z0-9_]+)");
      if (!seen.insert(a).second) errs.push_back("duplicate action '" + a + "'");
    }
  }

  std::set<std::string> locset(locs.begin(), locs.end());
  std::set<std::string> actset(acts.begin(), acts.end());
  auto check_maps = [&](const char* key, bool require_nonempty) {
    if (!j.contains(key) || !j[key].is_array()) {
      errs.push_back(std::string("missing or non-array \"") + key + "\"");
      return;
    }
    if (require_nonempty && j[key].empty())
      errs.push_back("empty loop (the loop must have at least one step)");
    int i = 0;
    for (const auto& m : j[key]) {
      std::string where = std::string(key) + "[" + std::to_string(i++) + "]";
      if (!m.is_object()) {
        errs.push_back(where + " is not an object");
        continue;
      }
      if (have_locs) {
        for (const auto& l : locs)
          if (!m.contains(l))
            errs.push_back("partial action map: " + where + " misses '" + l +
                           "'");
      }
      for (auto it = m.begin(); it != m.end(); ++it) {
        if (have_locs && !locset.count(it.key()))
          errs.push_back("unknown location '" + it.key() + "' in " + where);
        if (!it.value().is_string())
          errs.push_back("non-string action in " + where);
        else if (have_acts && !actset.count(it.value().get<std::string>()))
          errs.push_back("unknown action '" + it.value().get<std::string>() +
                         "' in " + where);
      }
    }
  };
  check_maps("prefix", false);
  check_maps("loop", true);
  return errs;
}

Trace trace_from_json(const json& j) {
  auto errs = validate_trace(j);
  if (!errs.empty()) {
    std::ostringstream os;
    os << "invalid trace:";
    for (const auto& e : errs) os << " " << e << ";";
    throw UsageError(os.str());
  }
  auto ctx = std::make_shared<Context>(Context::make(
      j["actions"].get<std::vector<std::string>>(),
      j["locations"].get<std::vector<std::string>>()));
  auto read_maps = [&](const char* key) {
    std::vector<ActionMap> out;
    for (const auto& m : j[key]) {
      ActionMap am(ctx->num_locations());
      for (int l = 0; l < ctx->num_locations(); ++l)
        am[l] = ctx->action_id(m[ctx->location_name(l)].get<std::string>());
      out.push_back(std::move(am));
    }
    return out;
  };
  Trace t;
  t.ctx = ctx;
  t.prefix = read_maps("prefix");
  t.loop = read_maps("loop");
  return t;
}

json trace_to_json(const Trace& t) {
  json j;
  j["locations"] = t.ctx->locations;
  j["actions"] = t.ctx->actions;
  auto maps = [&](const std::vector<ActionMap>& ms) {
    json arr = json::array();
    for (const auto& m : ms) {
      json o;
      for (int l = 0; l < t.ctx->num_locations(); ++l)
        o[t.ctx->location_name(l)] = t.ctx->action_name(m[l]);
      arr.push_back(std::move(o));
    }
    return arr;
  };
  j["prefix"] = maps(t.prefix);
  j["loop"] = maps(t.loop);
  return j;
}

std::vector<ActionMap> all_action_maps(const Context& ctx) {
  int nl = ctx.num_locations(), na = ctx.num_actions();
  double total = std::pow(static_cast<double>(na), nl);
  if (total > 1e7)
    throw UsageError("action map enumeration too large (|Act|^|L| > 1e7)");
  std::vector<ActionMap> out;
  out.reserve(static_cast<size_t>(total));
  ActionMap cur(nl, 0);
  while (true) {
    out.push_back(cur);
    int i = nl - 1;
    while (i >= 0 && cur[i] == na - 1) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::End: return "end";
  }
  return "?";
}

int VerdictSet::size() const {
  return (bits & 1 ? 1 : 0) + (bits & 2 ? 1 : 0) + (bits & 4 ? 1 : 0);
}

std::vector<std::string> VerdictSet::names() const {
  std::vector<std::string> out;
  for (Verdict v : {Verdict::Yes, Verdict::No, Verdict::End})
    if (has(v)) out.push_back(verdict_name(v));
  return out;
}

}  // namespace hypermon
