#include "coxfine/domain_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coxfine/constructions.hpp"
#include "coxfine/errors.hpp"

namespace coxfine {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::kParse, what); }

Rational rational_field(const ordered_json& v, const std::string& where) {
  if (!v.is_string()) fail(where + ": rationals must be written as strings");
  return Rational::parse(v.get<std::string>());
}

std::vector<Rational> weight_table(const ordered_json& obj, const std::vector<std::string>& worlds,
                                   const std::string& name) {
  if (!obj.is_object()) fail("'" + name + "' must be an object mapping labels to rationals");
  for (const auto& [label, _] : obj.items()) {
    if (std::find(worlds.begin(), worlds.end(), label) == worlds.end()) {
      fail("'" + name + "' mentions unknown world '" + label + "'");
    }
  }
  std::vector<Rational> out;
  out.reserve(worlds.size());
  for (const auto& w : worlds) {
    auto it = obj.find(w);
    if (it == obj.end()) fail("'" + name + "' has no weight for world '" + w + "'");
    out.push_back(rational_field(*it, name + "." + w));
  }
  return out;
}

}  // namespace

BeliefStructure parse_structure(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    fail(std::string("domain file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("domain file must be a JSON object");

  auto worlds_it = doc.find("worlds");
  if (worlds_it == doc.end() || !worlds_it->is_array()) fail("'worlds' must be a list of labels");
  std::vector<std::string> worlds;
  std::set<std::string> seen;
  for (const auto& w : *worlds_it) {
    if (!w.is_string()) fail("world labels must be strings");
    if (!seen.insert(w.get<std::string>()).second) fail("duplicate world '" + w.get<std::string>() + "'");
    worlds.push_back(w.get<std::string>());
  }
  if (worlds.size() > static_cast<std::size_t>(kMaxWorlds)) {
    throw Error(ErrorCode::kTooManyWorlds,
                "domain has " + std::to_string(worlds.size()) + " worlds; at most 64 are supported");
  }
  if (!doc.contains("f")) fail("missing 'f'");
  auto base = weight_table(doc["f"], worlds, "f");
  auto pert = doc.contains("fprime") ? weight_table(doc["fprime"], worlds, "fprime") : base;

  EventSet trigger;
  if (doc.contains("trigger")) {
    if (!doc["trigger"].is_array()) fail("'trigger' must be a list of labels");
    for (const auto& t : doc["trigger"]) {
      if (!t.is_string()) fail("trigger labels must be strings");
      auto it = std::find(worlds.begin(), worlds.end(), t.get<std::string>());
      if (it == worlds.end()) fail("trigger mentions unknown world '" + t.get<std::string>() + "'");
      trigger = trigger | EventSet::single(static_cast<int>(it - worlds.begin()));
    }
  }

  bool auto_delta = true;
  Rational delta;
  if (doc.contains("delta")) {
    const auto& d = doc["delta"];
    if (!d.is_string()) fail("'delta' must be \"auto\" or a rational string");
    if (d.get<std::string>() != "auto") {
      auto_delta = false;
      delta = Rational::parse(d.get<std::string>());
    }
  }
  BeliefStructure checked(worlds, base, pert, trigger, delta);
  if (!auto_delta) return checked;
  Rational gap = checked.size() <= kMaxEnumerationWorlds ? select_delta(probability_of(checked))
                                                         : Rational(0);
  return BeliefStructure(std::move(worlds), std::move(base), std::move(pert), trigger,
                         std::move(gap));
}

std::string serialize_structure(const BeliefStructure& s) {
  ordered_json doc;
  doc["worlds"] = s.labels();
  ordered_json f = ordered_json::object(), fp = ordered_json::object();
  for (int i = 0; i < s.size(); ++i) {
    f[s.labels()[i]] = s.base()[i].str();
    fp[s.labels()[i]] = s.perturbed()[i].str();
  }
  doc["f"] = std::move(f);
  doc["fprime"] = std::move(fp);
  ordered_json trig = ordered_json::array();
  for (int i = 0; i < s.size(); ++i) {
    if (s.trigger().contains(i)) trig.push_back(s.labels()[i]);
  }
  doc["trigger"] = std::move(trig);
  doc["delta"] = s.delta().str();
  return doc.dump(2) + "\n";
}

BeliefStructure load_structure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open domain file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_structure(buf.str());
}

}  // namespace coxfine
