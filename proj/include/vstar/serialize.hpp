#pragma once

// JSON wire formats: XSets as two sorted integer arrays, transcripts as a
// config header plus ordered event records, and dump helpers for the CLI's
// inspect command.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vstar/closure.hpp"
#include "vstar/condition.hpp"
#include "vstar/generic.hpp"
#include "vstar/verify.hpp"

namespace vstar {

inline nlohmann::json xset_to_json(const XSet& x) {
  return {{"removed", x.removed()}, {"added", x.added()}};
}

inline XSet xset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("removed") || !j.contains("added"))
    throw std::invalid_argument("XSet: expected {removed, added}");
  std::vector<Elem> rem = j.at("removed").get<std::vector<Elem>>();
  std::vector<Elem> add = j.at("added").get<std::vector<Elem>>();
  for (size_t i = 1; i < rem.size(); ++i)
    if (rem[i - 1] >= rem[i])
      throw std::invalid_argument("XSet: removed not strictly sorted");
  for (size_t i = 1; i < add.size(); ++i)
    if (add[i - 1] >= add[i])
      throw std::invalid_argument("XSet: added not strictly sorted");
  return XSet(std::move(rem), std::move(add));  // validates sidedness
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  return {{"seed", c.seed},
          {"stageBudget", c.stage_budget},
          {"subsetCap", c.subset_cap},
          {"fairnessBound", c.fairness_bound},
          {"stageQuota", c.stage_quota}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.stage_budget = j.at("stageBudget").get<int>();
  c.subset_cap = j.at("subsetCap").get<int>();
  c.fairness_bound = j.at("fairnessBound").get<int>();
  c.stage_quota = j.at("stageQuota").get<int>();
  return c;
}

inline nlohmann::json transcript_to_json(const RunConfig& cfg,
                                         const std::vector<std::string>& argv,
                                         const std::vector<TranscriptEvent>& ev,
                                         const std::vector<std::string>& out) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : ev)
    events.push_back({{"op", e.op}, {"args", e.args}, {"result", e.result}});
  return {{"version", 1},
          {"config", config_to_json(cfg)},
          {"command", argv},
          {"events", events},
          {"output", out}};
}

inline nlohmann::json condition_dump(const Condition& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Entry& e : c.entries()) {
    nlohmann::json rec = {{"element", e.key},
                          {"stage", e.stage},
                          {"tag", tag_name(e.tag)},
                          {"value", xset_to_json(e.value)}};
    if (e.has_anchor) rec["anchor"] = e.anchor;
    if (e.has_pick) rec["pick"] = e.pick;
    if (!e.rem_a.empty()) rec["removedSet"] = e.rem_a;
    if (!e.add_b.empty()) rec["addedSet"] = e.add_b;
    entries.push_back(std::move(rec));
  }
  return {{"saturated", c.saturated()},
          {"stagesBuilt", c.stages_built()},
          {"entries", entries}};
}

inline nlohmann::json certificate_dump(const Certificate& cert) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [a, b] : cert.pairs()) pairs.push_back({a, b});
  nlohmann::json iso = nlohmann::json::array();
  for (const auto& [x, y, dom] : cert.dump_iso())
    iso.push_back({{"from", x}, {"to", y}, {"inDomain", dom}});
  return {{"valid", cert.valid()},
          {"failure", cert.failure()},
          {"pairs", pairs},
          {"fragment", cert.fragment()},
          {"iso", iso}};
}

inline nlohmann::json report_to_json(const VerificationReport& r) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : r.suites)
    suites.push_back({{"name", s.name},
                      {"pass", s.pass},
                      {"counterexamples", s.counterexamples},
                      {"probes", s.probes},
                      {"millis", s.millis}});
  return {{"ok", r.ok()}, {"suites", suites}};
}

}  // namespace vstar
