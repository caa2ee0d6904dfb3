// Command-line front end: one invocation = one chain session. Commands
// extend the chain on demand; every session can emit a transcript that
// `replay` re-executes and diffs bit-exactly.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vstar/automorphism.hpp"
#include "vstar/serialize.hpp"
#include "vstar/verify.hpp"

namespace {

using vstar::Elem;
using vstar::RunConfig;
using vstar::XSet;

constexpr const char* kUsage = R"(usage: vstar [options] <command>

commands:
  star K                         print the set named by c_K
  member I J                     print whether c_I is a member of c_J
  inverse [--removed a,b] [--added c,d]
                                 print the element naming the given set
  witness {w|d|bu|bi} I J        print the axiom-witness element and its set
  auto K L [--image I]... [--preimage I]... [--advance N]
                                 build F mapping c_K to c_L and query it
  verify [--bound B] [--samples S]
                                 run all verification suites
  replay FILE                    re-run a transcript and diff bit-exactly
  inspect {condition|fragment|certificate} [args]
                                 dump internal structures as JSON

options:
  --seed N  --stage-budget N  --subset-cap N  --fairness-bound N
  --stage-quota N  --machine  --transcript-out FILE
)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Elem to_elem(const std::string& s) {
  try {
    size_t pos = 0;
    Elem v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("not an integer: " + s);
  }
}

std::vector<Elem> to_elems(const std::string& csv) {
  std::vector<Elem> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(to_elem(item));
  return out;
}

std::string xset_str(const XSet& x, bool machine) {
  return machine ? vstar::xset_to_json(x).dump() : x.str();
}

// Runs one command against a fresh chain; fills `out` with the printed
// lines. Shared by normal dispatch and replay.
int run_command(const RunConfig& cfg, const std::vector<std::string>& cmd,
                std::vector<std::string>& out,
                std::vector<vstar::TranscriptEvent>& events) {
  if (cmd.empty()) throw UsageError("missing command");
  vstar::Chain chain(cfg);
  const std::string& op = cmd[0];
  auto arg = [&](size_t i) -> const std::string& {
    if (i >= cmd.size()) throw UsageError("missing argument for " + op);
    return cmd[i];
  };
  int status = 0;

  if (op == "star") {
    out.push_back(xset_str(chain.star(to_elem(arg(1))), cfg.machine));
  } else if (op == "member") {
    out.push_back(chain.member(to_elem(arg(1)), to_elem(arg(2))) ? "true"
                                                                 : "false");
  } else if (op == "inverse") {
    std::vector<Elem> rem, add;
    for (size_t i = 1; i < cmd.size(); ++i) {
      if (cmd[i] == "--removed")
        rem = to_elems(arg(++i));
      else if (cmd[i] == "--added")
        add = to_elems(arg(++i));
      else
        throw UsageError("unknown argument: " + cmd[i]);
    }
    XSet x(rem, add);
    out.push_back(std::to_string(chain.star_inverse(x)));
  } else if (op == "witness") {
    const std::string& kind = arg(1);
    const Elem i = to_elem(arg(2)), j = to_elem(arg(3));
    Elem z;
    if (kind == "w")
      z = chain.witness_w(i, j);
    else if (kind == "d")
      z = chain.witness_d(i, j);
    else if (kind == "bu")
      z = chain.witness_bu(i, j);
    else if (kind == "bi")
      z = chain.witness_bi(i, j);
    else
      throw UsageError("witness kind must be one of w, d, bu, bi");
    out.push_back(std::to_string(z) + " " + xset_str(chain.star(z), cfg.machine));
  } else if (op == "auto") {
    vstar::AutomorphismHandle h(chain, to_elem(arg(1)), to_elem(arg(2)));
    for (size_t i = 3; i < cmd.size(); ++i) {
      if (cmd[i] == "--image")
        out.push_back(std::to_string(h.image(to_elem(arg(++i)))));
      else if (cmd[i] == "--preimage")
        out.push_back(std::to_string(h.preimage(to_elem(arg(++i)))));
      else if (cmd[i] == "--advance") {
        h.advance(static_cast<int>(to_elem(arg(++i))));
        out.push_back("advanced to " + std::to_string(h.matched().size()) +
                      " matched pairs");
      } else {
        throw UsageError("unknown argument: " + cmd[i]);
      }
    }
    if (cmd.size() == 3)
      out.push_back(std::to_string(h.image(h.source())));
  } else if (op == "verify") {
    Elem bound = 8;
    int samples = 50;
    for (size_t i = 1; i < cmd.size(); ++i) {
      if (cmd[i] == "--bound")
        bound = to_elem(arg(++i));
      else if (cmd[i] == "--samples")
        samples = static_cast<int>(to_elem(arg(++i)));
      else
        throw UsageError("unknown argument: " + cmd[i]);
    }
    vstar::VerificationReport all;
    auto merge = [&](vstar::VerificationReport r) {
      for (auto& s : r.suites) all.suites.push_back(std::move(s));
    };
    merge(vstar::verify_self_membership(chain, bound));
    merge(vstar::verify_axioms(chain, std::min<Elem>(bound, 8)));
    vstar::AutomorphismHandle h(chain, 0, 1);
    merge(vstar::verify_automorphism(chain, h, bound, samples, cfg.seed));
    merge(vstar::verify_saturation(chain.condition(), samples, cfg.seed + 1));
    if (cfg.machine) {
      out.push_back(vstar::report_to_json(all).dump());
    } else {
      for (const auto& s : all.suites) {
        out.push_back(s.name + ": " + (s.pass ? "pass" : "FAIL") + " (" +
                      std::to_string(s.probes) + " probes)");
        for (const auto& c : s.counterexamples) out.push_back("  " + c);
      }
    }
    if (!all.ok()) status = 1;
  } else if (op == "inspect") {
    const std::string& what = arg(1);
    if (what == "condition") {
      out.push_back(vstar::condition_dump(chain.condition()).dump(2));
    } else if (what == "fragment") {
      if (cmd.size() < 3) throw UsageError("inspect fragment needs anchors");
      std::vector<Elem> anchors;
      for (size_t i = 2; i < cmd.size(); ++i) anchors.push_back(to_elem(cmd[i]));
      chain.ensure_saturated(anchors[0]);
      for (Elem a : anchors) chain.condition().ensure_anchor(a);
      Elem wstar = anchors[0];
      for (Elem a : anchors)
        if (vstar::pick_less(a, wstar)) wstar = a;
      auto frag = vstar::delta_closure(chain.condition(), anchors, wstar);
      nlohmann::json j = {{"anchors", anchors},
                          {"closure", frag},
                          {"strata", nlohmann::json::array()}};
      for (int k = 0; k <= 2; ++k)
        j["strata"].push_back(
            vstar::delta_stratum(chain.condition(), k, wstar));
      out.push_back(j.dump(2));
    } else if (what == "certificate") {
      vstar::AutomorphismHandle h(chain, to_elem(arg(2)), to_elem(arg(3)));
      out.push_back(vstar::certificate_dump(h.certificate()).dump(2));
    } else {
      throw UsageError("inspect target must be condition|fragment|certificate");
    }
  } else {
    throw UsageError("unknown command: " + op);
  }
  events = chain.transcript();
  return status;
}

int run_replay(const RunConfig&, const std::string& file,
               std::vector<std::string>& out) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open transcript: " + file);
  nlohmann::json j = nlohmann::json::parse(in);
  RunConfig cfg = vstar::config_from_json(j.at("config"));
  std::vector<std::string> cmd = j.at("command").get<std::vector<std::string>>();
  std::vector<std::string> fresh_out;
  std::vector<vstar::TranscriptEvent> fresh_events;
  run_command(cfg, cmd, fresh_out, fresh_events);
  nlohmann::json fresh =
      vstar::transcript_to_json(cfg, cmd, fresh_events, fresh_out);
  if (fresh == j) {
    out.push_back("replay ok: " + std::to_string(fresh_events.size()) +
                  " events match");
    return 0;
  }
  out.push_back("replay mismatch");
  out.push_back("recorded: " + j.dump());
  out.push_back("replayed: " + fresh.dump());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string transcript_out;
  std::vector<std::string> cmd;
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (size_t i = 0; i < args.size(); ++i) {
      const std::string& a = args[i];
      auto need = [&](const char* name) -> const std::string& {
        if (++i >= args.size())
          throw UsageError(std::string("missing value for ") + name);
        return args[i];
      };
      if (!cmd.empty()) {
        cmd.push_back(a);
      } else if (a == "--seed") {
        cfg.seed = static_cast<std::uint64_t>(to_elem(need("--seed")));
      } else if (a == "--stage-budget") {
        cfg.stage_budget = static_cast<int>(to_elem(need("--stage-budget")));
      } else if (a == "--subset-cap") {
        cfg.subset_cap = static_cast<int>(to_elem(need("--subset-cap")));
      } else if (a == "--fairness-bound") {
        cfg.fairness_bound =
            static_cast<int>(to_elem(need("--fairness-bound")));
      } else if (a == "--stage-quota") {
        cfg.stage_quota = static_cast<int>(to_elem(need("--stage-quota")));
      } else if (a == "--machine") {
        cfg.machine = true;
      } else if (a == "--transcript-out") {
        transcript_out = need("--transcript-out");
      } else if (a == "--help" || a == "-h") {
        std::cout << kUsage;
        return 0;
      } else {
        cmd.push_back(a);
      }
    }
    if (cfg.stage_budget < 1 || cfg.subset_cap < 1 || cfg.fairness_bound < 1)
      throw UsageError("budgets must be >= 1");
    if (cmd.empty()) throw UsageError("missing command");

    std::vector<std::string> out;
    int status;
    if (cmd[0] == "replay") {
      if (cmd.size() != 2) throw UsageError("replay takes exactly one file");
      status = run_replay(cfg, cmd[1], out);
    } else {
      std::vector<vstar::TranscriptEvent> events;
      status = run_command(cfg, cmd, out, events);
      if (!transcript_out.empty()) {
        std::ofstream f(transcript_out);
        f << vstar::transcript_to_json(cfg, cmd, events, out).dump(2) << "\n";
      }
    }
    for (const auto& line : out) std::cout << line << "\n";
    return status;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 2;
  } catch (const vstar::BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
