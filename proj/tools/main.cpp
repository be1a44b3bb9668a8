#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coxfine/appendix.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/domain_file.hpp"
#include "coxfine/errors.hpp"
#include "coxfine/fine_qcc.hpp"
#include "coxfine/functional_eq.hpp"
#include "coxfine/harness.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/parallel.hpp"
#include "coxfine/rescaling.hpp"
#include "coxfine/value_table.hpp"

using namespace coxfine;

namespace {

constexpr int kExitExpected = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string format = "json";
  int threads = 0;
  bool timings = false;
};

void emit(const Options& o, const Json& report) {
  if (o.format == "text") {
    std::cout << render_text(report);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

Rational parse_rational(const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error&) {
    throw Error(ErrorCode::kUsage, "not a rational: " + text);
  }
}

Rational half_power(const Rational& exponent) {
  const mpz_class e = exponent.mpq().get_num();
  if (!e.fits_slong_p()) throw Error(ErrorCode::kDecompositionRange, "exponent out of range");
  const long k = e.get_si();
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rational(mpq_class(mpz_class(1), p)) : Rational(mpq_class(p));
}

Json pipeline_json(const BeliefStructure& s, const PipelineFlags& flags) {
  return to_json(run_pipeline(s, flags), s);
}

PipelineFlags base_flags(const Options& o) {
  PipelineFlags f;
  f.threads = o.threads;
  f.timings = o.timings;
  return f;
}

bool record_passes(const Json& report, const std::string& name) {
  for (const auto& c : report.at("checks")) {
    if (c.at("name") == name) return c.at("status") == "pass";
  }
  return false;
}

Json rescale_json(const BeliefStructure& s) {
  const ValueTable values = ValueTable::build(s);
  const auto sys = build_system(s, values);
  const RescalingSolver solver(sys);
  const auto v = solver.solve();
  Json out{{"status", v.status == Feasibility::kInfeasible ? "infeasible" : "feasible"},
           {"values", values.size()},
           {"equations", v.equations},
           {"rank", v.rank}};
  if (v.certificate) {
    Json terms = Json::array();
    for (const auto& t : v.certificate->terms) {
      const auto& e = sys.equations[t.equation];
      terms.push_back({{"coefficient", t.coefficient.str()},
                       {"equation", {values.value(e.a).str(), values.value(e.b).str(),
                                     values.value(e.c).str()}},
                       {"witness",
                        {{"event", labels_json(s, e.witness.event)},
                         {"given", labels_json(s, e.witness.given)}}}});
    }
    out["certificate"] = {{"u", values.value(v.certificate->u).str()},
                          {"v", values.value(v.certificate->v).str()},
                          {"replays", replay(sys, *v.certificate)},
                          {"terms", terms}};
    return out;
  }
  Json table = Json::array();
  if (v.identity) {
    for (ValueId id = 0; id < values.size(); ++id) {
      table.push_back({values.value(id).str(), values.value(id).str()});
    }
  } else {
    table.push_back({values.value(values.zero_id()).str(), "0"});
    for (const auto& [id, e] : v.exponents) {
      table.push_back({values.value(id).str(), half_power(e).str()});
    }
  }
  out["identity"] = v.identity;
  out["assignment"] = table;
  return out;
}

void enumerate(const std::string& what, const BeliefStructure& s, const Options& o) {
  const ValueTable values = ValueTable::build(s);
  auto rs = [&](ValueId id) { return values.value(id).str(); };
  auto line = [&](const Json& j) {
    if (o.format == "text") {
      std::string row;
      for (const auto& [k, v] : j.items()) {
        if (!row.empty()) row += ' ';
        row += v.get<std::string>();
      }
      std::cout << row << "\n";
    } else {
      std::cout << j.dump() << "\n";
    }
  };
  if (what == "pairs") {
    PairTableOptions opt;
    opt.threads = o.threads;
    const auto table = ConstrainedPairTable::build(s, values, opt);
    for (const auto& e : table.entries()) {
      line(Json{{"x", rs(e.x)}, {"y", rs(e.y)}, {"w", rs(e.w)},
                {"u1", e.witness.u1.hex()}, {"u2", e.witness.u2.hex()}, {"u3", e.witness.u3.hex()}});
    }
  } else if (what == "triples") {
    for (const auto& t : enumerate_constrained_triples(values)) {
      line(Json{{"x", rs(t.x)}, {"y", rs(t.y)}, {"z", rs(t.z)}, {"u1", t.chain.u1.hex()},
                {"u2", t.chain.u2.hex()}, {"u3", t.chain.u3.hex()}, {"u4", t.chain.u4.hex()}});
    }
  } else {
    for (const auto& t : enumerate_r_constrained(s, values)) {
      line(Json{{"x", rs(t.x)}, {"y", rs(t.y)}, {"z", rs(t.z)},
                {"given", t.witness.given.hex()}, {"event", t.witness.event.hex()},
                {"first", t.witness.first.hex()}, {"second", t.witness.second.hex()}});
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks of plausibility measures against Cox-style axioms"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", opt.threads, "Worker threads (default: COXFINE_THREADS)");
  app.add_flag("--timings", opt.timings, "Include per-check seconds");

  std::string delta_text;
  bool exhaustive = false, qcc = false, appendix = false;
  auto* verify_cmd = app.add_subcommand("verify-halpern", "Run the pipeline on the 12-world counterexample");
  verify_cmd->add_option("--delta", delta_text, "Perturbation as an exact rational");
  verify_cmd->add_flag("--exhaustive-triples", exhaustive, "Run the 5^n sweeps");
  verify_cmd->add_flag("--qcc", qcc, "Include the comparative-order suite");
  verify_cmd->add_flag("--appendix", appendix, "Include the appendix suite");

  bool restricted = false;
  auto* fine = app.add_subcommand("verify-fine", "Comparative-order clauses and the class obstruction");
  fine->add_flag("--restricted", restricted, "Also check the anchored 13-world variant");

  app.add_subcommand("verify-appendix", "Closeness, not-good census, trichotomy and identities");

  std::string file;
  auto* rescale = app.add_subcommand("rescale-check", "Decide whether a rescaling to probability exists");
  rescale->add_option("FILE", file)->required()->check(CLI::ExistingFile);

  std::string kind;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "Dump pair keys, constrained triples or R-triples");
  enumerate_cmd->add_option("KIND", kind)->required()->check(
      CLI::IsMember({"pairs", "triples", "rtriples"}));
  enumerate_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "Run the pipeline on a domain file");
  check->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  check->add_flag("--exhaustive-triples", exhaustive, "Run the 5^n sweeps");
  check->add_flag("--qcc", qcc, "Include the comparative-order suite");
  check->add_flag("--appendix", appendix, "Include the appendix suite");

  SearchConfig search_config;
  std::vector<std::string> tiers, pinned;
  bool unperturbed = false, shrink_findings = false;
  auto* search_cmd = app.add_subcommand("search", "Generate structures and report violations");
  search_cmd->add_option("--worlds", search_config.worlds)->check(CLI::Range(1, 14));
  search_cmd->add_option("--trials", search_config.trials);
  search_cmd->add_option("--seed", search_config.seed);
  search_cmd->add_option("--tiers", tiers, "Block magnitudes as rationals");
  search_cmd->add_option("--pinned", pinned, "Base weights used verbatim");
  search_cmd->add_flag("--unperturbed", unperturbed, "Generate probability structures");
  search_cmd->add_flag("--shrink", shrink_findings, "Shrink each finding");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitExpected : kExitUsage;
  }
  if (opt.threads <= 0) opt.threads = default_thread_count();

  try {
    if (verify_cmd->parsed()) {
      std::optional<Rational> delta;
      if (!delta_text.empty()) delta = parse_rational(delta_text);
      const auto s = build_halpern(delta);
      auto flags = base_flags(opt);
      flags.exhaustive = exhaustive;
      flags.qcc = qcc;
      flags.appendix = appendix;
      const auto report = run_pipeline(s, flags);
      emit(opt, to_json(report, s));
      return report.verdict == Verdict::kCounterexampleConfirmed ? kExitExpected : kExitUnexpected;
    }
    if (fine->parsed()) {
      const auto s = build_halpern();
      auto flags = base_flags(opt);
      flags.qcc = true;
      const auto report = run_pipeline(s, flags);
      Json out = to_json(report, s);
      bool expected = report.verdict == Verdict::kCounterexampleConfirmed &&
                      record_passes(out, "qcc1_qcc2") && record_passes(out, "qcc7") &&
                      record_passes(out, "agreeing_obstruction");
      out["restricted_mode"] = restricted;
      if (restricted) {
        const auto f13 = build_fine13();
        const auto r = restricted_fine_check(f13, opt.threads);
        Json values = Json::array();
        for (const auto& w : r.witness_values) {
          values.push_back({w[0].str(), w[1].str(), w[2].str(), w[3].str(), w[4].str()});
        }
        out["restricted"] = {{"worlds", r.worlds},
                             {"anchor", labels_json(f13, r.anchor)},
                             {"filter_members", r.filter_members},
                             {"filter_intersection_closed", r.filter_intersection_closed},
                             {"filter_excludes_empty", r.filter_excludes_empty},
                             {"anchored_pattern_holds", r.anchored_pattern.classes_hold()},
                             {"chains", r.chains},
                             {"keys", r.keys},
                             {"witnesses_found", r.witnesses.total},
                             {"combinations", r.witnesses.combinations},
                             {"witnesses", values},
                             {"holds", r.holds()}};
        expected = expected && r.holds();
      }
      emit(opt, out);
      return expected ? kExitExpected : kExitUnexpected;
    }
    if (app.got_subcommand("verify-appendix")) {
      const auto s = build_halpern();
      auto flags = base_flags(opt);
      flags.fast = true;
      flags.appendix = true;
      const Json out = pipeline_json(s, flags);
      const bool expected = record_passes(out, "closeness") &&
                            record_passes(out, "not_good_characterization") &&
                            record_passes(out, "trichotomy") &&
                            record_passes(out, "profile_identities");
      emit(opt, out);
      return expected ? kExitExpected : kExitUnexpected;
    }
    if (rescale->parsed()) {
      const Json out = rescale_json(load_structure(file));
      if (opt.format == "text") {
        std::cout << "status: " << out.at("status").get<std::string>() << "\n"
                  << "values: " << out.at("values") << "\n"
                  << "equations: " << out.at("equations") << "\n";
        if (out.contains("certificate")) {
          std::cout << "certificate: " << out.at("certificate").at("terms").size() << " terms\n";
          for (const auto& t : out.at("certificate").at("terms")) std::cout << "  " << t.dump() << "\n";
        } else {
          for (const auto& row : out.at("assignment")) {
            std::cout << "  g(" << row[0].get<std::string>() << ") = " << row[1].get<std::string>()
                      << "\n";
          }
        }
      } else {
        std::cout << out.dump(2) << "\n";
      }
      return kExitExpected;
    }
    if (enumerate_cmd->parsed()) {
      enumerate(kind, load_structure(file), opt);
      return kExitExpected;
    }
    if (check->parsed()) {
      auto flags = base_flags(opt);
      flags.exhaustive = exhaustive;
      flags.qcc = qcc;
      flags.appendix = appendix;
      emit(opt, pipeline_json(load_structure(file), flags));
      return kExitExpected;
    }
    if (search_cmd->parsed()) {
      if (!tiers.empty()) {
        search_config.tiers.clear();
        for (const auto& t : tiers) search_config.tiers.push_back(parse_rational(t));
      }
      for (const auto& w : pinned) search_config.pinned_weights.push_back(parse_rational(w));
      search_config.perturb = !unperturbed;
      search_config.threads = opt.threads;
      const auto result = search(search_config);
      Json findings = Json::array();
      for (const auto& f : result.findings) {
        Json j{{"trial", f.trial},
               {"structure", Json::parse(serialize_structure(f.structure))},
               {"has_witness", f.report.has_witness},
               {"infeasible", f.report.infeasible}};
        if (shrink_findings) {
          const auto sh = shrink(f.structure, 1);
          j["shrunk"] = {{"structure", Json::parse(serialize_structure(sh.structure))},
                         {"steps", sh.steps},
                         {"verified", to_string(sh.verified.verdict)},
                         {"violates", sh.verified.violates()}};
        }
        findings.push_back(std::move(j));
      }
      Json tier_json = Json::array();
      for (const auto& t : search_config.tiers) tier_json.push_back(t.str());
      const Json out{{"worlds", search_config.worlds},
                     {"trials", result.trials},
                     {"seed", search_config.seed},
                     {"tiers", tier_json},
                     {"perturb", search_config.perturb},
                     {"conflicts", result.conflicts},
                     {"findings", findings}};
      if (opt.format == "text") {
        std::cout << "trials: " << result.trials << "\nconflicts: " << result.conflicts
                  << "\nfindings: " << result.findings.size() << "\n";
        for (const auto& f : findings) std::cout << "  " << f.dump() << "\n";
      } else {
        std::cout << out.dump(2) << "\n";
      }
      return kExitExpected;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
