#include "coxfine/harness.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "coxfine/appendix.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/domain_file.hpp"
#include "coxfine/errors.hpp"
#include "coxfine/fine_qcc.hpp"
#include "coxfine/functional_eq.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/parallel.hpp"
#include "coxfine/rescaling.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

namespace {

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CheckStatus pass_if(bool ok) { return ok ? CheckStatus::kPass : CheckStatus::kFail; }

class Context {
 public:
  Context(const BeliefStructure& s, const ValueTable& values) : s_(s), values_(values) {}

  Json value(ValueId id) const { return values_.value(id).str(); }
  Json set(EventSet e) const { return labels_json(s_, e); }
  Json object(const ConditionalObject& o) const {
    return Json{{"event", set(o.event)}, {"given", set(o.given)}};
  }
  Json chain(const ChainWitness& c) const {
    return Json{{"u1", set(c.u1)}, {"u2", set(c.u2)}, {"u3", set(c.u3)}};
  }
  Json chain(const Chain4& c) const {
    return Json{{"u1", set(c.u1)}, {"u2", set(c.u2)}, {"u3", set(c.u3)}, {"u4", set(c.u4)}};
  }
  Json key(const ConstrainedPairTable& t, ValueId x, ValueId y) const {
    Json j{{"x", value(x)}, {"y", value(y)}};
    if (const PairEntry* e = t.lookup(x, y)) {
      j["w"] = value(e->w);
      j["chain"] = chain(e->witness);
    }
    return j;
  }
  Json point(const ConstrainedPairTable& t, const KeyPoint& p) const { return key(t, p.x, p.y); }

 private:
  const BeliefStructure& s_;
  const ValueTable& values_;
};

Json monotone_json(const Context& c, const ConstrainedPairTable& t, const MonotoneReport& m,
                   std::span<const KeyPoint> pts) {
  Json j{{"points", m.points}};
  auto put = [&](const char* name, const std::optional<DominanceViolation>& v) {
    if (!v) {
      j[name] = "pass";
      return;
    }
    j[name] = Json{{"dominated", c.point(t, pts[v->source])}, {"dominating", c.point(t, pts[v->query])}};
  };
  put("a", m.a);
  put("b", m.b);
  put("c", m.c);
  return j;
}

Json extension_json(const Context& c, const ExtensionReport& e) {
  Json j{{"strict_mode", e.strict_mode},
         {"grid_size", e.grid_size},
         {"data_points", e.data_points},
         {"evaluated_points", e.evaluated_points},
         {"agrees_with_data", e.agrees_with_data},
         {"commutative", e.commutative},
         {"monotone_rows", e.monotone_rows},
         {"monotone_columns", e.monotone_columns},
         {"strict_interior", e.strict_interior},
         {"boundary_one", e.boundary_one},
         {"boundary_zero", e.boundary_zero},
         {"interpolation_monotone", e.interpolation_monotone}};
  if (e.first_failure) j["first_failure"] = {c.value(e.first_failure->first), c.value(e.first_failure->second)};
  if (e.first_strict_failure) {
    j["first_strict_failure"] = {c.value(e.first_strict_failure->first),
                                 c.value(e.first_strict_failure->second)};
  }
  return j;
}

Json obstruction_json(const AgreeingObstruction& o, const BeliefStructure& s) {
  Json classes = Json::array();
  for (const auto& cl : o.classes) {
    Json members = Json::array();
    for (const auto& m : cl.members) {
      members.push_back({{"object", m.label}, {"value", m.value.str()}});
    }
    classes.push_back({{"class", cl.expected.str()}, {"equal", cl.equal}, {"members", members}});
  }
  Json steps = Json::array();
  for (const auto& st : o.steps) {
    steps.push_back({{"chain",
                      {{"u1", labels_json(s, st.chain.u1)},
                       {"u2", labels_json(s, st.chain.u2)},
                       {"u3", labels_json(s, st.chain.u3)}}},
                     {"x", st.x.str()},
                     {"y", st.y.str()},
                     {"w", st.w.str()}});
  }
  return Json{{"order_preserving", o.order_preserving},
              {"classes_hold", o.classes_hold()},
              {"classes", classes},
              {"forced_steps", steps},
              {"linked", o.linked},
              {"low", o.low.str()},
              {"high", o.high.str()},
              {"strict_gap", o.strict_gap}};
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kSkipped: return "skipped";
    case CheckStatus::kInfo: return "info";
  }
  return "info";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kCounterexampleConfirmed: return "counterexample confirmed";
    case Verdict::kProbabilityConsistent: return "probability-consistent";
    case Verdict::kViolationFound: return "violation found";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const CheckRecord* PipelineReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Json labels_json(const BeliefStructure& structure, EventSet set) {
  Json out = Json::array();
  for (int i = 0; i < structure.size(); ++i) {
    if (set.contains(i)) out.push_back(structure.labels()[i]);
  }
  return out;
}

PipelineReport run_pipeline(const BeliefStructure& s, const PipelineFlags& flags) {
  require_enumerable(s);
  PipelineReport rep;
  rep.worlds = s.size();
  rep.delta = s.delta();
  rep.digest = fnv1a(serialize_structure(s));

  const ValueTable values = ValueTable::build(s);
  const Context ctx(s, values);
  auto stage = [&](const std::string& name, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    CheckRecord rec;
    rec.name = name;
    fn(rec);
    if (flags.timings) {
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    rep.checks.push_back(std::move(rec));
  };
  auto skip = [&](const std::string& name, const std::string& why) {
    stage(name, [&](CheckRecord& r) {
      r.status = CheckStatus::kSkipped;
      r.payload["reason"] = why;
    });
  };

  stage("invariants", [&](CheckRecord& r) {
    r.status = CheckStatus::kPass;
    r.payload = {{"worlds", s.size()},
                 {"trigger", ctx.set(s.trigger())},
                 {"probability", s.is_probability()}};
  });

  if (!flags.fast) {
    stage("delta", [&](CheckRecord& r) {
      const ValueTable pr = ValueTable::build(s, Valuation::kProbability);
      r.payload["delta"] = s.delta().str();
      try {
        rep.min_gap = select_delta(pr);
        r.payload["min_pr_gap"] = rep.min_gap->str();
      } catch (const Error& e) {
        r.payload["min_pr_gap"] = nullptr;
      }
      r.payload["note"] = "the minimum positive gap of the Pr value set is one valid delta";
      const auto op = check_order_preservation(s, values, pr);
      r.status = pass_if(op.holds);
      r.payload["order_preserving"] = op.holds;
      r.payload["probability_classes"] = op.probability_classes;
      r.payload["max_shift"] = op.max_shift.str();
      if (op.lower_witness) r.payload["lower_witness"] = ctx.object(*op.lower_witness);
      if (op.upper_witness) r.payload["upper_witness"] = ctx.object(*op.upper_witness);
    });
  }

  bool complement_ok = false, additivity_ok = false, monotone_ok = false;
  if (!flags.fast) {
    stage("complement", [&](CheckRecord& r) {
      const auto c = verify_complement(s, values);
      complement_ok = c.holds;
      r.status = pass_if(c.holds);
      r.payload["checked"] = c.checked;
      if (c.counterexample) r.payload["counterexample"] = ctx.object(*c.counterexample);
    });
    stage("additivity", [&](CheckRecord& r) {
      const auto a = verify_additivity(s, values);
      additivity_ok = a.holds;
      r.status = pass_if(a.holds);
      r.payload["checked"] = a.checked;
      if (a.counterexample) {
        r.payload["counterexample"] = {{"given", ctx.set(a.counterexample->given)},
                                       {"first", ctx.set(a.counterexample->first)},
                                       {"second", ctx.set(a.counterexample->second)}};
      }
    });
  }

  std::optional<ConstrainedPairTable> table;
  stage("pair_table", [&](CheckRecord& r) {
    try {
      PairTableOptions opt;
      opt.threads = flags.threads;
      table.emplace(ConstrainedPairTable::build(s, values, opt));
      r.status = CheckStatus::kPass;
      r.payload = {{"chains", table->chain_count()}, {"keys", table->size()}, {"conflicts", 0}};
    } catch (const PairConflictError& e) {
      r.status = CheckStatus::kFail;
      r.payload = {{"conflict",
                    {{"x", ctx.value(e.x)},
                     {"y", ctx.value(e.y)},
                     {"first_value", ctx.value(e.w_first)},
                     {"first_chain", ctx.chain(e.first)},
                     {"second_value", ctx.value(e.w_second)},
                     {"second_chain", ctx.chain(e.second)}}}};
    }
  });

  std::optional<MonotoneReport> monotone;
  std::optional<ClosureReport> closure;
  if (!flags.fast) {
    if (table) {
      stage("monotonicity", [&](CheckRecord& r) {
        const auto pts = key_points(*table);
        monotone = check_monotone(pts, values.size(), values.zero_id());
        monotone_ok = monotone->holds();
        r.status = pass_if(monotone_ok);
        r.payload = monotone_json(ctx, *table, *monotone, pts);
      });
      stage("closure", [&](CheckRecord& r) {
        try {
          closure = commutative_closure(*table);
        } catch (const Error& e) {
          r.status = CheckStatus::kFail;
          r.payload["conflict"] = e.what();
          return;
        }
        const auto& c = *closure;
        r.status = pass_if(c.claim_symmetric() && c.claim_product() && c.monotone.holds());
        r.payload = {{"points", c.points.size()},
                     {"symmetric_pairs", c.symmetric_pairs},
                     {"diagonal_keys", c.diagonal_keys},
                     {"claim_one_coordinate_is_one", c.claim_symmetric()},
                     {"one_law", c.one_law},
                     {"claim_product_off_trigger", c.claim_product()},
                     {"trigger_free_keys", c.trigger_free_keys},
                     {"trigger_keys", c.trigger_keys},
                     {"keys_with_both", c.keys_with_both},
                     {"closure_monotone", c.monotone.holds()}};
        if (c.symmetric_violation) {
          const auto [x, y] = *c.symmetric_violation;
          r.payload["symmetric_violation"] = {ctx.key(*table, x, y), ctx.key(*table, y, x)};
        }
        if (c.product_violation) {
          r.payload["product_violation"] = ctx.key(*table, c.product_violation->x,
                                                   c.product_violation->y);
        }
      });
      if (closure && flags.extension_resolution > 0) {
        stage("extension", [&](CheckRecord& r) {
          const TotalCombination weak(values, closure->points, false);
          const auto w = extend_total(weak, flags.extension_resolution);
          const TotalCombination strict(values, closure->points, true);
          const auto st = extend_total(strict, flags.extension_resolution);
          r.status = pass_if(w.holds_weak());
          r.payload["weak"] = extension_json(ctx, w);
          r.payload["strict"] = extension_json(ctx, st);
          r.payload["strict_epsilon"] = strict.epsilon().str();
          if (const auto gap = find_additivity_gap(weak)) {
            r.payload["additivity_gap"] = {{"x", gap->x.str()},       {"y", gap->y.str()},
                                           {"z", gap->z.str()},       {"fxz", gap->fxz.str()},
                                           {"fyz", gap->fyz.str()},   {"fsum", gap->fsum.str()}};
          }
        });
      }
    } else {
      skip("monotonicity", "pair table not well defined");
      skip("closure", "pair table not well defined");
    }
  }

  std::optional<WitnessSearch> witnesses;
  double witness_seconds = 0;
  if (table) {
    const auto start = std::chrono::steady_clock::now();
    witnesses = find_associativity_witnesses(*table, flags.witness_limit);
    witness_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  if (!flags.fast) {
    if (!flags.exhaustive) {
      skip("constrained_triples", "exhaustive sweeps disabled");
    } else if (!table) {
      skip("constrained_triples", "pair table not well defined");
    } else {
      stage("constrained_triples", [&](CheckRecord& r) {
        std::vector<std::array<Rational, 3>> queries;
        for (const auto& w : witnesses->witnesses) {
          if (queries.size() == 4) break;
          queries.push_back({values.value(w.x), values.value(w.y), values.value(w.z)});
        }
        const auto t = check_constrained_triples(s, *table, queries, flags.threads);
        r.status = pass_if(t.associative);
        r.payload = {{"chains", t.chains}, {"missing_keys", t.missing_keys}};
        if (t.counterexample) r.payload["counterexample"] = ctx.chain(*t.counterexample);
        Json qs = Json::array();
        for (const auto& q : t.queries) {
          Json j{{"triple", {q.triple[0].str(), q.triple[1].str(), q.triple[2].str()}},
                 {"constrained", q.constrained}};
          if (q.chain) j["chain"] = ctx.chain(*q.chain);
          qs.push_back(j);
        }
        r.payload["witness_triples"] = qs;
      });
    }
  }

  if (table) {
    stage("witness_search", [&](CheckRecord& r) {
      const auto& ws = *witnesses;
      rep.has_witness = ws.total > 0;
      r.status = CheckStatus::kInfo;
      r.payload = {{"found", ws.total},
                   {"combinations", ws.combinations},
                   {"boundary_laws", ws.boundary_laws}};
      Json list = Json::array();
      for (const auto& w : ws.witnesses) {
        list.push_back({{"x", ctx.value(w.x)},
                        {"y", ctx.value(w.y)},
                        {"z", ctx.value(w.z)},
                        {"lhs", ctx.value(w.lhs)},
                        {"rhs", ctx.value(w.rhs)},
                        {"keys",
                         {ctx.key(*table, w.y, w.z), ctx.key(*table, w.x, w.yz),
                          ctx.key(*table, w.x, w.y), ctx.key(*table, w.xy, w.z)}}});
      }
      r.payload["witnesses"] = list;
    });
    if (flags.timings) rep.checks.back().seconds += witness_seconds;
  } else {
    skip("witness_search", "pair table not well defined");
  }

  if (!flags.fast) {
    if (!flags.exhaustive) {
      skip("functional_equation", "exhaustive sweeps disabled");
    } else if (!table) {
      skip("functional_equation", "pair table not well defined");
    } else {
      stage("functional_equation", [&](CheckRecord& r) {
        const auto e = verify_eq7(s, *table, flags.threads);
        r.status = pass_if(e.holds);
        r.payload = {{"states", e.states}, {"missing_keys", e.missing_keys}};
        auto rw = [&](const RWitness& w) {
          return Json{{"given", ctx.set(w.given)},
                      {"event", ctx.set(w.event)},
                      {"first", ctx.set(w.first)},
                      {"second", ctx.set(w.second)}};
        };
        if (e.counterexample) r.payload["counterexample"] = rw(*e.counterexample);
        if (e.missing) r.payload["missing"] = rw(*e.missing);
      });
    }
  }

  stage("rescaling", [&](CheckRecord& r) {
    const auto inj = check_unconditional_injectivity(s, values);
    const auto sys = build_system(s, values);
    const RescalingSolver solver(sys);
    const auto v = solver.solve();
    rep.infeasible = v.status == Feasibility::kInfeasible;
    r.payload = {{"feasibility", rep.infeasible ? "infeasible" : "feasible"},
                 {"unconditional_injective", inj.holds},
                 {"variables", v.variables},
                 {"equations", v.equations},
                 {"instances", sys.instances},
                 {"zero_instances", sys.zero_instances},
                 {"unconditional_variables", v.unconditional_variables},
                 {"constraint_rows", v.constraint_rows},
                 {"rank", v.rank},
                 {"zero_branch_refuted", v.zero_branch.refuted},
                 {"collision_classes", v.collision_classes}};
    bool ok = true;
    if (v.certificate) {
      const bool replays = replay(sys, *v.certificate);
      ok = replays;
      Json terms = Json::array();
      for (const auto& t : v.certificate->terms) {
        const auto& e = sys.equations[t.equation];
        terms.push_back({{"coefficient", t.coefficient.str()},
                         {"a", ctx.value(e.a)},
                         {"b", ctx.value(e.b)},
                         {"c", ctx.value(e.c)},
                         {"witness", ctx.object(e.witness)}});
      }
      r.payload["certificate"] = {{"u", ctx.value(v.certificate->u)},
                                  {"v", ctx.value(v.certificate->v)},
                                  {"replays", replays},
                                  {"terms", terms}};
    }
    if (!rep.infeasible) {
      r.payload["identity"] = v.identity;
      r.payload["assignment"] = v.identity ? "g(x) = x" : "g(x) = (1/2)^k(x)";
      r.payload["in_unit_interval"] = v.in_unit_interval;
      ok = v.identity || !v.exponents.empty();
    }
    r.status = ok ? CheckStatus::kInfo : CheckStatus::kFail;
  });

  if (flags.qcc) {
    const InducedOrder order(values);
    stage("qcc1_qcc2", [&](CheckRecord& r) {
      const auto q = check_qcc1_qcc2(s, order);
      r.status = pass_if(q.holds());
      r.payload = {{"samples", q.samples},
                   {"total", q.total},
                   {"reflexive", q.reflexive},
                   {"transitive", q.transitive}};
    });
    stage("qcc5", [&](CheckRecord& r) {
      r.status = CheckStatus::kInfo;
      r.payload["vacuous"] = "finite domain";
    });
    if (table) {
      stage("qcc7", [&](CheckRecord& r) {
        const auto q = check_qcc7(*table);
        r.status = pass_if(q.holds());
        r.payload["points"] = q.points;
        auto put = [&](const char* name, const std::optional<Qcc7Violation>& v) {
          if (!v) {
            r.payload[name] = "pass";
            return;
          }
          r.payload[name] = {{"upper", ctx.chain(v->upper_chain)}, {"lower", ctx.chain(v->lower_chain)}};
        };
        put("a", q.a);
        put("b", q.b);
        put("c", q.c);
      });
      if (monotone) {
        stage("fine_clauses", [&](CheckRecord& r) {
          const auto f = fine_clauses(*table, *monotone, *witnesses);
          r.status = CheckStatus::kInfo;
          r.payload = {{"argument_order", "F(P(V'|V∩U), P(V|U))"},
                       {"clause1_a2", f.a2},
                       {"clause2_commutative", f.commutative},
                       {"clause3_increasing", f.increasing},
                       {"clause4_associative", f.associative},
                       {"clause5_unit", f.unit_law},
                       {"clause6_zero", f.zero_law}};
        });
      }
    }
    stage("agreeing_obstruction", [&](CheckRecord& r) {
      try {
        const auto o = agreeing_obstruction(s, values);
        const auto sq = agreeing_obstruction(s, values, [](const Rational& x) { return x * x; });
        r.status = pass_if(o.holds() && sq.holds());
        r.payload["bel"] = obstruction_json(o, s);
        r.payload["squared"] = obstruction_json(sq, s);
      } catch (const Error& e) {
        r.status = CheckStatus::kSkipped;
        r.payload["reason"] = e.what();
      }
    });
  }

  if (flags.appendix) {
    std::optional<BlockLayout> layout;
    try {
      layout = block_layout(s);
    } catch (const Error& e) {
      skip("appendix", e.what());
    }
    if (layout) {
      stage("relevant_numbers", [&](CheckRecord& r) {
        r.status = CheckStatus::kInfo;
        r.payload["count"] = relevant_numbers(s, *layout).size();
      });
      stage("closeness", [&](CheckRecord& r) {
        const auto c = check_closeness(s, *layout);
        r.status = pass_if(c.holds);
        r.payload = {{"bound", c.bound.str()},
                     {"checks", c.checks},
                     {"pairs", c.pairs},
                     {"worst", c.worst.str()},
                     {"worst_decimal", c.worst.mpq().get_d()}};
        if (c.worst_at) {
          r.payload["worst_at"] = ctx.object(*c.worst_at);
          r.payload["reference"] = ctx.set(c.worst_reference);
        }
      });
      stage("not_good_characterization", [&](CheckRecord& r) {
        const auto g = characterize_not_good(s);
        r.status = pass_if(g.holds);
        r.payload = {{"states", g.states}, {"not_good", g.not_good}};
        Json census = Json::array();
        for (const auto& [shape, n] : g.by_shape) {
          census.push_back({{"shape", ctx.set(shape)}, {"count", n}});
        }
        r.payload["by_shape"] = census;
        if (g.counterexample) r.payload["counterexample"] = ctx.chain(*g.counterexample);
      });
      std::optional<TrichotomyReport> tri;
      stage("trichotomy", [&](CheckRecord& r) {
        tri = verify_trichotomy(s, &*layout);
        r.status = pass_if(tri->holds());
        r.payload = {{"chains", tri->chains},
                     {"not_good_chains", tri->not_good_chains},
                     {"groups", tri->groups},
                     {"not_good_profiles", tri->not_good_profiles},
                     {"partner_profiles", tri->partner_profiles},
                     {"violating_chains", tri->violating_chains}};
        if (tri->violation) {
          r.payload["violation"] = {{"not_good", ctx.chain(tri->violation->not_good)},
                                    {"partner", ctx.chain(tri->violation->partner)}};
        }
      });
      stage("profile_identities", [&](CheckRecord& r) {
        const auto& id = *tri->identities;
        r.status = pass_if(id.holds());
        Json by_k = Json::object();
        for (const auto& [k, n] : id.by_k) by_k[std::to_string(k)] = n;
        r.payload = {{"matched_pairs", id.matched_pairs},
                     {"by_k", by_k},
                     {"decomposition_failures", id.decomposition_failures},
                     {"a_outside_stated", id.a_outside_stated},
                     {"master_failures", id.master_failures},
                     {"k_failures", id.k_failures},
                     {"range_failures", id.range_failures},
                     {"split_failures", id.split_failures},
                     {"k8_nonzero", id.k8_nonzero}};
        if (id.first_failure) {
          r.payload["first_failure"] = {ctx.chain(id.first_failure->first),
                                        ctx.chain(id.first_failure->second)};
        }
      });
    }
  }

  const bool axioms = complement_ok && additivity_ok && table && monotone_ok;
  if (axioms && rep.has_witness && rep.infeasible) {
    rep.verdict = Verdict::kCounterexampleConfirmed;
  } else if (table && !rep.has_witness && !rep.infeasible) {
    rep.verdict = Verdict::kProbabilityConsistent;
  } else if (rep.has_witness || rep.infeasible) {
    rep.verdict = Verdict::kViolationFound;
  } else {
    rep.verdict = Verdict::kInconclusive;
  }
  return rep;
}

Json to_json(const PipelineReport& report, const BeliefStructure& structure) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json j{{"name", c.name}, {"status", to_string(c.status)}};
    if (c.seconds > 0) j["seconds"] = c.seconds;
    for (const auto& [k, v] : c.payload.items()) j[k] = v;
    checks.push_back(std::move(j));
  }
  return Json{{"structure",
               {{"worlds", report.worlds},
                {"labels", structure.labels()},
                {"trigger", labels_json(structure, structure.trigger())},
                {"digest", report.digest}}},
              {"delta",
               {{"used", report.delta.str()},
                {"min_pr_gap", report.min_gap ? Json(report.min_gap->str()) : Json(nullptr)}}},
              {"checks", checks},
              {"verdict", to_string(report.verdict)}};
}

std::string render_text(const Json& report) {
  std::ostringstream out;
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  const auto& st = report.at("structure");
  out << "structure: " << st.at("worlds").dump() << " worlds, digest " << scalar(st.at("digest"))
      << "\n";
  out << "delta: " << scalar(report.at("delta").at("used")) << "\n";
  for (const auto& c : report.at("checks")) {
    std::string status = scalar(c.at("status"));
    for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out << "[" << status << "] " << scalar(c.at("name")) << "\n";
    for (const auto& [k, v] : c.items()) {
      if (k == "name" || k == "status") continue;
      if (v.is_array()) {
        out << "    " << k << ": " << v.size() << " entries\n";
      } else if (v.is_object()) {
        out << "    " << k << ":\n";
        for (const auto& [k2, v2] : v.items()) {
          out << "      " << k2 << " = "
              << (v2.is_structured() ? v2.dump() : scalar(v2)) << "\n";
        }
      } else {
        out << "    " << k << " = " << scalar(v) << "\n";
      }
    }
  }
  out << "verdict: " << scalar(report.at("verdict")) << "\n";
  return out.str();
}

BeliefStructure generate_structure(const SearchConfig& config, std::uint64_t trial) {
  const int n = config.worlds;
  if (n < 1 || n > kMaxEnumerationWorlds) {
    throw Error(ErrorCode::kUsage, "search needs between 1 and 14 worlds");
  }
  if (config.tiers.empty()) throw Error(ErrorCode::kUsage, "search needs at least one tier");
  if (!config.pinned_weights.empty() && config.pinned_weights.size() != std::size_t(n)) {
    throw Error(ErrorCode::kUsage, "pinned weights must match the world count");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  const int blocks = std::max(1, n / 3);
  auto block_of = [&](int w) { return std::min(w / 3, blocks - 1); };
  std::vector<Rational> base(n);
  for (int w = 0; w < n; ++w) {
    const Rational& tier = config.tiers[block_of(w) % config.tiers.size()];
    base[w] = config.pinned_weights.empty() ? tier * Rational(static_cast<long>(1 + rng() % 9))
                                            : config.pinned_weights[w];
  }
  auto labels = default_labels(n);
  const BeliefStructure plain = BeliefStructure::probability(labels, base);
  const int first = 3 * (blocks - 1);
  if (!config.perturb || n - first < 2) return plain;
  Rational gap;
  try {
    gap = select_delta(plain);
  } catch (const Error&) {
    return plain;
  }
  const Rational shift = gap * config.tiers[(blocks - 1) % config.tiers.size()];
  if (!(shift < base[first])) return plain;
  auto pert = base;
  pert[first] = base[first] - shift;
  pert[first + 1] = base[first + 1] + shift;
  EventSet trigger;
  for (int w = first; w < n; ++w) trigger = trigger | EventSet::single(w);
  return BeliefStructure(labels, base, pert, trigger, gap);
}

SearchResult search(const SearchConfig& config) {
  std::vector<std::optional<SearchFinding>> slots(config.trials);
  std::vector<char> conflict(config.trials, 0);
  PipelineFlags fast;
  fast.fast = true;
  run_partitioned(0, config.trials, std::max(1, config.threads),
                  [&](int, std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t t = lo; t < hi; ++t) {
                      BeliefStructure s = generate_structure(config, t);
                      PipelineReport rep = run_pipeline(s, fast);
                      const CheckRecord* table = rep.find("pair_table");
                      conflict[t] = table && table->status == CheckStatus::kFail;
                      if (rep.violates()) slots[t] = SearchFinding{t, std::move(s), std::move(rep)};
                    }
                  });
  SearchResult out;
  out.trials = config.trials;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    out.conflicts += conflict[t];
    if (slots[t]) out.findings.push_back(std::move(*slots[t]));
  }
  return out;
}

std::vector<std::pair<std::string, BeliefStructure>> one_step_neighbours(
    const BeliefStructure& s) {
  std::vector<std::pair<std::string, BeliefStructure>> out;
  const int n = s.size();
  if (n < 2) return out;
  auto rebuild = [&](const std::string& what, const std::vector<int>& keep, int merge_into,
                     int merged) {
    std::vector<std::string> labels;
    std::vector<Rational> base, pert;
    EventSet trigger;
    for (int w : keep) {
      std::string label = s.labels()[w];
      Rational b = s.base()[w], p = s.perturbed()[w];
      if (w == merge_into) {
        label += "+" + s.labels()[merged];
        b = b + s.base()[merged];
        p = p + s.perturbed()[merged];
      }
      if (s.trigger().contains(w)) trigger = trigger | EventSet::single(static_cast<int>(labels.size()));
      labels.push_back(std::move(label));
      base.push_back(std::move(b));
      pert.push_back(std::move(p));
    }
    try {
      out.emplace_back(what, BeliefStructure(labels, base, pert, trigger, s.delta()));
    } catch (const Error&) {
    }
  };
  for (int i = 0; i < n; ++i) {
    if (s.base()[i] != s.perturbed()[i]) continue;
    std::vector<int> keep;
    for (int w = 0; w < n; ++w) {
      if (w != i) keep.push_back(w);
    }
    rebuild("remove " + s.labels()[i], keep, -1, -1);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (s.trigger().contains(i) || s.trigger().contains(j)) continue;
      std::vector<int> keep;
      for (int w = 0; w < n; ++w) {
        if (w != j) keep.push_back(w);
      }
      rebuild("merge " + s.labels()[i] + " " + s.labels()[j], keep, i, j);
    }
  }
  return out;
}

ShrinkResult shrink(const BeliefStructure& structure, int threads) {
  PipelineFlags fast;
  fast.fast = true;
  fast.threads = threads;
  BeliefStructure current = structure;
  std::vector<std::string> steps;
  for (bool progress = true; progress;) {
    progress = false;
    for (auto& [what, next] : one_step_neighbours(current)) {
      if (run_pipeline(next, fast).violates()) {
        steps.push_back(what);
        current = std::move(next);
        progress = true;
        break;
      }
    }
  }
  PipelineFlags full;
  full.threads = threads;
  PipelineReport verified = run_pipeline(current, full);
  return ShrinkResult{std::move(current), std::move(steps), std::move(verified)};
}

}  // namespace coxfine
