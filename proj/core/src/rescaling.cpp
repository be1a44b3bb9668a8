#include "coxfine/rescaling.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

namespace coxfine {

namespace {

constexpr std::uint32_t kNpos = ~std::uint32_t{0};
constexpr std::size_t kNoEquation = ~std::size_t{0};

template <typename Key>
using Sparse = std::vector<std::pair<Key, Rational>>;

// dst += k · src, both sorted by key; zero entries are dropped.
template <typename Key>
void axpy(Sparse<Key>& dst, const Rational& k, const Sparse<Key>& src) {
  if (k.is_zero() || src.empty()) return;
  Sparse<Key> out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(std::move(dst[i++]));
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      out.emplace_back(src[j].first, k * src[j].second);
      ++j;
    } else {
      Rational v = dst[i].second + k * src[j].second;
      if (!v.is_zero()) out.emplace_back(dst[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  dst = std::move(out);
}

template <typename Key>
Sparse<Key> from_terms(std::initializer_list<std::pair<Key, long>> terms) {
  std::map<Key, Rational> acc;
  for (const auto& [k, c] : terms) acc[k] = acc[k] + Rational(c);
  Sparse<Key> out;
  for (auto& [k, c] : acc) {
    if (!c.is_zero()) out.emplace_back(k, std::move(c));
  }
  return out;
}

template <typename Key>
const Rational* coefficient(const Sparse<Key>& v, Key key) {
  auto it = std::lower_bound(v.begin(), v.end(), key,
                             [](const auto& e, Key k) { return e.first < k; });
  return it != v.end() && it->first == key ? &it->second : nullptr;
}

std::uint64_t form_hash(const RescalingSolver::Form& f) {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (const auto& [v, c] : f) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= c.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

InjectivityReport check_unconditional_injectivity(const BeliefStructure& structure,
                                                  const ValueTable& values) {
  require_enumerable(structure);
  InjectivityReport r;
  const std::uint64_t full = structure.worlds().bits();
  for (std::uint64_t u = 1; u <= full && r.holds; ++u) {
    const ValueId bu = values.id(u, full);
    for_each_submask(u, [&](std::uint64_t v) {
      if (v == u || !r.holds) return;
      ++r.checked;
      if (values.id(v, full) >= bu) {
        r.holds = false;
        r.counterexample = std::make_pair(EventSet(v), EventSet(u));
      }
    });
  }
  return r;
}

LogLinearSystem build_system(const BeliefStructure& structure, const ValueTable& values) {
  require_enumerable(structure);
  LogLinearSystem sys;
  sys.values = &values;
  sys.unconditional.assign(values.size(), false);
  const std::uint64_t full = structure.worlds().bits();
  std::set<std::tuple<ValueId, ValueId, ValueId>> seen;
  std::vector<bool> used(values.size(), false);
  for (std::uint64_t u = 1; u <= full; ++u) {
    const ValueId b = values.id(u, full);
    sys.unconditional[b] = true;
    for_each_submask(u, [&](std::uint64_t s) {
      if (s == 0) {
        ++sys.zero_instances;
        return;
      }
      ++sys.instances;
      const ValueId a = values.id(s, u);
      const ValueId c = values.id(s, full);
      if (!seen.emplace(std::min(a, b), std::max(a, b), c).second) return;
      sys.equations.push_back({a, b, c, ConditionalObject{EventSet(s), EventSet(u)}});
      used[a] = used[b] = used[c] = true;
    });
  }
  for (ValueId v = 0; v < values.size(); ++v) {
    if (used[v]) sys.variables.push_back(v);
  }
  return sys;
}

bool replay(const LogLinearSystem& system, const Certificate& cert) {
  std::map<ValueId, Rational> acc;
  for (const auto& t : cert.terms) {
    if (t.equation >= system.equations.size()) return false;
    const auto& e = system.equations[t.equation];
    acc[e.a] = acc[e.a] + t.coefficient;
    acc[e.b] = acc[e.b] + t.coefficient;
    acc[e.c] = acc[e.c] - t.coefficient;
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
  if (cert.u == cert.v || acc.size() != 2) return false;
  auto iu = acc.find(cert.u), iv = acc.find(cert.v);
  return iu != acc.end() && iv != acc.end() && iu->second == Rational(1) &&
         iv->second == Rational(-1);
}

RescalingSolver::RescalingSolver(const LogLinearSystem& system) : system_(&system) {
  const ValueTable& values = *system.values;
  const ValueId zero = values.zero_id();
  column_of_.assign(values.size(), kNpos);
  for (ValueId v = 0; v < values.size(); ++v) {
    if (system.unconditional[v] && v != zero) {
      column_of_[v] = static_cast<std::uint32_t>(value_of_column_.size());
      value_of_column_.push_back(v);
    }
  }
  pivot_of_column_.assign(value_of_column_.size(), kNpos);
  defining_.assign(values.size(), kNoEquation);

  auto insert = [&](Sparse<std::uint32_t> row, Combination prov) {
    ++rows_;
    const Sparse<std::uint32_t> original = row;
    for (const auto& [col, coef] : original) {
      const std::uint32_t p = pivot_of_column_[col];
      if (p == kNpos) continue;
      const Rational* live = coefficient(row, col);
      if (!live) continue;
      const Rational k = -*live;
      axpy(row, k, pivots_[p].row);
      axpy(prov, k, pivots_[p].provenance);
    }
    if (row.empty()) return;
    const std::uint32_t col = row.front().first;
    const Rational inv = Rational(1) / row.front().second;
    for (auto& [c, v] : row) v = v * inv;
    for (auto& [e, v] : prov) v = v * inv;
    for (Pivot& other : pivots_) {
      const Rational* k = coefficient(other.row, col);
      if (!k) continue;
      const Rational neg = -*k;
      axpy(other.row, neg, row);
      axpy(other.provenance, neg, prov);
    }
    pivot_of_column_[col] = static_cast<std::uint32_t>(pivots_.size());
    pivots_.push_back({col, std::move(row), std::move(prov)});
  };

  for (std::size_t e = 0; e < system.equations.size(); ++e) {
    const auto& eq = system.equations[e];
    const std::uint32_t cb = column_of_[eq.b], cc = column_of_[eq.c];
    if (column_of_[eq.a] != kNpos) {
      insert(from_terms<std::uint32_t>({{column_of_[eq.a], 1}, {cb, 1}, {cc, -1}}),
             Combination{{e, Rational(1)}});
    } else if (defining_[eq.a] == kNoEquation) {
      defining_[eq.a] = e;
    } else {
      const std::size_t d = defining_[eq.a];
      const auto& def = system.equations[d];
      insert(from_terms<std::uint32_t>(
                 {{cb, 1}, {cc, -1}, {column_of_[def.b], -1}, {column_of_[def.c], 1}}),
             Combination{{d, Rational(-1)}, {e, Rational(1)}});
    }
  }
}

RescalingSolver::Form RescalingSolver::canonical(ValueId v) const {
  const std::uint32_t col = column_of_[v];
  if (col == kNpos) {
    const auto& def = system_->equations[defining_[v]];
    Form f = canonical(def.c);
    axpy(f, Rational(-1), canonical(def.b));
    return f;
  }
  const std::uint32_t p = pivot_of_column_[col];
  if (p == kNpos) return Form{{v, Rational(1)}};
  Form f;
  for (const auto& [c, k] : pivots_[p].row) {
    if (c != col) f.emplace_back(value_of_column_[c], -k);
  }
  return f;
}

RescalingSolver::Combination RescalingSolver::provenance(ValueId v) const {
  const std::uint32_t col = column_of_[v];
  if (col == kNpos) {
    const std::size_t d = defining_[v];
    const auto& def = system_->equations[d];
    Combination c{{d, Rational(1)}};
    axpy(c, Rational(1), provenance(def.c));
    axpy(c, Rational(-1), provenance(def.b));
    return c;
  }
  const std::uint32_t p = pivot_of_column_[col];
  return p == kNpos ? Combination{} : pivots_[p].provenance;
}

std::optional<Certificate> RescalingSolver::certificate_for(ValueId u, ValueId v) const {
  if (u == v || u >= column_of_.size() || v >= column_of_.size()) return std::nullopt;
  const bool known_u = column_of_[u] != kNpos || defining_[u] != kNoEquation;
  const bool known_v = column_of_[v] != kNpos || defining_[v] != kNoEquation;
  if (!known_u || !known_v || canonical(u) != canonical(v)) return std::nullopt;
  Combination c = provenance(u);
  axpy(c, Rational(-1), provenance(v));
  Certificate cert{u, v, {}};
  for (auto& [e, k] : c) cert.terms.push_back({e, std::move(k)});
  return cert;
}

std::vector<std::vector<ValueId>> RescalingSolver::collision_classes() const {
  std::unordered_map<std::uint64_t, std::vector<std::pair<ValueId, Form>>> buckets;
  std::vector<std::vector<ValueId>> classes;
  // Index into `classes` per (bucket, member) so members join the right class.
  std::unordered_map<ValueId, std::size_t> class_of;
  for (ValueId v : system_->variables) {
    if (v == system_->values->zero_id()) continue;
    Form f = canonical(v);
    auto& bucket = buckets[form_hash(f)];
    bool placed = false;
    for (const auto& [w, g] : bucket) {
      if (g != f) continue;
      auto it = class_of.find(w);
      if (it == class_of.end()) {
        class_of[w] = classes.size();
        classes.push_back({w});
        it = class_of.find(w);
      }
      classes[it->second].push_back(v);
      class_of[v] = it->second;
      placed = true;
      break;
    }
    if (!placed) bucket.emplace_back(v, std::move(f));
  }
  return classes;
}

FeasibilityVerdict RescalingSolver::solve() const {
  const LogLinearSystem& sys = *system_;
  const ValueTable& values = *sys.values;
  FeasibilityVerdict out;
  out.variables = sys.variables.size();
  out.equations = sys.equations.size();
  out.unconditional_variables = value_of_column_.size();
  out.constraint_rows = rows_;
  out.rank = pivots_.size();

  std::vector<ValueId> units;
  for (ValueId v = 0; v < values.size() && units.size() < 2; ++v) {
    if (sys.unconditional[v] && v != values.zero_id()) units.push_back(v);
  }
  if (units.size() == 2) {
    out.zero_branch.refuted = true;
    out.zero_branch.collision = std::make_pair(units[0], units[1]);
  }

  const auto classes = collision_classes();
  out.collision_classes = classes.size();
  if (!classes.empty()) {
    out.status = Feasibility::kInfeasible;
    out.certificate = certificate_for(classes.front()[0], classes.front()[1]);
    return out;
  }

  out.status = Feasibility::kFeasible;
  out.identity = std::all_of(sys.equations.begin(), sys.equations.end(), [&](const auto& e) {
    return values.value(e.a) * values.value(e.b) == values.value(e.c);
  });
  if (out.identity) return out;

  std::vector<ValueId> free;
  for (std::uint32_t c = 0; c < value_of_column_.size(); ++c) {
    if (pivot_of_column_[c] == kNpos) free.push_back(value_of_column_[c]);
  }
  std::vector<Form> forms;
  forms.reserve(sys.variables.size());
  for (ValueId v : sys.variables) forms.push_back(canonical(v));

  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::unordered_map<ValueId, Rational> t;
    for (ValueId f : free) t.emplace(f, Rational(static_cast<long>(1 + rng() % (1U << 20))));
    std::vector<Rational> level(forms.size());
    mpz_class scale = 1;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      Rational s(0);
      for (const auto& [f, k] : forms[i]) s = s + k * t.at(f);
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), s.mpq().get_den_mpz_t());
      level[i] = std::move(s);
    }
    const Rational factor{mpq_class(scale)};
    std::vector<std::pair<ValueId, Rational>> exps;
    bool unit = true;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      Rational k = level[i] * factor;
      if (sys.variables[i] != values.one_id() && k.sign() <= 0) unit = false;
      exps.emplace_back(sys.variables[i], std::move(k));
    }
    std::vector<Rational> sorted;
    for (const auto& e : exps) sorted.push_back(e.second);
    std::sort(sorted.begin(), sorted.end());
    const bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    if (!injective) continue;
    out.exponents = std::move(exps);
    out.in_unit_interval = unit;
    if (unit) break;
  }
  return out;
}

FeasibilityVerdict solve(const LogLinearSystem& system) { return RescalingSolver(system).solve(); }

std::vector<std::pair<ValueId, ValueId>> forced_pairs(const RescalingSolver& solver) {
  std::vector<std::pair<ValueId, ValueId>> out;
  for (const auto& cls : solver.collision_classes()) {
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        out.emplace_back(std::min(cls[i], cls[j]), std::max(cls[i], cls[j]));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<ValueId, ValueId>> forced_pairs_dense(const LogLinearSystem& system) {
  const auto& vars = system.variables;
  std::unordered_map<ValueId, std::uint32_t> index;
  for (std::uint32_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;

  // Echelon rows; each new row is reduced by every earlier pivot, so reducing
  // a vector by the pivots in creation order decides row-space membership.
  std::vector<Sparse<std::uint32_t>> rows;
  std::vector<std::uint32_t> pivot_col;
  std::vector<std::uint32_t> pivot_row(vars.size(), kNpos);
  auto reduce = [&](Sparse<std::uint32_t>& v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational* k = coefficient(v, pivot_col[r]);
      if (k) {
        const Rational neg = -*k;
        axpy(v, neg, rows[r]);
      }
    }
  };
  for (const auto& e : system.equations) {
    auto row = from_terms<std::uint32_t>({{index.at(e.a), 1}, {index.at(e.b), 1}, {index.at(e.c), -1}});
    reduce(row);
    if (row.empty()) continue;
    const Rational inv = Rational(1) / row.front().second;
    for (auto& [c, v] : row) v = v * inv;
    pivot_row[row.front().first] = static_cast<std::uint32_t>(rows.size());
    pivot_col.push_back(row.front().first);
    rows.push_back(std::move(row));
  }

  std::vector<Sparse<std::uint32_t>> normal(vars.size());
  for (std::uint32_t i = 0; i < vars.size(); ++i) {
    normal[i] = Sparse<std::uint32_t>{{i, Rational(1)}};
    reduce(normal[i]);
  }
  std::vector<std::pair<ValueId, ValueId>> out;
  for (std::uint32_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == system.values->zero_id()) continue;
    for (std::uint32_t j = i + 1; j < vars.size(); ++j) {
      if (normal[i] == normal[j]) out.emplace_back(vars[i], vars[j]);
    }
  }
  return out;
}

}  // namespace coxfine
