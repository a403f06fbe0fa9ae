#include "voa/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "voa/errors.hpp"
#include "voa/reconstruct.hpp"
#include "voa/smear.hpp"
#include "voa/unitarity.hpp"

namespace voa {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json model_json(const ModelDescriptor& m) {
  Json j;
  j["kind"] = m.kind;
  j["depth"] = m.depth;
  if (m.kind == "virasoro") j["central_charge"] = to_string(m.central_charge);
  return j;
}

Json suite_json(const SuiteReport& rep) {
  Json j;
  j["suite"] = rep.suite;
  j["passed"] = rep.passed();
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["passed"] = c.passed;
    cj["checked"] = c.checked;
    cj["skipped_truncated"] = c.skipped_truncated;
    cj["witnesses"] = c.witnesses;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
  os << body;
}

class SuiteTimer {
 public:
  explicit SuiteTimer(bool enabled) : enabled_(enabled) {}
  template <class F>
  SuiteReport run(const std::string& name, F&& fn) {
    auto start = std::chrono::steady_clock::now();
    SuiteReport rep = fn();
    auto stop = std::chrono::steady_clock::now();
    if (enabled_)
      ms_[name] = std::chrono::duration<double, std::milli>(stop - start).count();
    return rep;
  }
  const std::map<std::string, double>& timings() const { return ms_; }

 private:
  bool enabled_;
  std::map<std::string, double> ms_;
};

// ---- verify suites ---------------------------------------------------------

SuiteReport space_suite(const Model& model) {
  SuiteReport rep;
  rep.suite = "space";
  const GradedSpace& sp = *model.space;
  CheckResult c;
  c.name = "sl2-structure";
  c.anchor = "space.sl2-relations-and-adjointness";
  for (int n = 0; n < sp.depth(); ++n) {
    ++c.checked;
    RatMatrix bracket = (*sp.raise(n + 1)) * (*sp.lower(n));
    if (n >= 1) bracket -= (*sp.lower(n - 1)) * (*sp.raise(n));
    RatMatrix expected = RatMatrix::identity(sp.dim(n));
    expected *= Scalar(2 * n);
    if (!(bracket == expected)) c.fail("[L_1, L_-1] != 2 L_0 at degree " + std::to_string(n));
    ++c.checked;
    RatMatrix lhs = sp.lower(n)->transposed() * sp.gram(n + 1);
    RatMatrix rhs = sp.gram(n) * (*sp.raise(n + 1));
    if (!(lhs == rhs)) c.fail("sl2 adjointness fails at degree " + std::to_string(n));
  }
  rep.checks.push_back(std::move(c));
  return rep;
}

SuiteReport locality_suite(const Model& model) {
  SuiteReport rep;
  rep.suite = "locality";
  FieldTable id = FieldTable::identity(model.space);
  std::vector<const FieldTable*> fields{&id};
  for (const auto& g : model.generators) fields.push_back(&g);
  CheckResult c;
  c.name = "pairwise-order";
  c.anchor = "locality.minimal-vanishing-power";
  for (size_t i = 0; i < fields.size(); ++i) {
    for (size_t j = i; j < fields.size(); ++j) {
      const int bound = *fields[i]->weight() + *fields[j]->weight() + 2;
      auto loc = locality_order(*fields[i], *fields[j], bound);
      ++c.checked;
      if (!loc.local())
        c.fail("(" + fields[i]->name + ", " + fields[j]->name + ") not local up to " +
               std::to_string(bound));
      else
        c.witnesses.push_back("order(" + fields[i]->name + ", " + fields[j]->name +
                              ") = " + std::to_string(*loc.order));
    }
  }
  rep.checks.push_back(std::move(c));
  return rep;
}

SuiteReport covariance_suite(const Model& model) {
  SuiteReport rep;
  rep.suite = "covariance";
  CheckResult c;
  c.name = "quasi-primary-mode-relations";
  c.anchor = "covariance.sl2-shifted-mode-bracket";
  for (const auto& g : model.generators) {
    auto covr = covariance_check(g, *g.weight());
    c.checked += covr.instances_checked;
    c.skipped_truncated += covr.instances_skipped;
    if (!covr.passed)
      for (const auto& v : covr.violations)
        c.fail("generator " + g.name + ": " + v.detail + " (k=" + std::to_string(v.k) +
               ", m=" + std::to_string(v.m) + ")");
  }
  rep.checks.push_back(std::move(c));
  return rep;
}

SuiteReport borcherds_suite(const Model& model, ExecMode mode) {
  SuiteReport rep;
  rep.suite = "borcherds";
  const GradedSpace& sp = *model.space;
  const int depth = sp.depth();
  CheckResult c;
  c.name = "commutator-oracle";
  c.anchor = "borcherds.commutator-formula-vs-direct";
  for (const auto& A : model.generators) {
    for (const auto& B : model.generators) {
      BorcherdsCommutator bc = make_borcherds_commutator(A, B);
      struct Cell {
        long checked = 0, skipped = 0;
        std::vector<std::string> fails;
      };
      const int lo = -depth, hi = depth;
      const int width = hi - lo + 1;
      std::vector<Cell> cells(static_cast<size_t>(width) * width);
      for_each_task(cells.size(), mode, [&](std::size_t t) {
        const int m = lo + static_cast<int>(t) / width;
        const int n = lo + static_cast<int>(t) % width;
        Cell& cell = cells[t];
        for (int deg = 0; deg <= depth; ++deg) {
          for (int i = 0; i < sp.dim(deg); ++i) {
            Vec v = sp.basis_vector(deg, i);
            Vec direct = commutator_direct(A, B, m, n, v);
            Vec oracle = bc.apply(m, n, v);
            if (direct.truncated || oracle.truncated) {
              ++cell.skipped;
              continue;
            }
            ++cell.checked;
            if (!(direct == oracle)) {
              std::ostringstream os;
              os << "[" << A.name << "_" << m << ", " << B.name << "_" << n
                 << "] mismatch on " << sp.label(deg, i);
              if (cell.fails.size() < 4) cell.fails.push_back(os.str());
            }
          }
        }
      });
      for (auto& cell : cells) {
        c.checked += cell.checked;
        c.skipped_truncated += cell.skipped;
        for (auto& f : cell.fails) c.fail(std::move(f));
      }
    }
  }
  rep.checks.push_back(std::move(c));
  return rep;
}

SuiteReport reconstruction_suite(const Model& model, const VAStructure& va) {
  SuiteReport rep;
  rep.suite = "reconstruction";
  const GradedSpace& sp = *model.space;
  {
    CheckResult c;
    c.name = "generator-round-trip";
    c.anchor = "reconstruction.field-of-state-reproduces-generator";
    for (const auto& g : model.generators) {
      ++c.checked;
      Vec s = state_of_field(g);
      FieldTable rebuilt = va.field_of(s);
      for (const auto& mm : field_mismatches(rebuilt, g))
        c.fail("Y(state(" + g.name + ")) != " + g.name + ": " + mm.detail);
    }
    rep.checks.push_back(std::move(c));
  }
  {
    CheckResult c;
    c.name = "state-of-field-inverse";
    c.anchor = "reconstruction.state-field-bijection";
    for (int deg = 0; deg <= sp.depth(); ++deg)
      for (int i = 0; i < sp.dim(deg); ++i) {
        ++c.checked;
        Vec s = state_of_field(va.field_for_basis(deg, i));
        if (!(s == sp.basis_vector(deg, i)))
          c.fail("state(Y(v)) != v for v = " + sp.label(deg, i));
      }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

SuiteReport l1closure_suite(const Model& model, const VAStructure& va) {
  SuiteReport rep;
  rep.suite = "l1closure";
  CheckResult c;
  c.name = "product-inherits-l1-relation";
  c.anchor = "l1closure.n-products-keep-sl2-covariance";
  auto closure = dong_closure(model.generators);
  const int depth = model.space->depth();
  for (size_t i = 0; i < closure.size(); ++i) {
    for (size_t j = 0; j < closure.size(); ++j) {
      auto wa = closure[i].weight(), wb = closure[j].weight();
      if (!wa || !wb) continue;
      const int n_hi = *wa + *wb - 1;
      const int n_lo = *wa + *wb - 1 - depth;
      for (int n = n_hi; n >= n_lo; --n) {
        auto r = l1_closure_check(closure[i], closure[j], n, va);
        c.checked += r.checked;
        c.skipped_truncated += r.skipped_truncated;
        if (!r.passed)
          for (const auto& w : r.witnesses)
            c.fail("(" + closure[i].name + ", " + closure[j].name + ", n=" +
                   std::to_string(n) + "): " + w);
      }
    }
  }
  rep.checks.push_back(std::move(c));
  return rep;
}

}  // namespace

const std::vector<std::string>& verify_suite_registry() {
  static const std::vector<std::string> kSuites = {
      "space",      "axioms",         "locality",  "covariance",
      "borcherds",  "reconstruction", "unitarity", "l1closure"};
  return kSuites;
}

RunConfig parse_config_text(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  if (!j.contains("model")) throw ConfigError("missing field: model");
  const auto& jm = j["model"];
  if (!jm.contains("kind") || !jm["kind"].is_string())
    throw ConfigError("model.kind must be a string");
  cfg.model.kind = jm["kind"].get<std::string>();
  if (cfg.model.kind != "heisenberg" && cfg.model.kind != "virasoro")
    throw ConfigError("model.kind must be heisenberg or virasoro");
  if (jm.contains("depth")) {
    if (!jm["depth"].is_number_integer() || jm["depth"].get<int>() < 0)
      throw ConfigError("model.depth must be a non-negative integer");
    cfg.model.depth = jm["depth"].get<int>();
  }
  if (jm.contains("central_charge")) {
    try {
      cfg.model.central_charge = parse_rational(jm["central_charge"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("model.central_charge: ") + e.what());
    }
  }
  if (j.contains("suites")) {
    if (!j["suites"].is_array()) throw ConfigError("suites must be an array of names");
    for (const auto& s : j["suites"]) {
      std::string name = s.get<std::string>();
      const auto& reg = verify_suite_registry();
      if (std::find(reg.begin(), reg.end(), name) == reg.end())
        throw ConfigError("unknown suite: " + name);
      cfg.suites.push_back(name);
    }
  }
  if (j.contains("tolerance")) {
    cfg.tolerance = j["tolerance"].get<double>();
    if (!(cfg.tolerance > 0)) throw ConfigError("tolerance must be positive");
  }
  if (j.contains("cutoffs")) {
    cfg.cutoffs.clear();
    for (const auto& c : j["cutoffs"]) {
      int m = c.get<int>();
      if (m <= 0) throw ConfigError("cutoffs must be positive");
      cfg.cutoffs.push_back(m);
    }
    if (cfg.cutoffs.empty()) throw ConfigError("cutoffs must not be empty");
  }
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("timings")) cfg.include_timings = j["timings"].get<bool>();
  if (j.contains("exec")) cfg.exec = exec_mode_from_name(j["exec"].get<std::string>());
  return cfg;
}

int cmd_build(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Model model = config.model.build();
    const GradedSpace& sp = *model.space;
    Json j;
    j["schema_version"] = 1;
    j["command"] = "build";
    j["model"] = model_json(config.model);
    j["dims"] = sp.dims();
    j["total_dim"] = sp.total_dim();
    Json gens = Json::array();
    for (const auto& g : model.generators) {
      Json gj;
      gj["name"] = g.name;
      gj["weight"] = *g.weight();
      const int bound = 2 * *g.weight() + 2;
      auto loc = locality_order(g, g, bound);
      if (loc.local()) gj["self_locality_order"] = *loc.order;
      gens.push_back(std::move(gj));
    }
    j["generators"] = std::move(gens);
    Json labels = Json::array();
    for (int n = 0; n <= sp.depth(); ++n) {
      Json row = Json::array();
      for (int i = 0; i < sp.dim(n); ++i) row.push_back(sp.label(n, i));
      labels.push_back(std::move(row));
    }
    j["basis_labels"] = std::move(labels);
    std::string body = j.dump(2) + "\n";
    if (config.write_json) write_file(config.out_dir, "build.json", body);
    out << body;
    return kExitOk;
  } catch (const GramDegenerate& e) {
    err << "build failed: " << e.what() << "\n";
    return kExitCheckFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites =
      config.suites.empty() ? verify_suite_registry() : config.suites;
  try {
    Model model = config.model.build();
    SuiteTimer timer(true);

    // Several suites share the reconstructed structure; build it lazily.
    bool have_va = false;
    VAStructure va;
    auto ensure_va = [&]() -> VAStructure& {
      if (!have_va) {
        va = build_Y(model.space, model.generators);
        have_va = true;
      }
      return va;
    };

    std::vector<SuiteReport> reports;
    for (const auto& name : suites) {
      SuiteReport rep = timer.run(name, [&]() -> SuiteReport {
        if (name == "space") return space_suite(model);
        if (name == "axioms") return axiom_suite(ensure_va(), config.exec);
        if (name == "locality") return locality_suite(model);
        if (name == "covariance") return covariance_suite(model);
        if (name == "borcherds") return borcherds_suite(model, config.exec);
        if (name == "reconstruction") return reconstruction_suite(model, ensure_va());
        if (name == "unitarity") {
          SuiteReport u;
          u.suite = "unitarity";
          auto t = theta_check(model.theta);
          auto inv = invariant_form_check(ensure_va(), model.theta, config.exec);
          auto crit = hermitian_generating_criterion(ensure_va(), model.theta);
          for (auto& c : t.checks) u.checks.push_back(std::move(c));
          for (auto& c : inv.checks) u.checks.push_back(std::move(c));
          for (auto& c : crit.checks) u.checks.push_back(std::move(c));
          return u;
        }
        if (name == "l1closure") return l1closure_suite(model, ensure_va());
        throw ConfigError("unknown suite: " + name);
      });
      reports.push_back(std::move(rep));
    }

    Json j;
    j["schema_version"] = 1;
    j["command"] = "verify";
    j["model"] = model_json(config.model);
    Json jsuites = Json::array();
    bool all_passed = true;
    for (const auto& rep : reports) {
      all_passed = all_passed && rep.passed();
      jsuites.push_back(suite_json(rep));
    }
    j["suites"] = std::move(jsuites);
    j["passed"] = all_passed;
    if (config.include_timings) {
      Json jt;
      for (const auto& [name, ms] : timer.timings()) jt[name] = fmt_double(ms);
      j["timings_ms"] = std::move(jt);
    }
    std::string body = j.dump(2) + "\n";
    if (config.write_json) write_file(config.out_dir, "verify.json", body);

    for (const auto& rep : reports) {
      out << (rep.passed() ? "[PASS] " : "[FAIL] ") << rep.suite;
      long checked = 0, skipped = 0;
      for (const auto& c : rep.checks) {
        checked += c.checked;
        skipped += c.skipped_truncated;
      }
      out << " (checked " << checked << ", skipped " << skipped << ")\n";
    }
    if (!all_passed) {
      for (const auto& rep : reports) {
        if (const CheckResult* c = rep.first_failure()) {
          err << "first failure: suite " << rep.suite << ", check " << c->name;
          if (!c->witnesses.empty()) err << ": " << c->witnesses.front();
          err << "\n";
          break;
        }
      }
      return kExitCheckFailure;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GramDegenerate& e) {
    err << "degenerate model: " << e.what() << "\n";
    return kExitCheckFailure;
  } catch (const HeadroomExceeded& e) {
    err << "truncation exhausted: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const BudgetExhausted& e) {
    err << "closure budget exhausted: " << e.what() << "\n";
    return kExitTruncation;
  }
}

int cmd_smear(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Model model = config.model.build();
    const GradedSpace& sp = *model.space;
    const FieldTable& gen = model.generators.front();
    const int d = *gen.weight();
    Vec vac = sp.vacuum();

    Json summary;
    summary["schema_version"] = 1;
    summary["command"] = "smear";
    summary["model"] = model_json(config.model);
    bool ok = true;

    // Disjoint-support commutator decay, with an overlapping-support control.
    BumpSpec f{0.0, 0.8, 1.0};
    BumpSpec g{3.14159265358979323846, 0.8, 1.0};
    BumpSpec g_control{0.4, 0.8, 1.0};
    DecayTable disjoint = disjoint_commutator_decay(gen, gen, f, g, vac, config.cutoffs);
    int max_cutoff = *std::max_element(config.cutoffs.begin(), config.cutoffs.end());
    TrigPoly fc = bump_fourier(f, max_cutoff);
    TrigPoly gcc = bump_fourier(g_control, max_cutoff);
    DecayTable control = commutator_decay(gen, gen, fc, gcc, vac, config.cutoffs);
    {
      std::ostringstream csv;
      csv << "cutoff,disjoint_residual,control_residual\r\n";
      Json rows = Json::array();
      for (size_t i = 0; i < disjoint.cutoffs.size(); ++i) {
        csv << disjoint.cutoffs[i] << "," << fmt_double(disjoint.residuals[i]) << ","
            << fmt_double(control.residuals[i]) << "\r\n";
        Json row;
        row["cutoff"] = disjoint.cutoffs[i];
        row["disjoint_residual"] = disjoint.residuals[i];
        row["control_residual"] = control.residuals[i];
        rows.push_back(std::move(row));
      }
      if (config.write_csv) write_file(config.out_dir, "decay.csv", csv.str());
      summary["decay"] = std::move(rows);
    }

    // Empirical Sobolev order over the vacuum and low-degree basis vectors.
    {
      std::ostringstream csv;
      csv << "degree,index,empirical_order\r\n";
      Json rows = Json::array();
      const int window = sp.depth();
      for (int deg = 0; deg <= std::min(2, sp.depth()); ++deg) {
        for (int i = 0; i < sp.dim(deg); ++i) {
          auto est = order_estimate(gen, sp.basis_vector(deg, i), window - deg);
          csv << deg << "," << i << "," << est.empirical_order << "\r\n";
          Json row;
          row["degree"] = deg;
          row["index"] = i;
          row["empirical_order"] = est.empirical_order;
          row["converged"] = est.converged;
          rows.push_back(std::move(row));
        }
      }
      if (config.write_csv) write_file(config.out_dir, "order.csv", csv.str());
      summary["order_estimates"] = std::move(rows);
    }

    // Infinitesimal covariance residuals over monomials and low basis states.
    {
      std::ostringstream csv;
      csv << "k,n,max_relative_residual\r\n";
      Json rows = Json::array();
      double worst = 0.0;
      for (int k = -1; k <= 1; ++k) {
        for (int n = -3; n <= 3; ++n) {
          double max_rel = 0.0;
          for (int deg = 0; deg <= std::min(2, sp.depth()); ++deg)
            for (int i = 0; i < sp.dim(deg); ++i) {
              auto res = infinitesimal_covariance_check(gen, d, k, TrigPoly::monomial(n),
                                                        sp.basis_vector(deg, i));
              if (res.truncated) continue;
              max_rel = std::max(max_rel, res.relative());
            }
          worst = std::max(worst, max_rel);
          csv << k << "," << n << "," << fmt_double(max_rel) << "\r\n";
          Json row;
          row["k"] = k;
          row["n"] = n;
          row["max_relative_residual"] = max_rel;
          rows.push_back(std::move(row));
        }
      }
      if (config.write_csv) write_file(config.out_dir, "covariance.csv", csv.str());
      summary["infinitesimal_covariance"] = std::move(rows);
      summary["covariance_within_tolerance"] = worst <= config.tolerance;
      ok = ok && worst <= config.tolerance;
    }

    // Sobolev summability diagnostic.
    {
      std::ostringstream csv;
      csv << "order,cutoff,partial_full,partial_double,tail_bound,max_summand_m2n2\r\n";
      Json rows = Json::array();
      for (int N = 0; N <= 1; ++N) {
        auto diag = sobolev_summability_diagnostic(N, 100);
        csv << N << "," << diag.cutoff << "," << fmt_double(diag.partial_full) << ","
            << fmt_double(diag.partial_double) << "," << fmt_double(diag.tail_bound())
            << "," << fmt_double(diag.max_summand_times_m2n2) << "\r\n";
        Json row;
        row["order"] = N;
        row["cutoff"] = diag.cutoff;
        row["partial_full"] = diag.partial_full;
        row["partial_double"] = diag.partial_double;
        row["monotone"] = diag.monotone;
        row["cauchy_within_tail_bound"] = diag.cauchy_within_tail_bound();
        row["max_summand_times_m2n2"] = diag.max_summand_times_m2n2;
        rows.push_back(std::move(row));
        ok = ok && diag.monotone && diag.cauchy_within_tail_bound() &&
             diag.max_summand_times_m2n2 <= 1.0;
      }
      if (config.write_csv) write_file(config.out_dir, "summability.csv", csv.str());
      summary["summability"] = std::move(rows);
    }

    // Decay sanity: residuals must decrease and the control must dominate.
    {
      bool decreasing = true;
      for (size_t i = 1; i < disjoint.residuals.size(); ++i)
        if (disjoint.residuals[i] > disjoint.residuals[i - 1]) decreasing = false;
      summary["decay_decreasing"] = decreasing;
      double last_control = control.residuals.empty() ? 0.0 : control.residuals.back();
      double last_disjoint = disjoint.residuals.empty() ? 0.0 : disjoint.residuals.back();
      summary["control_dominates"] = last_control > 10.0 * last_disjoint;
      ok = ok && decreasing && last_control > 10.0 * last_disjoint;
    }

    summary["passed"] = ok;
    std::string body = summary.dump(2) + "\n";
    if (config.write_json) write_file(config.out_dir, "smear.json", body);
    out << body;
    if (!ok) {
      err << "smear checks failed\n";
      return kExitCheckFailure;
    }
    return kExitOk;
  } catch (const SupportOverlap& e) {
    err << "support overlap: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GramDegenerate& e) {
    err << "degenerate model: " << e.what() << "\n";
    return kExitCheckFailure;
  }
}

}  // namespace voa
