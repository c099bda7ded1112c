// Command-line front end for the integer complexity toolkit.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/range error,
// 3 indeterminate (a needed stability verdict is unresolved under the
// strict policy).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intcpx/complexity.hpp"
#include "intcpx/defect.hpp"
#include "intcpx/expression.hpp"
#include "intcpx/ldpoly.hpp"
#include "intcpx/represent.hpp"
#include "intcpx/stability.hpp"
#include "intcpx/structure.hpp"

namespace {

using nlohmann::json;
using namespace intcpx;

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kUsageError = 2;
constexpr int kIndeterminate = 3;

struct Session {
  std::string table_path;
  std::uint64_t table_limit = 1'000'000;
  unsigned horizon = StabilityScanner::kDefaultHorizon;
  std::string policy_name = "strict";
  std::string format = "text";
  unsigned threads = 1;

  std::optional<ComplexityTable> table;
  std::optional<ComplexityOracle> oracle;
  std::optional<StabilityScanner> scanner;

  Policy policy() const { return policy_from_string(policy_name); }
  bool json_output() const { return format == "json"; }

  const ComplexityTable& get_table() {
    if (!table) {
      if (!table_path.empty() && std::filesystem::exists(table_path)) {
        table = ComplexityTable::load(table_path);
      } else {
        table = ComplexityTable::build(table_limit);
      }
    }
    return *table;
  }
  const ComplexityOracle& get_oracle() {
    if (!oracle) oracle.emplace(get_table());
    return *oracle;
  }
  const StabilityScanner& get_scanner() {
    if (!scanner) scanner.emplace(get_oracle(), horizon);
    return *scanner;
  }

  void emit(const json& j, const std::string& text) const {
    if (json_output()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << text;
    }
  }
};

std::vector<unsigned> parse_tuple(const std::string& csv) {
  std::vector<unsigned> out;
  if (csv.empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  return out;
}

LowDefectPair pair_from_options(Session& s, const std::string& expr_text,
                                long long C) {
  if (C < 0) {
    const LowDefectExpression e = LowDefectExpression::parse(expr_text);
    return {e.to_poly(),
            static_cast<long long>(e.base_complexity(s.get_oracle()))};
  }
  return make_pair(expr_text, C, s.get_oracle());
}

std::string cert_suffix(CertLevel c) {
  return c == CertLevel::kCertified ? "" : " (horizon-assumed)";
}

}  // namespace

int main(int argc, char** argv) {
  Session s;
  std::function<int()> action;

  CLI::App app{"intcpx: exact integer complexity, defects, stability and"
               " low-defect polynomials"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--table", s.table_path, "table cache file (ICPX format)")
      ->envname("INTCPX_TABLE");
  app.add_option("--limit", s.table_limit,
                 "table size when building in memory")
      ->envname("INTCPX_LIMIT");
  app.add_option("--horizon", s.horizon, "stability scan depth")
      ->envname("INTCPX_HORIZON");
  app.add_option("--policy", s.policy_name, "strict | assume")
      ->envname("INTCPX_POLICY")
      ->check(CLI::IsMember({"strict", "assume"}));
  app.add_option("--format", s.format, "text | json | csv")
      ->envname("INTCPX_FORMAT")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--threads", s.threads, "worker threads for enumeration")
      ->envname("INTCPX_THREADS");

  // ---- table ----
  auto* table_cmd = app.add_subcommand("table", "build or inspect the cache");
  table_cmd->require_subcommand(1);
  auto* table_build = table_cmd->add_subcommand("build", "build and save");
  table_build->callback([&] {
    action = [&]() {
      if (s.table_path.empty()) {
        throw std::invalid_argument("table build needs --table PATH");
      }
      const ComplexityTable t = ComplexityTable::build(s.table_limit);
      t.save(s.table_path);
      s.emit(json{{"limit", t.limit()}, {"path", s.table_path}},
             "built table to " + std::to_string(t.limit()) + " at " +
                 s.table_path + "\n");
      return kOk;
    };
  });
  auto* table_info = table_cmd->add_subcommand("info", "inspect a cache file");
  table_info->callback([&] {
    action = [&]() {
      if (s.table_path.empty()) {
        throw std::invalid_argument("table info needs --table PATH");
      }
      const ComplexityTable t = ComplexityTable::load(s.table_path);
      unsigned max_value = 0;
      for (std::uint64_t n = 1; n <= t.limit(); ++n) {
        max_value = std::max(max_value, t[n]);
      }
      s.emit(json{{"limit", t.limit()},
                  {"bytes", t.limit() + 13},
                  {"max_value", max_value}},
             "limit " + std::to_string(t.limit()) + ", max value " +
                 std::to_string(max_value) + "\n");
      return kOk;
    };
  });

  // ---- single values ----
  std::uint64_t n_arg = 0;

  auto* cpx_cmd = app.add_subcommand("cpx", "ones-count of n");
  cpx_cmd->add_option("n", n_arg)->required();
  cpx_cmd->callback([&] {
    action = [&]() {
      const unsigned v = s.get_oracle()(n_arg);
      s.emit(json{{"n", n_arg}, {"complexity", v}},
             std::to_string(v) + "\n");
      return kOk;
    };
  });

  auto* expr_cmd = app.add_subcommand("expr", "a witness expression for n");
  expr_cmd->add_option("n", n_arg)->required();
  expr_cmd->callback([&] {
    action = [&]() {
      const Expression e = best_expression(n_arg, s.get_table());
      s.emit(json{{"n", n_arg},
                  {"expression", e.str()},
                  {"ones", e.ones()}},
             e.str() + "  [" + std::to_string(e.ones()) + " ones]\n");
      return kOk;
    };
  });

  auto* defect_cmd = app.add_subcommand("defect", "exact defect of n");
  defect_cmd->add_option("n", n_arg)->required();
  defect_cmd->callback([&] {
    action = [&]() {
      const ExactDefect d = ExactDefect::of_value(n_arg, s.get_oracle());
      s.emit(d.to_json(), "delta(" + std::to_string(n_arg) + ") = (" +
                              std::to_string(d.ones()) + ", " +
                              d.arg().get_str() + ") ~ " + d.approx_string() +
                              "\n");
      return kOk;
    };
  });

  auto* stable_cmd = app.add_subcommand("stable", "stability verdict for n");
  stable_cmd->add_option("n", n_arg)->required();
  stable_cmd->callback([&] {
    action = [&]() {
      const StabilityVerdict v = s.get_scanner().verdict(n_arg);
      std::string text = to_string(v.kind);
      if (v.k) text += " K=" + std::to_string(*v.k);
      text += " stable_complexity=" + std::to_string(v.stable_complexity) +
              cert_suffix(v.certificate) + "\n";
      s.emit(v.to_json(), text);
      if (v.kind == VerdictKind::kUnknownAtHorizon &&
          s.policy() == Policy::kStrict) {
        return kIndeterminate;
      }
      return kOk;
    };
  });

  auto* kof_cmd = app.add_subcommand("k-of", "K(n): steps to stabilization");
  kof_cmd->add_option("n", n_arg)->required();
  kof_cmd->callback([&] {
    action = [&]() {
      const StabilityVerdict v = s.get_scanner().verdict(n_arg);
      if (v.k) {
        s.emit(json{{"n", n_arg}, {"K", *v.k}, {"certificate", "certified"}},
               std::to_string(*v.k) + "\n");
        return kOk;
      }
      if (s.policy() == Policy::kStrict) {
        std::cerr << "K(" << n_arg << ") not certified at horizon "
                  << v.horizon << "\n";
        return kIndeterminate;
      }
      s.emit(json{{"n", n_arg},
                  {"K", v.k_lower_bound},
                  {"certificate", "horizon-assumed"}},
             std::to_string(v.k_lower_bound) + " (horizon-assumed)\n");
      return kOk;
    };
  });

  auto* stcpx_cmd = app.add_subcommand("stable-cpx", "stable complexity of n");
  stcpx_cmd->add_option("n", n_arg)->required();
  stcpx_cmd->callback([&] {
    action = [&]() {
      const auto [value, cert] =
          s.get_scanner().stable_complexity(n_arg, s.policy());
      s.emit(json{{"n", n_arg},
                  {"stable_complexity", value},
                  {"certificate", to_string(cert)}},
             std::to_string(value) + cert_suffix(cert) + "\n");
      return kOk;
    };
  });

  // ---- low-defect polynomials ----
  auto* ldp_cmd = app.add_subcommand("ldp", "low-defect polynomial algebra");
  ldp_cmd->require_subcommand(1);
  std::string expr_text;
  long long pair_c = -1;
  std::string at_tuple;
  bool augmented = false;

  auto add_pair_options = [&](CLI::App* cmd) {
    cmd->add_option("--expr", expr_text, "low-defect expression text")
        ->required();
    cmd->add_option("--C", pair_c, "base complexity (default: accumulated)");
  };

  auto* ldp_parse = ldp_cmd->add_subcommand("parse", "parse and display");
  add_pair_options(ldp_parse);
  ldp_parse->callback([&] {
    action = [&]() {
      const LowDefectExpression e = LowDefectExpression::parse(expr_text);
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      const LowDefectTree t = e.to_tree();
      s.emit(json{{"expression", e.str()},
                  {"polynomial", p.poly.str()},
                  {"degree", p.poly.degree()},
                  {"leading_coefficient",
                   p.poly.leading_coefficient().get_str()},
                  {"C", p.base_complexity},
                  {"tree", t.to_json()}},
             p.poly.str() + "  degree " + std::to_string(p.poly.degree()) +
                 ", C = " + std::to_string(p.base_complexity) + "\n");
      return kOk;
    };
  });

  auto* ldp_eval = ldp_cmd->add_subcommand("eval", "evaluate at 3^exponents");
  add_pair_options(ldp_eval);
  ldp_eval->add_option("--at", at_tuple, "comma-separated exponents")
      ->required();
  ldp_eval->add_flag("--augmented", augmented,
                     "include a trailing power-of-3 exponent");
  ldp_eval->callback([&] {
    action = [&]() {
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      const LowDefectPoly f = augmented ? p.poly.augment() : p.poly;
      const auto exps = parse_tuple(at_tuple);
      const mpz_class value = f.evaluate(exps);
      s.emit(json{{"value", value.get_str()}}, value.get_str() + "\n");
      return kOk;
    };
  });

  auto* ldp_delta = ldp_cmd->add_subcommand("delta", "delta(f, C)");
  add_pair_options(ldp_delta);
  ldp_delta->add_option("--at", at_tuple,
                        "exponent tuple for delta_{f,C} (default: the pair)");
  ldp_delta->callback([&] {
    action = [&]() {
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      const ExactDefect d = at_tuple.empty()
                                ? delta_pair(p)
                                : delta_at(p, parse_tuple(at_tuple));
      s.emit(d.to_json(), "(" + std::to_string(d.ones()) + ", " +
                              d.arg().get_str() + ") ~ " + d.approx_string() +
                              "\n");
      return kOk;
    };
  });

  auto* ldp_subst = ldp_cmd->add_subcommand("substantial",
                                            "is the pair substantial?");
  add_pair_options(ldp_subst);
  ldp_subst->callback([&] {
    action = [&]() {
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      const Substantiality r = is_substantial(p, s.get_scanner(), s.policy());
      s.emit(json{{"substantial", r.substantial},
                  {"certificate", to_string(r.certificate)},
                  {"via_shortcut", r.via_shortcut}},
             std::string(r.substantial ? "substantial" : "insubstantial") +
                 cert_suffix(r.certificate) + "\n");
      return kOk;
    };
  });

  auto* ldp_gap = ldp_cmd->add_subcommand("gap", "insubstantiality gap");
  add_pair_options(ldp_gap);
  ldp_gap->callback([&] {
    action = [&]() {
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      const InsubstantialityGap g =
          insubstantiality_gap(p, s.get_scanner(), s.policy());
      s.emit(json{{"k", g.k},
                  {"gap", g.gap},
                  {"certificate", to_string(g.certificate)}},
             "k = " + std::to_string(g.k) + ", gap = " +
                 std::to_string(g.gap) + cert_suffix(g.certificate) + "\n");
      return kOk;
    };
  });

  // ---- searches and verifications ----
  std::string box_text;
  std::string mode_name = "plain";
  unsigned k_max = 10;

  auto* exc_cmd = app.add_subcommand("exceptions",
                                     "exceptional set over an exponent box");
  add_pair_options(exc_cmd);
  exc_cmd->add_option("--box", box_text, "per-variable bounds, e.g. 10 or 3,4")
      ->required();
  exc_cmd->add_option("--mode", mode_name, "plain | stable")
      ->check(CLI::IsMember({"plain", "stable"}));
  exc_cmd->callback([&] {
    action = [&]() {
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      const ExceptionalSet ex = exceptional_set(
          p, parse_tuple(box_text), s.get_scanner(), s.policy(),
          mode_name == "stable" ? ExceptionalMode::kStable
                                : ExceptionalMode::kPlain);
      json tuples = json::array();
      std::string text;
      for (const auto& t : ex.tuples) {
        tuples.push_back(t);
        text += "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (i) text += ",";
          text += std::to_string(t[i]);
        }
        text += ")\n";
      }
      if (ex.tuples.empty()) text = "none\n";
      s.emit(json{{"check", "exceptional-set"},
                  {"mode", mode_name},
                  {"tuples", tuples},
                  {"certificate", to_string(ex.certificate)}},
             text);
      return kOk;
    };
  });

  auto* mink_cmd = app.add_subcommand(
      "min-k", "least K with no exceptional k in [K, k_max] (degree 1)");
  add_pair_options(mink_cmd);
  mink_cmd->add_option("--kmax", k_max, "scan bound")->required();
  mink_cmd->add_option("--mode", mode_name, "plain | stable")
      ->check(CLI::IsMember({"plain", "stable"}));
  mink_cmd->callback([&] {
    action = [&]() {
      const LowDefectPair p = pair_from_options(s, expr_text, pair_c);
      MinimalKResult r = minimal_k_degree1(
          p, k_max, s.get_scanner(), s.policy(),
          mode_name == "stable" ? ExceptionalMode::kStable
                                : ExceptionalMode::kPlain);
      json j = r.to_json();
      j["check"] = "k-threshold-degree1";
      std::string text = r.k_observed
                             ? "K_observed = " + std::to_string(*r.k_observed)
                             : "no K within the scan";
      text += ", exceptional:";
      if (r.exceptional.empty()) text += " none";
      for (unsigned k : r.exceptional) text += " " + std::to_string(k);
      s.emit(j, text + "\n");
      return kOk;
    };
  });

  std::uint64_t max_n = 10000;
  bool decompose = false;

  auto* leaders_cmd = app.add_subcommand("leaders",
                                         "leaders up to a bound, or "
                                         "decompose one n");
  leaders_cmd->add_option("--max", max_n, "scan bound");
  leaders_cmd->add_option("--n", n_arg, "decompose this n instead");
  leaders_cmd->add_flag("--decompose", decompose,
                        "strip 3s down to the leader of n");
  leaders_cmd->callback([&] {
    action = [&]() {
      if (decompose) {
        const auto [m, k] = leader_decompose(n_arg, s.get_table());
        s.emit(json{{"n", n_arg}, {"leader", m}, {"k", k}},
               std::to_string(m) + " * 3^" + std::to_string(k) + "\n");
        return kOk;
      }
      const auto ls = leaders(max_n, s.get_table());
      json j = json{{"max", max_n}, {"leaders", ls}};
      std::string text;
      for (std::uint64_t l : ls) text += std::to_string(l) + "\n";
      s.emit(j, text);
      return kOk;
    };
  });

  std::string cover_file;
  long long bound_ones = 0;
  std::uint64_t bound_arg = 1;

  auto* cover_cmd = app.add_subcommand(
      "verify-covering", "check a candidate covering against a defect bound");
  cover_cmd->add_option("--file", cover_file,
                        "JSON list of {expression, C}")
      ->required();
  cover_cmd->add_option("--s-ones", bound_ones, "bound C component")
      ->required();
  cover_cmd->add_option("--s-arg", bound_arg, "bound n component")
      ->required();
  cover_cmd->add_option("--max", max_n, "truncation");
  cover_cmd->callback([&] {
    action = [&]() {
      std::ifstream in(cover_file);
      if (!in) {
        throw std::invalid_argument("cannot open covering file " + cover_file);
      }
      const json entries = json::parse(in);
      std::vector<LowDefectPair> candidates;
      for (const auto& item : entries) {
        candidates.push_back(make_pair(item.at("expression").get<std::string>(),
                                       item.at("C").get<long long>(),
                                       s.get_oracle()));
      }
      const ExactDefect bound(bound_ones,
                              mpz_class(static_cast<unsigned long>(bound_arg)));
      const CoveringReport r =
          verify_covering(candidates, bound, max_n, s.get_table());
      json j = r.to_json();
      j["check"] = "covering";
      std::string text = r.pass ? "pass\n" : "FAIL\n";
      for (std::size_t i : r.bound_violations) {
        text += "candidate " + std::to_string(i) + " exceeds the bound\n";
      }
      for (std::uint64_t l : r.uncovered_leaders) {
        text += "leader " + std::to_string(l) + " uncovered\n";
      }
      s.emit(j, text);
      return r.pass ? kOk : kVerificationFailure;
    };
  });

  bool classify = false;
  auto* enum_cmd = app.add_subcommand("enumerate",
                                      "distinct defects at truncation");
  enum_cmd->add_option("--max", max_n, "truncation");
  enum_cmd->add_option("--s-ones", bound_ones, "bound C component")
      ->required();
  enum_cmd->add_option("--s-arg", bound_arg, "bound n component")->required();
  enum_cmd->add_flag("--classify", classify,
                     "attach stability verdicts and limit degrees");
  enum_cmd->callback([&] {
    action = [&]() {
      const ExactDefect bound(bound_ones,
                              mpz_class(static_cast<unsigned long>(bound_arg)));
      DefectCatalog c =
          enumerate_defects(max_n, bound, s.get_table(), s.threads);
      if (classify) classify_catalog(c, s.get_scanner(), s.policy());
      if (s.format == "csv") {
        std::cout << c.to_csv();
      } else if (s.json_output()) {
        std::cout << c.to_json().dump(2) << "\n";
      } else {
        for (const CatalogEntry& e : c.entries) {
          std::cout << e.value.approx_string() << "  n=" << e.representative
                    << " class=" << e.klass;
          if (e.limit_degree) std::cout << " limit_degree=" << *e.limit_degree;
          std::cout << "\n";
        }
      }
      return kOk;
    };
  });

  std::uint64_t q_arg = 0, m_arg = 0;
  auto* ce_cmd = app.add_subcommand(
      "counterexample", "search m = b(a 3^k + 1) 3^l over ab = q");
  ce_cmd->add_option("--q", q_arg)->required();
  ce_cmd->add_option("--m", m_arg)->required();
  ce_cmd->callback([&] {
    action = [&]() {
      const auto witnesses = counterexample_check(q_arg, m_arg, s.get_table());
      json jw = json::array();
      std::string text;
      for (const auto& w : witnesses) {
        jw.push_back(w.to_json());
        text += "a=" + std::to_string(w.a) + " b=" + std::to_string(w.b) +
                " k=" + std::to_string(w.k) + " l=" + std::to_string(w.l) +
                "\n";
      }
      if (witnesses.empty()) text = "none\n";
      s.emit(json{{"check", "counterexample-search"},
                  {"q", q_arg},
                  {"m", m_arg},
                  {"witnesses", jw}},
             text);
      return kOk;
    };
  });

  std::uint64_t a_arg = 0, b_arg = 1;
  auto* conv_cmd = app.add_subcommand(
      "converge", "defect series of b(a 3^k + 1) against its limit");
  conv_cmd->add_option("--a", a_arg)->required();
  conv_cmd->add_option("--b", b_arg);
  conv_cmd->add_option("--kmax", k_max);
  conv_cmd->add_option("--mode", mode_name, "plain | stable")
      ->check(CLI::IsMember({"plain", "stable"}));
  conv_cmd->callback([&] {
    action = [&]() {
      const ConvergenceReport r = convergence_series(
          a_arg, b_arg, k_max, s.get_scanner(), s.policy(),
          mode_name == "stable" ? SeriesMode::kStable : SeriesMode::kPlain);
      json j = r.to_json();
      j["check"] = "convergence-series";
      std::string text = "target (" + std::to_string(r.target.ones()) + ", " +
                         r.target.arg().get_str() + ") ~ " +
                         r.target.approx_string() +
                         cert_suffix(r.target_cert) + "\n";
      for (const SeriesTerm& t : r.terms) {
        text += "k=" + std::to_string(t.k) + " " + t.defect.approx_string() +
                (t.exceptional ? " [exceptional]" : "") +
                (t.gap_sign < 0 ? " < target" : " >= target") + "\n";
      }
      text += r.strictly_increasing ? "strictly increasing\n"
                                    : "NOT strictly increasing\n";
      s.emit(j, text);
      return r.strictly_increasing ? kOk : kVerificationFailure;
    };
  });

  auto* dragons_cmd = app.add_subcommand(
      "dragons", "off-by-one family scan under its hypotheses");
  dragons_cmd->add_option("--a", a_arg)->required();
  dragons_cmd->add_option("--b", b_arg)->required();
  dragons_cmd->add_option("--kmax", k_max);
  dragons_cmd->callback([&] {
    action = [&]() {
      const DragonsReport r =
          dragons_check(a_arg, b_arg, k_max, s.get_scanner(), s.policy());
      json j = r.to_json();
      j["check"] = "off-by-one-family";
      std::string text;
      if (!r.hypotheses_hold) {
        text = "hypotheses not satisfied: " + r.failed_hypothesis + "\n";
      } else {
        for (const auto& step : r.steps) {
          text += "k=" + std::to_string(step.k) + " ||" +
                  std::to_string(step.value) + "|| = " +
                  std::to_string(step.complexity) + " vs " +
                  std::to_string(step.expected) +
                  (step.match ? "" : "  (below)") + "\n";
        }
        text += r.observed_k
                    ? "observed K = " + std::to_string(*r.observed_k) + "\n"
                    : "no K within the scan\n";
      }
      s.emit(j, text);
      if (r.unresolved) return kIndeterminate;
      return r.hypotheses_hold ? kOk : kVerificationFailure;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    return action();
  } catch (const indeterminate_error& e) {
    std::cerr << "indeterminate: " << e.what() << "\n";
    return kIndeterminate;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::out_of_range& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
