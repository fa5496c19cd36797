#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twopoint/oracle.hpp"
#include "twopoint/projective.hpp"
#include "twopoint/table_io.hpp"
#include "twopoint/toric_io.hpp"
#include "twopoint/wps.hpp"

namespace twopoint::cli {

/// Exit code for a verification run in which some check did not hold.
inline constexpr int kVerifyFailed = 9;

struct JobConfig {
  std::string kind;  // pn | wps | toric | builtin
  std::string arg;
  std::optional<std::string> dmax;
  int depth = 0;
  std::optional<std::string> lambda;
  std::string format = "json";
  std::optional<std::string> out;
  unsigned threads = 1;
  bool equivariant = false;
  bool allow_uncertified = false;
  std::optional<std::string> composition;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw ValidationError(what + ": expected an integer, got '" + s + "'");
}

inline std::vector<long> parse_list(const std::string& s, const std::string& what) {
  std::vector<long> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_long(t, what));
  if (out.empty()) throw ValidationError(what + ": empty list");
  return out;
}

inline Rat bound_of(const JobConfig& c, long fallback) {
  Rat b = c.dmax ? Rat::parse(*c.dmax) : Rat(fallback);
  if (b.sign() < 0) throw ValidationError("--dmax must be nonnegative");
  return b;
}

inline Rat integer_bound(const JobConfig& c, long fallback) {
  Rat b = bound_of(c, fallback);
  if (b.den() != 1) throw ValidationError("--dmax must be an integer for this target");
  return b;
}

inline ToricSpec toric_of(const JobConfig& c) {
  ToricSpec s;
  if (c.kind == "toric")
    s = load_toric_file(c.arg);
  else if (c.kind == "builtin")
    s = builtin_spec(c.arg);
  else
    throw ValidationError("target '" + c.kind + "' is not toric");
  if (c.lambda) {
    auto parts = split(*c.lambda, ';');
    if (parts.empty() || parts.size() > 2) throw ValidationError("--lambda takes one or two ';'-separated assignments");
    auto parse = [](const std::string& p) {
      std::vector<Rat> v;
      for (const auto& x : split(p, ',')) v.push_back(Rat::parse(x));
      return v;
    };
    s.lambda_a = parse(parts[0]);
    if (parts.size() == 2) s.lambda_b = parse(parts[1]);
    validate_toric(s);
  }
  return s;
}

inline void check_kind(const JobConfig& c) {
  if (c.kind != "pn" && c.kind != "wps" && c.kind != "toric" && c.kind != "builtin")
    throw ValidationError("unknown target kind '" + c.kind + "' (expected pn, wps, toric or builtin)");
  if (c.depth < 0) throw ValidationError("--depth must be positive");
  if (c.threads == 0) throw ValidationError("--threads must be positive");
}

inline int pn_dim(const JobConfig& c) {
  long n = parse_long(c.arg, "pn dimension");
  if (n < 1) throw ValidationError("pn dimension must be at least 1");
  return static_cast<int>(n);
}

inline ojson check_json(const CheckReport& r) {
  return {{"name", r.name}, {"pass", r.pass}, {"checked", r.checked}, {"skipped", r.skipped}, {"detail", r.detail}};
}

inline ojson simple_check(const std::string& name, bool pass, const std::string& detail) {
  return {{"name", name}, {"pass", pass}, {"detail", detail}};
}

inline ojson condition_json(const ConditionReport& r, bool entries) {
  ojson j{{"composition", r.label()}, {"pass", r.pass}};
  j["first_violation"] = r.first_violation ? ojson(r.first_violation->str()) : ojson(nullptr);
  if (entries) {
    ojson list = ojson::array();
    for (const auto& e : r.entries)
      list.push_back({{"degree", e.beta.str()}, {"numerator", e.numerator}, {"order", e.order}, {"top", e.top}, {"pass", e.pass}});
    j["entries"] = list;
  }
  return j;
}

}  // namespace detail

/// Computes the table a `compute` job asks for.
inline TableFile compute_table(const JobConfig& c) {
  detail::check_kind(c);
  TableFile f;
  if (c.kind == "pn") {
    Rat b = detail::integer_bound(c, 2);
    f.table = pn_two_point(detail::pn_dim(c), b.to_long(), c.depth, c.threads);
    return f;
  }
  if (c.kind == "wps") {
    f.table = wps_two_point(wps_basis_data(detail::parse_list(c.arg, "wps weights")), detail::bound_of(c, 2), c.depth, c.threads);
    return f;
  }
  ToricSpec s = detail::toric_of(c);
  Rat b = detail::integer_bound(c, 2);
  if (c.kind == "builtin" && c.arg == "X2") {
    ToricLambdas lam = toric_lambdas(s);
    TargetSpec t = make_builtin_target("X2", lam.a, c.allow_uncertified);
    int depth = c.depth > 0 ? c.depth : t.default_depth(b);
    f.table = compute_two_point(t, b, depth, c.threads).invariants;
    f.lambda = lam.a;
    return f;
  }
  if (c.equivariant) {
    ToricLambdas lam = toric_lambdas(s);
    f.table = toric_two_point(s, lam.a, b, c.depth, c.threads).invariants;
    f.lambda = lam.a;
    return f;
  }
  f.table = nonequivariant_limit(s, b, c.depth, c.threads).table;
  return f;
}

inline std::string render_table(const TableFile& f, const std::string& format) {
  if (format == "json") return table_to_json_string(f);
  if (format == "csv") return table_to_csv(f);
  throw ValidationError("--format must be json or csv");
}

/// Runs the verification suite for a target; "pass" is true iff every check held
/// (or, for documented failures, failed exactly as expected).
inline ojson verify_report(const JobConfig& c) {
  detail::check_kind(c);
  ojson checks = ojson::array();
  ojson report;
  auto engine_checks = [&](const TargetSpec& t, const Computation& comp, const std::string& tag) {
    checks.push_back(detail::simple_check("unitarity" + tag, comp.unitarity.pass, comp.unitarity.str()));
    checks.push_back(detail::simple_check("divisibility" + tag, true, "(z1+z2) division left no remainder"));
    checks.push_back(detail::check_json(check_string_divisor(comp.invariants, comp.one_point, t)));
    checks.push_back(detail::check_json(check_swap_symmetry(comp.invariants)));
    if (!comp.invariants.equivariant) checks.push_back(detail::check_json(check_dimension(comp.invariants)));
  };

  if (c.kind == "pn") {
    int n = detail::pn_dim(c);
    Rat b = detail::integer_bound(c, 2);
    TargetSpec t = make_projective_target(n);
    int depth = c.depth > 0 ? c.depth : t.default_depth(b);
    Computation comp = compute_two_point(t, b, depth, c.threads);
    report["target"] = t.name;
    engine_checks(t, comp, "");
    if (n <= 2) {
      InvariantTable o = two_point_oracle(n, b.to_long(), comp.invariants.max_psi_total);
      bool same = o.values == comp.invariants.values;
      checks.push_back(detail::simple_check("oracle-equality", same,
                                            std::to_string(o.values.size()) + " oracle entries compared"));
    }
  } else if (c.kind == "wps") {
    WpsSpec s = wps_basis_data(detail::parse_list(c.arg, "wps weights"));
    Rat b = detail::bound_of(c, 2);
    TargetSpec t = make_wps_target(s);
    int depth = c.depth > 0 ? c.depth : t.default_depth(b);
    Computation comp = compute_two_point(t, b, depth, c.threads);
    report["target"] = t.name;
    engine_checks(t, comp, "");
    if (b.sign() > 0) checks.push_back(detail::check_json(check_wps_routes(s, b, depth)));
  } else if (c.kind == "builtin" && c.arg == "X2") {
    ToricSpec s = builtin_x2();
    report["target"] = s.name;
    Rat b = detail::integer_bound(c, 4);
    const std::vector<std::pair<std::vector<std::size_t>, bool>> expected{{{3, 1}, true}, {{4, 1}, true}, {{5, 1}, false}};
    const X2Composition evals[] = {X2Composition::D3D1, X2Composition::D4D1, X2Composition::D5D1Main};
    ToricLambdas lam = toric_lambdas(s);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      ConditionReport r = condition_scan(s, expected[i].first, b);
      checks.push_back(detail::simple_check("condition " + r.label(), r.pass == expected[i].second,
                                            r.str() + (expected[i].second ? " (expected pass)" : " (expected fail)")));
      X2CompositionReport e = x2_evaluate_composition(evals[i], lam.b, std::max<long>(b.to_long(), 1), 8);
      checks.push_back(detail::simple_check("evaluated " + r.label(), e.pass == expected[i].second,
                                            e.str() + (expected[i].second ? " (expected pass)" : " (expected fail)")));
    }
    bool gated = false;
    try {
      make_builtin_target("X2", lam.a, false);
    } catch (const NotCertifiedError&) {
      gated = true;
    }
    checks.push_back(detail::simple_check("extraction-gated", gated, "two-point extraction requires the override flag"));
  } else {
    ToricSpec s = detail::toric_of(c);
    report["target"] = s.name;
    Rat b = detail::integer_bound(c, 2);
    if (c.kind == "builtin") {
      for (auto comp : std::vector<std::vector<std::size_t>>{{3, 1}, {4, 1}}) {
        ConditionReport r = condition_scan(s, comp, b + Rat(4));
        checks.push_back(detail::simple_check("condition " + r.label(), r.pass, r.str()));
      }
    } else {
      bool all = true;
      std::string first;
      auto reps = condition_scan_all(s, b + Rat(4));
      for (const auto& r : reps)
        if (!r.pass && all) {
          all = false;
          first = r.str();
        }
      checks.push_back(detail::simple_check("condition-scan", all,
                                            all ? std::to_string(reps.size()) + " compositions pass" : first));
    }
    ToricLambdas lam = toric_lambdas(s);
    for (const auto& [tag, l] : {std::pair{" (lambda a)", lam.a}, std::pair{" (lambda b)", lam.b}}) {
      TargetSpec t = make_toric_target(s, l);
      int depth = c.depth > 0 ? c.depth : t.default_depth(b);
      Computation comp = compute_two_point(t, b, depth, c.threads);
      engine_checks(t, comp, tag);
    }
    LimitResult lim = nonequivariant_limit(s, b, c.depth, c.threads);
    checks.push_back(detail::simple_check("limit-certification", true,
                                          std::to_string(lim.certified) + " entries agree across lambda assignments"));
    checks.push_back(detail::check_json(check_swap_symmetry(lim.table)));
    checks.push_back(detail::check_json(check_dimension(lim.table)));
    checks.push_back(detail::check_json(check_string_divisor(lim.table, lim.one_point, lim.target)));
  }
  bool pass = true;
  for (const auto& ch : checks) pass = pass && ch["pass"].get<bool>();
  report["pass"] = pass;
  report["checks"] = checks;
  return report;
}

inline ojson condition_report(const JobConfig& c) {
  detail::check_kind(c);
  if (c.kind != "toric" && c.kind != "builtin") throw ValidationError("condition scans need a toric or builtin target");
  ToricSpec s = detail::toric_of(c);
  Rat b = detail::integer_bound(c, 6);
  std::vector<std::vector<std::size_t>> comps;
  if (c.composition) {
    std::vector<std::size_t> comp;
    for (long i : detail::parse_list(*c.composition, "composition")) {
      if (i < 1) throw ValidationError("composition entries are 1-based ray indices");
      comp.push_back(static_cast<std::size_t>(i));
    }
    comps.push_back(comp);
  } else if (c.kind == "builtin") {
    comps = {{3, 1}, {4, 1}};
    if (c.arg == "X2") comps.push_back({5, 1});
  } else {
    comps = condition_compositions(s);
  }
  ojson list = ojson::array();
  bool pass = true;
  for (const auto& comp : comps) {
    ConditionReport r = condition_scan(s, comp, b);
    pass = pass && r.pass;
    list.push_back(detail::condition_json(r, true));
  }
  return {{"target", s.name}, {"bound", b.str()}, {"pass", pass}, {"compositions", list}};
}

inline ojson error_json(const std::string& family, int code, const std::string& message) {
  return {{"error", {{"family", family}, {"code", code}, {"message", message}}}};
}

/// Entry point shared by the executable and the tests. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Genus-zero two-point descendant invariants", "twopoint"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("kind", cfg.kind, "pn | wps | toric | builtin")->required();
    sub->add_option("target", cfg.arg, "dimension, weights, spec file, or X1/X2")->required();
    sub->add_option("--dmax", cfg.dmax, "degree bound");
    sub->add_option("--depth", cfg.depth, "z-expansion depth (default from the degree bound)");
    sub->add_option("--lambda", cfg.lambda, "toric weights: 'l1,..,lN' or 'a1,..;b1,..'");
    sub->add_option("--threads", cfg.threads, "worker threads");
  };
  CLI::App* compute = app.add_subcommand("compute", "compute a two-point table");
  add_common(compute);
  compute->add_option("--format", cfg.format, "json or csv");
  compute->add_option("--out", cfg.out, "write the table here instead of stdout");
  compute->add_flag("--equivariant", cfg.equivariant, "toric: keep the fixed-point basis at lambda");
  compute->add_flag("--allow-uncertified", cfg.allow_uncertified, "run gated extractions anyway");
  CLI::App* verify = app.add_subcommand("verify", "run the consistency checks for a target");
  add_common(verify);
  CLI::App* condition = app.add_subcommand("condition", "scan operator compositions for positive z-powers");
  add_common(condition);
  condition->add_option("--composition", cfg.composition, "ray labels, e.g. 5,1");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_json("usage", 2, e.what()).dump(2) << "\n";
    return 2;
  }

  try {
    if (compute->parsed()) {
      TableFile f = compute_table(cfg);
      std::string text = render_table(f, cfg.format);
      if (cfg.out) {
        std::ofstream file(*cfg.out, std::ios::binary);
        if (!file) throw ValidationError("cannot write '" + *cfg.out + "'");
        file << text;
        out << ojson{{"status", "ok"}, {"target", f.table.target}, {"entries", f.table.values.size()}, {"out", *cfg.out},
                     {"format", cfg.format}}
                   .dump(2)
            << "\n";
      } else {
        out << text;
      }
      return 0;
    }
    if (verify->parsed()) {
      ojson r = verify_report(cfg);
      out << r.dump(2) << "\n";
      return r["pass"].get<bool>() ? 0 : kVerifyFailed;
    }
    out << condition_report(cfg).dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    out << error_json(e.family(), e.exit_code(), e.what()).dump(2) << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    out << error_json("internal", 1, e.what()).dump(2) << "\n";
    return 1;
  }
}

}  // namespace twopoint::cli
