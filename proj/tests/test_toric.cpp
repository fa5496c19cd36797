#include <gtest/gtest.h>

#include "twopoint/projective.hpp"
#include "twopoint/toric_io.hpp"

using namespace twopoint;

namespace {

ToricSpec fan(const std::string& name) { return load_toric_file(std::string(TWOPOINT_SOURCE_DIR) + "/fans/" + name + ".json"); }

Degree deg2(long a, long b) { return Degree({Rat(a), Rat(b)}); }

const std::vector<std::string> kCorpus{"P1", "P2", "P3", "P1xP1", "P1xP2"};

}  // namespace

TEST(ToricSpec, CorpusParsesAndValidates) {
  for (const auto& name : kCorpus) {
    ToricSpec s = fan(name);
    EXPECT_EQ(s.name, name);
    EXPECT_TRUE(s.fano());
    EXPECT_EQ(s.k() + static_cast<std::size_t>(s.n), s.N());
  }
  EXPECT_FALSE(builtin_x1().fano());
  EXPECT_FALSE(builtin_x2().fano());
}

TEST(ToricSpec, ValidationRejectsBrokenInput) {
  ToricSpec s = fan("P2");
  ToricSpec bad = s;
  bad.rays[2] = {-1, -2};
  bad.m = {{1, 2, 1}};
  bad.mori[0].degrees = {1, 2, 1};
  EXPECT_THROW(validate_toric(bad), ValidationError);  // cone {2,3} has determinant 1 but {1,3} has -2
  bad = s;
  bad.m = {{1, 1, 2}};
  EXPECT_THROW(validate_toric(bad), ValidationError);
  bad = s;
  bad.mori[0].degrees = {1, 1, 2};
  EXPECT_THROW(validate_toric(bad), ValidationError);
  bad = s;
  bad.cones.push_back(bad.cones[0]);
  EXPECT_THROW(validate_toric(bad), ValidationError);
  bad = s;
  bad.lambda_a = std::vector<Rat>{Rat(1), Rat(1), Rat(2)};
  EXPECT_THROW(validate_toric(bad), ValidationError);
  EXPECT_THROW(parse_toric_json(nlohmann::json::parse(R"({"dim": 1})")), ValidationError);
  EXPECT_THROW(builtin_spec("X3"), ValidationError);
}

TEST(ToricFixedPoints, ProjectiveEulerClasses) {
  ToricSpec s = fan("P2");
  auto fps = toric_fixed_points(s, default_lambda_a(3));
  ASSERT_EQ(fps.size(), 3u);
  // cone {1,2}: P = lambda_3, euler = (l3 - l1)(l3 - l2) = 2
  EXPECT_EQ(fps[0].x[0], Rat(3));
  EXPECT_EQ(fps[0].euler, Rat(2));
  EXPECT_EQ(fps[2].euler, Rat(2));  // (1 - 2)(1 - 3)
  EXPECT_EQ(fps[1].euler, Rat(-1));
  EXPECT_THROW(toric_fixed_points(s, {Rat(1), Rat(1), Rat(1)}), DegenerateLambdaError);
}

TEST(ToricColumn, DegreeZeroIsIdentity) {
  for (const auto& name : kCorpus) {
    ToricSpec s = fan(name);
    auto fps = toric_fixed_points(s, default_lambda_b(s.N()));
    for (std::size_t c = 0; c < fps.size(); ++c) {
      auto col = equivariant_columns(s, fps, c, Degree::zero(s.k()), 6);
      for (std::size_t i = 0; i < col.size(); ++i)
        EXPECT_EQ(col[i], i == c ? ZSeries<Rat>::constant(Rat(1)) : ZSeries<Rat>(0, kExactDepth));
    }
  }
}

TEST(ToricLimit, ProjectiveSpacesMatchDirectComputation) {
  for (int n = 1; n <= 3; ++n) {
    Rat bound(n == 3 ? 1 : 2);
    LimitResult lim = nonequivariant_limit(fan("P" + std::to_string(n)), bound);
    InvariantTable direct = pn_two_point(n, bound.to_long());
    EXPECT_EQ(lim.table.names, direct.names);
    EXPECT_EQ(lim.table.max_psi_total, direct.max_psi_total);
    EXPECT_EQ(lim.table.values, direct.values) << "n=" << n;
    EXPECT_GT(lim.certified, 0u);
  }
}

TEST(ToricLimit, P1xP1) {
  ToricSpec s = fan("P1xP1");
  Rat bound(2);
  LimitResult lim = nonequivariant_limit(s, bound);
  EXPECT_EQ(lim.table.names, (std::vector<std::string>{"1", "P1", "P2", "P1 P2"}));
  const std::size_t pt = 3, P1 = 1, P2 = 2;
  // lines of class (1,0) meet D1 once and D3 not at all
  EXPECT_EQ(lim.table.value(P1, 0, pt, 0, deg2(1, 0)), Rat(1));
  EXPECT_EQ(lim.table.value(P2, 0, pt, 0, deg2(1, 0)), Rat(0));
  EXPECT_EQ(lim.table.value(P2, 0, pt, 0, deg2(0, 1)), Rat(1));
  EXPECT_TRUE(check_dimension(lim.table).pass);
  EXPECT_TRUE(check_swap_symmetry(lim.table).pass);
  CheckReport sd = check_string_divisor(lim.table, lim.one_point, lim.target);
  EXPECT_TRUE(sd.pass) << sd.str();
}

TEST(ToricEquivariant, ConsistencyChecks) {
  for (const auto& name : {"P1", "P2", "P1xP1", "P1xP2"}) {
    ToricSpec s = fan(name);
    TargetSpec t = make_toric_target(s, default_lambda_b(s.N()));
    Rat bound(name == std::string("P1xP2") ? 1 : 2);
    Computation c = compute_two_point(t, bound, t.default_depth(bound));
    EXPECT_TRUE(c.unitarity.pass) << name << ": " << c.unitarity.str();
    CheckReport sd = check_string_divisor(c.invariants, c.one_point, t);
    EXPECT_TRUE(sd.pass) << sd.str();
    EXPECT_TRUE(check_swap_symmetry(c.invariants).pass);
  }
}

TEST(ToricEquivariant, FlippedNumeratorSignBreaksUnitarity) {
  ToricSpec s = fan("P1");
  TargetSpec t = make_toric_target(s, default_lambda_a(2), -1);
  STable a = build_s_adjoint(t, Rat(2), t.default_depth(Rat(2)));
  EXPECT_FALSE(check_unitarity(a, t, Rat(2)).pass);
}

TEST(ToricCondition, CorpusPasses) {
  for (const auto& name : kCorpus) {
    for (const auto& rep : condition_scan_all(fan(name), Rat(6))) EXPECT_TRUE(rep.pass) << rep.str();
  }
}

TEST(ToricCondition, SemiFanoPattern) {
  ToricSpec x1 = builtin_x1(), x2 = builtin_x2();
  EXPECT_TRUE(condition_scan(x1, {3, 1}, Rat(8)).pass);
  EXPECT_TRUE(condition_scan(x1, {4, 1}, Rat(8)).pass);
  EXPECT_TRUE(condition_scan(x2, {3, 1}, Rat(8)).pass);
  EXPECT_TRUE(condition_scan(x2, {4, 1}, Rat(8)).pass);
  ConditionReport bad = condition_scan(x2, {5, 1}, Rat(8));
  EXPECT_FALSE(bad.pass);
  ASSERT_TRUE(bad.first_violation);
  EXPECT_EQ(*bad.first_violation, deg2(1, 0));
  for (const auto& e : bad.entries)
    if (e.beta[1].is_zero()) {
      EXPECT_FALSE(e.pass) << e.beta.str();
    }
  EXPECT_THROW(condition_scan(x2, {6, 1}, Rat(2)), ValidationError);
}

TEST(ToricCondition, EvaluatedX2Compositions) {
  auto lam = default_lambda_b(5);
  EXPECT_TRUE(x2_evaluate_composition(X2Composition::D3D1, lam, 4, 8).pass);
  EXPECT_TRUE(x2_evaluate_composition(X2Composition::D4D1, lam, 4, 8).pass);
  X2CompositionReport r = x2_evaluate_composition(X2Composition::D5D1Main, lam, 4, 8);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.first_violation);
  EXPECT_EQ(*r.first_violation, deg2(1, 0));
}

TEST(ToricSemiFano, ITermOrders) {
  ToricSpec x1 = builtin_x1(), x2 = builtin_x2();
  auto f1 = toric_fixed_points(x1, default_lambda_b(5));
  auto f2 = toric_fixed_points(x2, default_lambda_b(5));
  for (long d1 = 0; d1 <= 3; ++d1) {
    for (long d2 = 0; d2 <= 3; ++d2) {
      Degree b = deg2(d1, d2);
      long o1 = d2 >= d1 ? 3 * d2 : 3 * d2 + 2;
      long o2 = d2 >= 2 * d1 ? 3 * d2 : 3 * d2 + 1;
      EXPECT_EQ(i_term_order(x1.R_of(b)), o1);
      EXPECT_EQ(i_term_order(x2.R_of(b)), o2);
      EXPECT_EQ(measured_i_term_order(x1, f1, b, 16), o1) << b.str();
      EXPECT_EQ(measured_i_term_order(x2, f2, b, 16), o2) << b.str();
    }
  }
}

TEST(ToricSemiFano, MirrorFactorSeries) {
  auto f = x2_f_coefficients(3);
  EXPECT_EQ(f, (std::vector<Rat>{Rat(1), Rat(3, 2), Rat(10, 3)}));
  X2MirrorFactors g = x2_mirror_factors(2);
  EXPECT_EQ((g.g1[{1, 0}]), Rat(2));
  EXPECT_EQ((g.g1[{2, 0}]), Rat(6));
  EXPECT_EQ((g.g2[{0, 1}]), Rat(-1));
  EXPECT_EQ((g.g2[{1, 1}]), Rat(-3));
}

TEST(ToricSemiFano, X1FullPipeline) {
  ToricSpec s = builtin_x1();
  Rat bound(1);
  TargetSpec t = make_builtin_target("X1", default_lambda_a(5));
  Computation c = compute_two_point(t, bound, t.default_depth(bound));
  EXPECT_TRUE(c.unitarity.pass) << c.unitarity.str();
  CheckReport sd = check_string_divisor(c.invariants, c.one_point, t);
  EXPECT_TRUE(sd.pass) << sd.str();
  LimitResult lim = nonequivariant_limit(s, bound);
  EXPECT_TRUE(check_dimension(lim.table).pass);
  CheckReport lsd = check_string_divisor(lim.table, lim.one_point, lim.target);
  EXPECT_TRUE(lsd.pass) << lsd.str();
}

TEST(ToricSplit, TrivialOnFanoCorpus) {
  for (const auto& name : kCorpus) {
    ToricSpec s = fan(name);
    auto fps = toric_fixed_points(s, default_lambda_a(s.N()));
    Rat bound(s.n == 3 ? 1 : 2);
    SplitColumns sc = split_toric_columns(s, fps, bound, 8);
    EXPECT_TRUE(sc.trivial) << name;
    for (const auto& [beta, m] : sc.sstar)
      for (std::size_t c = 0; c < m.size(); ++c) EXPECT_EQ(m[c], equivariant_columns(s, fps, c, beta, 8)) << name;
  }
}

TEST(ToricSplit, X1NeedsSplittingAtDegreeOneZero) {
  ToricSpec s = builtin_x1();
  auto fps = toric_fixed_points(s, default_lambda_a(5));
  SplitColumns sc = split_toric_columns(s, fps, Rat(1), 8);
  EXPECT_FALSE(sc.trivial);
  EXPECT_TRUE(sc.correction.count(deg2(1, 0)));
  for (const auto& [beta, m] : sc.sstar)
    for (const auto& col : m)
      for (const auto& v : col)
        if (!beta.is_zero()) {
          EXPECT_LT(v.max_exponent(), 0);
        }
}

TEST(ToricSemiFano, X2IsGated) {
  EXPECT_THROW(make_builtin_target("X2", default_lambda_a(5)), NotCertifiedError);
  EXPECT_NO_THROW(make_builtin_target("X2", default_lambda_a(5), true));
}

TEST(ToricJx, EstimatesAndRefusal) {
  JxEstimate p2 = jx_criterion(fan("P2"), Rat(3));
  EXPECT_EQ(p2.value, 3);
  EXPECT_TRUE(p2.satisfied);
  JxEstimate p1p1 = jx_criterion(fan("P1xP1"), Rat(3));
  EXPECT_EQ(p1p1.value, 2);
  EXPECT_THROW(jx_criterion(builtin_x1(), Rat(2)), ValidationError);
}
