#include <doctest.h>

#include "helpers.hpp"
#include "tlopt/ops.hpp"
#include "tlopt/parser.hpp"
#include "tlopt/synthesis.hpp"

using namespace tlopt;

namespace {

LtiSystem double_integrator() {
    LtiSystem sys;
    sys.A = Eigen::MatrixXd{{1, 1}, {0, 1}};
    sys.B = Eigen::MatrixXd{{1, 0}, {0, 1}};
    sys.C = Eigen::MatrixXd{{1, 0}};
    sys.D = Eigen::VectorXd::Zero(2);
    sys.state_names = {"s1", "s2"};
    sys.input_names = {"u1", "u2"};
    sys.state_bounds.set("s1", -9, 9);
    sys.state_bounds.set("s2", -9, 9);
    sys.input_bounds.set("u1", -5, 5);
    sys.input_bounds.set("u2", -5, 5);
    sys.initial_state = Eigen::VectorXd::Zero(2);
    sys.horizon = 10;
    return sys;
}

double total_control_effort(const SynthesisResult& res) {
    double total = 0.0;
    for (const auto& name : res.inputs.signal_names())
        for (int t = 0; t < res.inputs.length(); ++t)
            total += std::abs(res.inputs.value(name, t));
    return total;
}

const char* kExample1Stl =
    "(G[1,5] s1>=7 || G[1,5] s2<=2) && (F[5,10] s1<=3 || F[5,10] s2>=8)";

} // namespace

TEST_CASE("trajectory optimization solves example 1") {
    VarBounds b;
    b.set("s1", 0, 10);
    b.set("s2", 0, 10);
    Formula f = parse_stl(kExample1Stl);
    SynthOptions opt;
    opt.horizon = 10;
    SynthesisResult res = synth_trajectory(f, b, {{"s1", 0.0}, {"s2", 0.0}},
                                           SynthLogic::Stl, {}, opt);
    REQUIRE(res.optimal());
    CHECK(res.states.length() == 11);
    CHECK(res.states.value("s1", 0) == doctest::Approx(0.0));
    CHECK(res.monitor_robustness >= 0.0);
    CHECK(res.monitor_robustness >= res.milp_robustness - 1e-6);
    CHECK(evaluate_bool(f, res.states, 0));
    // each conjunct individually holds on the returned trace
    CHECK(evaluate_bool(parse_stl("G[1,5] s1>=7 || G[1,5] s2<=2"), res.states, 0));
    CHECK(evaluate_bool(parse_stl("F[5,10] s1<=3 || F[5,10] s2>=8"), res.states, 0));
}

TEST_CASE("trajectory optimization reports infeasibility as a status") {
    VarBounds b;
    b.set("s", 0, 1);
    SynthesisResult res = synth_trajectory(parse_stl("G[0,3] s>2"), b, {},
                                           SynthLogic::Stl);
    CHECK(res.status == milp::SolveStatus::Infeasible);
    CHECK(!res.optimal());
}

TEST_CASE("wstl trajectory for example 1 weights") {
    VarBounds b;
    b.set("s1", 0, 10);
    b.set("s2", 0, 10);
    WeightTable w{{"p1", {0.5, 0.5}},
                  {"p2", {0.2, 0.8}},
                  {"w1", {0.1, 0.2, 0.3, 0.4, 0.5}},
                  {"w2", {0.5, 0.4, 0.3, 0.2, 0.1}},
                  {"w3", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}},
                  {"w4", {0.6, 0.5, 0.4, 0.3, 0.2, 0.1}}};
    Formula f = parse_wstl(
        "&&^p1(||^p2(G^w1[1,5] (s1>=7), G^w2[1,5] (s2<=2)),"
        " ||^p2(F^w3[5,10] (s1<=3), F^w4[5,10] (s2>=8)))",
        w);
    CHECK(horizon(f) == 10);
    SynthesisResult res =
        synth_trajectory(f, b, {{"s1", 0.0}, {"s2", 0.0}}, SynthLogic::Wstl, w);
    REQUIRE(res.optimal());
    CHECK(res.milp_robustness >= 0.0);
    CHECK(res.monitor_robustness ==
          doctest::Approx(res.milp_robustness).epsilon(1e-6));
}

TEST_CASE("control synthesis example 2, robustness only") {
    Formula f = parse_stl("(G[3,5] s1>=3) && (G[9,10] s2>=2)");
    LtiSystem sys = double_integrator();
    CostWeights costs;   // lambda = 1, alpha = beta = 0
    SynthesisResult res = synth_control(f, sys, costs, SynthLogic::Stl);
    REQUIRE(res.optimal());
    CheckReport report = check_result(res, f);
    CHECK(report.max_dynamics_residual <= 1e-6);
    CHECK(report.monitor_robustness >= 0.0);
    CHECK(report.boolean_satisfied);
    CHECK(report.robustness_consistent);
    CHECK(report.ok);
    CHECK(res.inputs.length() == 10);
    CHECK(res.states.length() == 11);
    // y = C s with C = [1 0] reproduces s1 exactly
    for (int t = 0; t <= 10; ++t)
        CHECK(res.outputs.value("y1", t) == res.states.value("s1", t));
}

TEST_CASE("control synthesis example 2, regularized run uses less effort") {
    Formula f = parse_stl("(G[3,5] s1>=3) && (G[9,10] s2>=2)");
    LtiSystem sys = double_integrator();
    CostWeights plain;
    SynthesisResult run_a = synth_control(f, sys, plain, SynthLogic::Stl);
    REQUIRE(run_a.optimal());

    CostWeights regularized;
    regularized.alpha = Eigen::VectorXd::Constant(2, 0.1);
    regularized.beta = Eigen::VectorXd::Constant(2, 0.1);
    SynthesisResult run_b = synth_control(f, sys, regularized, SynthLogic::Stl);
    REQUIRE(run_b.optimal());
    CHECK(run_b.monitor_robustness >= 0.0);
    CHECK(evaluate_bool(f, run_b.states, 0));
    CHECK(total_control_effort(run_b) <= total_control_effort(run_a) + 1e-6);
}

TEST_CASE("feasibility mode: lambda = alpha = beta = 0 still satisfies") {
    Formula f = parse_stl("(G[3,5] s1>=3) && (G[9,10] s2>=2)");
    LtiSystem sys = double_integrator();
    CostWeights costs;
    costs.lambda = 0.0;
    SynthesisResult res = synth_control(f, sys, costs, SynthLogic::Stl);
    REQUIRE(res.optimal());
    CHECK(evaluate_bool(f, res.states, 0));
    CHECK(check_result(res, f).dynamics_ok);
}

TEST_CASE("cost monotonicity: growing beta never increases control effort") {
    Formula f = parse_stl("(G[3,5] s1>=3) && (G[9,10] s2>=2)");
    LtiSystem sys = double_integrator();
    double previous = std::numeric_limits<double>::infinity();
    for (double beta : {0.01, 0.1, 1.0}) {
        CostWeights costs;
        costs.beta = Eigen::VectorXd::Constant(2, beta);
        SynthesisResult res = synth_control(f, sys, costs, SynthLogic::Stl);
        REQUIRE(res.optimal());
        double effort = total_control_effort(res);
        CHECK(effort <= previous + 1e-6);
        previous = effort;
    }
}

TEST_CASE("saturation constraints") {
    Formula f = parse_stl("G[2,3] s1>=2");
    LtiSystem sys = double_integrator();
    sys.horizon = 4;
    SUBCASE("Linf tightens the per-component bounds") {
        sys.saturation = Saturation{Saturation::Norm::Linf, 1.0};
        SynthesisResult res = synth_control(f, sys, CostWeights{}, SynthLogic::Stl);
        REQUIRE(res.optimal());
        for (const auto& name : res.inputs.signal_names())
            for (int t = 0; t < res.inputs.length(); ++t)
                CHECK(std::abs(res.inputs.value(name, t)) <= 1.0 + 1e-6);
    }
    SUBCASE("L1 bounds the summed magnitudes per step") {
        sys.saturation = Saturation{Saturation::Norm::L1, 1.5};
        SynthesisResult res = synth_control(f, sys, CostWeights{}, SynthLogic::Stl);
        REQUIRE(res.optimal());
        for (int t = 0; t < res.inputs.length(); ++t)
            CHECK(std::abs(res.inputs.value("u1", t)) +
                      std::abs(res.inputs.value("u2", t)) <=
                  1.5 + 1e-6);
    }
    SUBCASE("a tight L1 budget can make the spec infeasible") {
        sys.saturation = Saturation{Saturation::Norm::L1, 0.1};
        SynthesisResult res = synth_control(f, sys, CostWeights{}, SynthLogic::Stl);
        CHECK(res.status == milp::SolveStatus::Infeasible);
    }
}

TEST_CASE("wstl control synthesis") {
    WeightTable w{{"p", {0.3, 0.7}}};
    Formula f = parse_wstl("&&^p(G[3,5] (s1>=3), G[9,10] (s2>=2))", w);
    LtiSystem sys = double_integrator();
    CostWeights costs;
    SynthesisResult res = synth_control(f, sys, costs, SynthLogic::Wstl, w);
    REQUIRE(res.optimal());
    CHECK(res.milp_robustness >= 0.0);
    CHECK(res.monitor_robustness ==
          doctest::Approx(res.milp_robustness).epsilon(1e-6));
    CHECK(check_result(res, f).ok);
}

TEST_CASE("check_result flags corrupted traces") {
    Formula f = parse_stl("(G[3,5] s1>=3) && (G[9,10] s2>=2)");
    LtiSystem sys = double_integrator();
    SynthesisResult res = synth_control(f, sys, CostWeights{}, SynthLogic::Stl);
    REQUIRE(res.optimal());

    SynthesisResult corrupted = res;
    Trace broken;
    for (const auto& name : res.states.signal_names()) {
        std::vector<double> samples = res.states.samples(name);
        if (name == "s1") samples[4] += 1.0;
        broken.add_signal(name, samples);
    }
    corrupted.states = broken;
    CheckReport report = check_result(corrupted, f);
    CHECK(report.max_dynamics_residual > 1e-6);
    CHECK(!report.dynamics_ok);
    CHECK(!report.ok);
}

TEST_CASE("synthesis input validation") {
    LtiSystem sys = double_integrator();
    CHECK_THROWS_AS(
        synth_control(parse_stl("G[0,3] nosuch>=0"), sys, CostWeights{}, SynthLogic::Stl),
        UnknownSignalError);
    CHECK_THROWS_AS(
        synth_control(parse_stl("G[0,30] s1>=0"), sys, CostWeights{}, SynthLogic::Stl),
        HorizonOverrideError);
    LtiSystem bad = double_integrator();
    bad.initial_state = Eigen::VectorXd::Constant(2, 20.0);
    CHECK_THROWS_AS(
        synth_control(parse_stl("G[0,3] s1>=0"), bad, CostWeights{}, SynthLogic::Stl),
        BadBoundsError);
    LtiSystem mismatched = double_integrator();
    mismatched.A = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(synth_control(parse_stl("G[0,3] s1>=0"), mismatched, CostWeights{},
                                  SynthLogic::Stl),
                    DimensionError);
}
