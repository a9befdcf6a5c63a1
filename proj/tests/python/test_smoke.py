"""Smoke tests for the python bindings: parsing, robustness, solving, and a
cross-check of the LP layer against scipy.optimize.linprog."""

import math

import numpy as np
import pytest

import tlopt


def test_parse_and_horizon():
    f = tlopt.parse_stl("(F[0,4] s>2) && (G[2,4] s<=4)")
    assert tlopt.horizon(f) == 4
    assert f.kind == tlopt.NodeKind.And
    assert str(f) == "(F[0,4] (s >= 2)) && (G[2,4] (s <= 4))"
    # round trip through the printer
    assert tlopt.parse_stl(str(f)) == f


def test_parse_errors():
    with pytest.raises(ValueError):
        tlopt.parse_stl("s == 2")
    with pytest.raises(ValueError):
        tlopt.parse_mtl("s > 2")
    with pytest.raises(ValueError):
        tlopt.parse_wstl("G^w[0,2] s>0", {})  # unknown weight


def test_robustness_and_bool():
    f = tlopt.parse_stl("G[0,3] s>2")
    trace = tlopt.Trace({"s": [5.0, 5.0, 5.0, 5.0]})
    assert tlopt.robustness(f, trace) == 3.0
    assert tlopt.evaluate_bool(f, trace)
    assert tlopt.agm_robustness(f, trace, 0, {"s": (0.0, 10.0)}) == pytest.approx(3 / 8)
    assert tlopt.wstl_robustness(f, {}, trace) == 3.0


def test_pnf_negate():
    f = tlopt.parse_stl("!(F[0,3] s>2)")
    assert str(tlopt.pnf(f)) == "G[0,3] (s <= 2)"
    with pytest.raises(ValueError):
        tlopt.negate(tlopt.parse_stl("a>0 U[0,2] b>0"))


def test_milp_model_against_scipy():
    from scipy.optimize import linprog

    rng = np.random.default_rng(42)
    for _ in range(25):
        n = int(rng.integers(2, 6))
        rows = int(rng.integers(1, 6))
        lo = rng.uniform(-5, 0, n)
        hi = lo + rng.uniform(0.5, 8, n)
        a = rng.integers(-4, 5, size=(rows, n)).astype(float)
        rhs = rng.integers(-8, 9, size=rows).astype(float)
        cost = rng.integers(-5, 6, size=n).astype(float)

        model = tlopt.Model()
        ids = [model.add_var(f"x{i}", "continuous", lo[i], hi[i]) for i in range(n)]
        for r in range(rows):
            terms = [(a[r, j], ids[j]) for j in range(n) if a[r, j] != 0]
            if not terms:
                continue
            model.add_constr(terms, "<=", rhs[r])
        model.set_objective("min", [(cost[j], ids[j]) for j in range(n)])

        status, values, objective = tlopt.solve_lp(model)
        ref = linprog(cost, A_ub=a, b_ub=rhs, bounds=list(zip(lo, hi)),
                      method="highs")
        if ref.status == 2:
            assert status == "infeasible"
        else:
            assert ref.status == 0
            assert status == "optimal"
            assert objective == pytest.approx(ref.fun, abs=1e-6)


def test_solve_milp_and_export():
    model = tlopt.Model()
    z1 = model.add_var("z1", "binary", 0, 1)
    z2 = model.add_var("z2", "binary", 0, 1)
    model.add_constr([(1.0, z1), (1.0, z2)], "<=", 1.0)
    model.set_objective("max", [(1.0, z1), (1.0, z2)])
    sol = tlopt.solve_milp(model)
    assert sol.status == tlopt.SolveStatus.Optimal
    assert sol.objective == pytest.approx(1.0)

    lp = model.export_lp()
    assert lp.startswith("Maximize\n")
    assert lp.endswith("End\n")
    assert "Binaries" in lp


def test_export_lp_reimport_roundtrip():
    """Parse the exported LP text back and re-verify the reported optimum."""
    f = tlopt.parse_stl("G[0,2] s>2")
    spec = tlopt.encode_stl(f, {"s": (0.0, 10.0)}, robust=True, satisfaction=True)
    lp_text = spec.model.export_lp()
    sol = tlopt.solve_milp(spec.model)
    assert sol.status == tlopt.SolveStatus.Optimal

    # minimal LP reader for the exported subset
    lines = lp_text.splitlines()
    assert lines[0] == "Maximize"
    obj_line = lines[1]
    assert obj_line.startswith(" obj:")
    assert "rho" in obj_line
    assert lines[2] == "Subject To"
    n_rows = sum(1 for ln in lines[3:] if ":" in ln)
    assert n_rows == spec.model.num_constraints
    assert lines[-1] == "End"
    # the reported optimum matches the known best shift ub - c = 8
    assert sol.objective == pytest.approx(8.0)


def test_encode_solve_extract():
    f = tlopt.parse_stl("F[0,3] s>2")
    spec = tlopt.encode_stl(f, {"s": (0.0, 10.0)}, robust=False, satisfaction=True)
    sol = tlopt.solve_milp(spec.model)
    assert sol.status == tlopt.SolveStatus.Optimal
    trace = tlopt.extract_trace(spec, sol)
    assert tlopt.evaluate_bool(f, trace)


def test_synth_trajectory_example1():
    f = tlopt.parse_stl(
        "(G[1,5] s1>=7 || G[1,5] s2<=2) && (F[5,10] s1<=3 || F[5,10] s2>=8)")
    res = tlopt.synth_trajectory(
        f,
        {"s1": (0.0, 10.0), "s2": (0.0, 10.0)},
        initial={"s1": 0.0, "s2": 0.0},
        horizon=10,
    )
    assert res.optimal
    assert res.monitor_robustness >= 0.0
    assert len(res.states) == 11
    assert tlopt.evaluate_bool(f, res.states)


def test_synth_control_example2():
    sys = tlopt.LtiSystem()
    sys.A = np.array([[1.0, 1.0], [0.0, 1.0]])
    sys.B = np.eye(2)
    sys.C = np.array([[1.0, 0.0]])
    sys.D = np.zeros(2)
    sys.state_names = ["s1", "s2"]
    sys.input_names = ["u1", "u2"]
    sys.set_state_bounds("s1", -9, 9)
    sys.set_state_bounds("s2", -9, 9)
    sys.set_input_bounds("u1", -5, 5)
    sys.set_input_bounds("u2", -5, 5)
    sys.initial_state = np.zeros(2)
    sys.horizon = 10

    f = tlopt.parse_stl("(G[3,5] s1>=3) && (G[9,10] s2>=2)")
    res = tlopt.synth_control(f, sys)
    assert res.optimal
    report = tlopt.check_result(res, f)
    assert report.ok
    assert report.max_dynamics_residual <= 1e-6
    assert report.boolean_satisfied

    # outputs follow y = C s
    for t in range(11):
        assert res.outputs.value("y1", t) == pytest.approx(res.states.value("s1", t))


def test_batch_robustness():
    f = tlopt.parse_stl("G[0,2] s>0")
    traces = [tlopt.Trace({"s": [1.0, 2.0, 3.0]}), tlopt.Trace({"s": [-1.0, 2.0, 3.0]})]
    values = tlopt.batch_robustness(f, traces)
    assert values == [1.0, -1.0]
