"""Smoke test for the ogmr_py extension. Run after installing the wheel."""

import math
import tempfile

import ogmr_py as o


def main():
    beta, gamma, rho = o.ogm_q_coeffs(0.01)
    assert abs(gamma - rho) < 1e-15 and 0 < beta < gamma < 1

    rows = o.table3(0.1)
    assert [r[0] for r in rows][0] == "GM-q" and len(rows) == 4
    assert o.rho_t_lambda(1.0, 0.0, 0.0, 0.1) == 0.9
    curve = o.rho_curve(0.1, 1.0, 0.4, 0.6, n=101)
    assert abs(max(r for _, r in curve) - 0.6) < 1e-12

    assert o.fixed_restart_interval(1e-4) == 385
    assert abs(o.t_next(1.0) - (1 + math.sqrt(5)) / 2) < 1e-15
    assert o.soft_threshold([-2.0, 0.5, 3.0], 1.0) == [-1.0, 0.0, 2.0]
    assert o.box_projection([-2.0, 0.5], [-1.0, -1.0], [1.0, 1.0]) == [-1.0, 0.5]

    quad = o.Problem.quadratic(40, 1e-2, seed=1)
    f_star = quad.optimum
    plain = o.solve(quad, "fgm", 600)
    tuned = o.solve(quad, "ogm-q", 600)
    restarted = o.solve(quad, "ogmp+gr", 600)
    for tr in (plain, tuned, restarted):
        assert len(tr) == 601 and tr.monitor == "primary"
    assert tuned.f_y[-1] - f_star < plain.f_y[-1] - f_star
    assert restarted.restarts

    lasso = o.Problem.lasso(40, 100, 5, 1.0, seed=2)
    assert not lasso.is_smooth
    pogm = o.solve(lasso, "pogm+fr", 300)
    assert pogm.monitor == "secondary"
    fx = pogm.f_x
    assert all(b <= a + 1e-12 for a, b in zip(fx, fx[1:]))

    try:
        o.solve(lasso, "ogmp", 10)
    except ValueError as err:
        assert "smooth" in str(err)
    else:
        raise AssertionError("smooth method accepted a composite problem")

    with tempfile.TemporaryDirectory() as out:
        summary = o.run_experiment("case2", out, {"iters": "60"})
        assert len(summary) == 5 and summary[0]["records"] == 61

    print("ogmr_py smoke test passed")


if __name__ == "__main__":
    main()
