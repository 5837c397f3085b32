import math

import numpy as np
import pytest

from conftest import A_TUNE, L0, ref_params
from rindler_cavities import experiments
from rindler_cavities.errors import BracketError, DomainError
from rindler_cavities.experiments import (
    SweepRow,
    evaluate,
    sweep_acceleration,
    sweep_length,
    tune_length,
)
from rindler_cavities.interaction import ProtocolParams

UNIT = ProtocolParams(a=0.0, L=1.0, W=1.0)


def test_inertial_single_row():
    res = sweep_acceleration(ref_params(), [0.0])
    assert len(res.rows) == 1
    assert res.rows[0].entropy_bits == pytest.approx(1.0, abs=1e-12)
    assert not res.partial


def test_sweep_rows_and_metadata(accel_sweep):
    rows = accel_sweep.rows
    assert len(rows) == 40
    assert all(0.0 <= r.entropy_bits <= 1.0 for r in rows)
    assert rows[-1].entropy_bits < rows[0].entropy_bits
    assert accel_sweep.metadata["axis"] == "a"
    assert all(r.quad_err <= 1e-8 for r in rows)
    assert rows[0].aL == pytest.approx(1e-2)
    assert rows[0].a_si == pytest.approx(1e-2 / L0 * 299_792_458.0)


def test_length_sweep_matches_acceleration_sweep():
    a = 1e3 / L0
    r_len = sweep_length(ref_params(), a, [0.5 * L0, L0]).rows[1]
    r_acc = sweep_acceleration(ref_params(), [a]).rows[0]
    for name in ("entropy_bits", "p_alice", "p_rob", "p_success"):
        assert getattr(r_len, name) == pytest.approx(getattr(r_acc, name), rel=1e-10, abs=0)


def test_length_sweep_keeps_omega():
    base = ref_params()
    res = sweep_length(base, 0.0, [L0])
    assert res.metadata["omega_policy"].startswith("fixed")
    assert res.metadata["baseline"]["Omega"] == base.Omega
    assert len(res.rows) == 1 and res.rows[0].value == L0


def test_grid_validation():
    with pytest.raises(DomainError):
        sweep_acceleration(ref_params(), [2.0, 1.0])
    with pytest.raises(DomainError):
        sweep_acceleration(ref_params(), [])
    with pytest.raises(DomainError):
        sweep_length(ref_params(), 0.0, [L0, L0])


def test_success_probability_eps_scaling():
    p = ref_params(a=10.0 / L0)
    r1, _ = evaluate(p)
    r2, _ = evaluate(p.with_(eps=2 * p.eps))
    assert r2.p_success / r1.p_success == pytest.approx(4.0, abs=1e-10)


def test_nonconvergence_flags_partial(monkeypatch):
    from rindler_cavities import interaction
    monkeypatch.setattr(interaction, "EVAL_BUDGET", 300)
    monkeypatch.setattr(interaction, "EVAL_BUDGET_CEILING", 300)
    res = sweep_acceleration(UNIT.with_(tol=1e-12), [1.0])
    assert res.partial and "nonconverged" in res.rows[0].flag
    assert res.metadata["partial"]


def test_tune_inertial_returns_baseline():
    res = tune_length(ref_params(), 0.0)
    assert res.L_star == L0 and res.entropy_at_L_star == pytest.approx(1.0, abs=1e-12)
    assert res.method == "inertial"


def test_tune_bisection_unit_cavity():
    res = tune_length(UNIT, 1.0, (1.0, 2.0))
    assert res.method == "bisection"
    assert res.entropy_at_L_star == pytest.approx(1.0, abs=1e-12)
    assert 1.0 < res.L_star < 2.0
    assert res.entropy_at_L_star >= max(s[1] for s in res.scan)


def test_tune_endpoint_cases():
    down = tune_length(UNIT, 1.0, (0.75, 0.85))
    assert down.method == "endpoint" and down.L_star == 0.75 and down.diagnostic
    up = tune_length(UNIT, 1.0, (1.0, 1.5))
    assert up.method == "endpoint" and up.L_star == 1.5


def test_tune_rejects_multimodal_bracket():
    with pytest.raises(BracketError) as info:
        tune_length(UNIT, 1.0, (0.5, 1.0))
    assert len(info.value.scan) == 16


def test_tune_rejects_bad_bracket():
    with pytest.raises(DomainError):
        tune_length(UNIT, 1.0, (2.0, 1.0))


def _fake_row(entropy_of_L, p_of_L):
    def row(params):
        L = params.L
        return SweepRow(L, entropy_of_L(L), p_of_L(L), 1 - p_of_L(L), 1e-20, 8, 0.0, a=params.a, L=L)
    return row


def test_tune_golden_section(monkeypatch):
    # interior peak without a balance crossing: p_A stays above 1/2
    peak = 1.37
    monkeypatch.setattr(experiments, "_row",
                        _fake_row(lambda L: 0.9 - (L - peak) ** 2, lambda L: 0.7))
    res = tune_length(UNIT, 1.0, (1.0, 2.0))
    assert res.method == "golden"
    assert abs(res.L_star - peak) < 1e-4 * peak
    lo, hi = res.bracket
    assert hi - lo <= 1e-4 * 0.5 * (hi + lo)


def test_tune_local_maximum(tune_8e33):
    base = ref_params()
    L = tune_8e33.L_star
    for Lx in (L * (1 - 1e-13), L * (1 + 1e-13)):
        row, _ = evaluate(base.with_(a=A_TUNE, L=Lx))
        assert row.entropy_bits <= tune_8e33.entropy_at_L_star + 1e-8


def test_full_acceleration_curve():
    # the complete fall from 1 to 0 at the 10 cm / 100 ns setting spans aL ~ 1e-8 .. 1e-3
    aL = np.logspace(-10, 16, 53)
    res = sweep_acceleration(ref_params(), aL / L0)
    E = res.column("entropy_bits")
    assert E[0] >= 0.999
    assert E[-1] <= 0.05
    assert np.all(np.diff(E) <= 1e-6)
    assert not res.partial
