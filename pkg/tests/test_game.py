"""Distinguishing-game harness: determinism, budgets, advantage estimation, bounds."""

from fractions import Fraction

import pytest

from kafw import game
from kafw.errors import QueryBudgetExceeded
from kafw.game import (
    ConstructionSpec,
    Distinguisher,
    WorldSpec,
    bound_formula,
    boomerang4_distinguisher,
    comp_any_distinguisher,
    constant_distinguisher,
    estimate_advantage,
    quartet_probe_distinguisher,
    run_trial,
    run_trial_detailed,
)
from kafw.gf2 import DomainParams
from kafw.oracles import derive_seed
from kafw.schedules import builtin, random_affine

P8 = DomainParams.for_width(8)


def affine4_spec(function_kind="permutation", single_f=False):
    return ConstructionSpec(
        P8, 4, lambda rng: random_affine(P8, 4, rng), "kafw", function_kind, single_f
    )


def test_run_trial_deterministic_per_seed():
    d = boomerang4_distinguisher()
    w = WorldSpec(game.REAL, affine4_spec())
    assert [run_trial(d, w, 5)] * 3 == [run_trial(d, w, 5) for _ in range(3)]
    ideal = WorldSpec(game.IDEAL, affine4_spec())
    bits = [run_trial(d, ideal, s) for s in range(50)]
    assert bits == [run_trial(d, ideal, s) for s in range(50)]


def test_constant_distinguisher_zero_advantage():
    est = estimate_advantage(constant_distinguisher(0), affine4_spec(), 200, 1)
    assert est.p_real == est.p_ideal == 0.0
    assert est.advantage == 0.0
    est = estimate_advantage(constant_distinguisher(1), affine4_spec(), 200, 1)
    assert est.advantage == 0.0 and est.p_real == 1.0


def test_same_world_self_test_gives_zero_advantage():
    d = boomerang4_distinguisher()
    w = WorldSpec(game.IDEAL, affine4_spec())
    trials = 300
    a = sum(run_trial(d, w, derive_seed(9, "x", i)) for i in range(trials))
    b = sum(run_trial(d, w, derive_seed(9, "x", i)) for i in range(trials))
    assert a == b


def test_world_seed_derivations_differ():
    seeds_real = [derive_seed(3, game.REAL, i) for i in range(10)]
    seeds_ideal = [derive_seed(3, game.IDEAL, i) for i in range(10)]
    assert len(set(seeds_real) | set(seeds_ideal)) == 20


def test_boomerang_advantage_near_one():
    est = estimate_advantage(boomerang4_distinguisher(), affine4_spec(), 1000, 42)
    assert est.p_real == 1.0
    assert est.p_ideal <= 0.01
    assert est.advantage >= 0.99
    assert est.mean_q_e == 4.0 and est.mean_q_f == 0.0


def test_budget_exceeded_detected():
    def greedy(ctx):
        for i in range(10):
            ctx.rk.encrypt(0, i)
        return 0

    d = Distinguisher("greedy", greedy, q_e=4, q_f=0)
    with pytest.raises(QueryBudgetExceeded):
        run_trial(d, WorldSpec(game.IDEAL, affine4_spec()), 0)


def test_trial_outcome_counters():
    out = run_trial_detailed(
        comp_any_distinguisher(),
        WorldSpec(game.REAL, ConstructionSpec(P8, 8, builtin("identity_bad(8)", P8))),
        3,
    )
    assert out.bit == 1 and out.q_e_used == 2 and out.q_f_used == 0


def test_quartet_probe_is_null_against_good_schedule():
    spec = ConstructionSpec(P8, 4, builtin("minimal4", P8))
    est = estimate_advantage(quartet_probe_distinguisher(), spec, 2000, 7)
    assert est.advantage <= 0.05


def test_bound_formula_values():
    assert bound_formula(5, 0, 0, 256).value == 0
    # 4-round permutation bound at q_e = q_f = 4 with the reference deltas:
    # 2*(3/256)*16 + (4/256)*16 + (128 + 432 + 16)/256 = 736/256.
    res = bound_formula(1, 4, 4, 256, Fraction(3, 256), Fraction(2, 256), Fraction(2, 256))
    assert res.value == Fraction(23, 8)
    assert res.precondition_ok is True
    assert res.vacuous  # 23/8 > 1: information-theoretic at desk scale
    res = bound_formula(5, 16, 16, 256)
    assert res.value == Fraction(14 * 256 + 57 * 256 + 64, 256)
    assert res.vacuous
    res = bound_formula(6, 0, 4, 256)
    assert res.value == Fraction(288, 256) and res.vacuous
    res = bound_formula(2, 0, 4, 256, Fraction(3, 256), Fraction(2, 256), Fraction(2, 256))
    assert res.value == Fraction(176, 256) and not res.vacuous
    assert res.precondition_ok is None  # no query precondition stated


def test_bound_formula_precondition_flag():
    res = bound_formula(1, 200, 100, 256)
    assert res.precondition_ok is False
    res = bound_formula(5, 0, 64, 256)
    assert res.precondition_ok is False
    with pytest.raises(ValueError):
        bound_formula(3, 1, 1, 256)
    with pytest.raises(ValueError):
        bound_formula(1, -1, 1, 256)


def test_estimate_requires_trials():
    with pytest.raises(ValueError):
        estimate_advantage(constant_distinguisher(0), affine4_spec(), 0, 0)


def test_single_f_world_shares_one_function_view():
    spec = ConstructionSpec(P8, 4, builtin("minimal4", P8), "kafw", "function", True)

    def probe(ctx):
        assert len(ctx.fs) == 1
        # The adversary's view and the cipher agree on f.
        y = ctx.fs[0].query(0x3C)
        ct = ctx.rk.encrypt(0, 0x0101)
        assert ctx.fs[0].query(0x3C) == y
        return ct & 1

    run_trial(Distinguisher("probe", probe, None, None), WorldSpec(game.REAL, spec), 11)
