import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odl import models as M
from odl.engine import AttitudeSpace, MessageBundle, Population, Scheduler, simulate, step
from odl.errors import (
    ConfigError,
    EmptyPopulation,
    InvariantViolation,
    OdlError,
    OutOfSpace,
)
from odl.rng import make_rng, replica_seed, stream_rng

seeds = st.integers(0, 2**32)


def test_steps_zero_gives_initial_row_only():
    pop = Population([0.1, -0.4, 0.7])
    traj = simulate(M.ModelSpec(M.DeGroot()), pop, 0, 1)
    assert traj.attitudes.shape == (1, 3)
    assert np.array_equal(traj.initial, pop.attitudes)
    assert traj.steps.tolist() == [0]


def test_trajectory_has_steps_plus_one_rows_and_thinning_keeps_last():
    pop = Population(make_rng(0).uniform(-1, 1, 5))
    spec = M.ModelSpec(M.HKBC(0.3))
    assert simulate(spec, pop, 7, 0).attitudes.shape == (8, 5)
    thin = simulate(spec, pop, 7, 0, record_every=3)
    assert thin.steps.tolist() == [0, 3, 6, 7]
    assert np.array_equal(thin.last, simulate(spec, pop, 7, 0).last)


def test_simulate_does_not_mutate_input():
    pop = Population([0.1, -0.4, 0.7])
    simulate(M.ModelSpec(M.DeGroot()), pop, 5, 1)
    assert pop.attitudes.tolist() == [0.1, -0.4, 0.7]


@pytest.mark.parametrize("preset", [M.DeffuantBC(0.3), M.SocialJudgement(), M.Lorenz(),
                                    M.RelativeAgreementModel(), M.MadsenBayes(beta=3)])
def test_same_seed_same_bytes(preset):
    pop = Population(make_rng(1).uniform(-1, 1, 30))
    spec = M.ModelSpec(preset)
    a, b = simulate(spec, pop, 500, 9), simulate(spec, pop, 500, 9)
    assert a.attitudes.tobytes() == b.attitudes.tobytes()
    assert simulate(spec, pop, 500, 10).attitudes.tobytes() != a.attitudes.tobytes()


@settings(max_examples=50)
@given(seeds)
def test_degroot_gap_non_increasing(seed):
    a0 = make_rng(seed).uniform(-1, 1, 5)
    traj = simulate(M.ModelSpec(M.DeGroot(alpha=0.5)), Population(a0), 30, seed)
    gaps = np.ptp(traj.attitudes, axis=1)
    assert np.all(np.diff(gaps) <= 1e-15)


@settings(max_examples=50)
@given(seeds, st.sampled_from(["degroot", "deffuant_bc", "hk_bc", "ra"]))
def test_convex_hull_containment(seed, name):
    preset = {"degroot": M.DeGroot(alpha=0.7), "deffuant_bc": M.DeffuantBC(0.5),
              "hk_bc": M.HKBC(0.4), "ra": M.RelativeAgreementModel(uncertainty=0.6)}[name]
    a0 = make_rng(seed).uniform(-1, 1, 8)
    traj = simulate(M.ModelSpec(preset), Population(a0), 40, seed)
    lo, hi = traj.attitudes.min(axis=1), traj.attitudes.max(axis=1)
    assert np.all(np.diff(lo) >= -1e-15) and np.all(np.diff(hi) <= 1e-15)


@settings(max_examples=30)
@given(seeds)
def test_bounded_space_is_respected(seed):
    # Hunter is pure reinforcement and would leave [-M, M] without clamping
    a0 = make_rng(seed).uniform(-0.5, 0.5, 10)
    for sched in Scheduler:
        traj = simulate(M.ModelSpec(M.Hunter(alpha=1.0), scheduler=sched,
                                    space=AttitudeSpace.bounded(0.5)),
                        Population(a0, space=AttitudeSpace.bounded(0.5)), 20, seed)
        assert np.all(np.abs(traj.attitudes) <= 0.5)


def test_synchronous_updates_read_one_snapshot():
    pop = Population([0.0, 1.0], space=AttitudeSpace.bounded(1.0))
    out = step(pop, M.ModelSpec(M.DeGroot(alpha=0.5)), make_rng(0))
    assert out.attitudes.tolist() == [0.5, 0.5]


def test_random_sequential_moves_at_most_one_agent():
    pop = Population(make_rng(3).uniform(-1, 1, 20))
    traj = simulate(M.ModelSpec(M.DeffuantBC(1.0)), pop, 50, 3)
    moved = np.sum(traj.attitudes[1:] != traj.attitudes[:-1], axis=1)
    assert np.all(moved <= 1)


def test_error_reports_failing_step():
    # a state outside the model's space is rejected before the first step, naming the agent
    with pytest.raises(OutOfSpace) as exc:
        simulate(M.ModelSpec(M.Lorenz()), Population([0.0, 2.0], space=AttitudeSpace(None)),
                 3, 0)
    assert "agent 1" in str(exc.value)

    class Boom(M.HKBC):
        def advance(self, pop, focals, rng):
            if pop.attitudes[0] > 0.25:
                raise InvariantViolation("boom", 0)
            pop.attitudes[0] += 0.1

    with pytest.raises(OdlError) as exc:
        simulate(M.ModelSpec(Boom()), Population([0.0, 0.0]), 10, 0)
    assert exc.value.step == 4  # 0.1, 0.2, 0.3 succeed; the fourth application fails
    assert str(exc.value).startswith("step 4:")


def test_population_invariants():
    with pytest.raises(EmptyPopulation):
        simulate(M.ModelSpec(M.DeGroot()), Population([]), 1, 0)
    with pytest.raises(OutOfSpace):
        Population([0.0, 1.5], space=AttitudeSpace.bounded(1.0)).validate()
    with pytest.raises(InvariantViolation, match="agent 1"):
        Population([0.0, 0.1], params={"sigma": [1.0, -1.0]}).validate()
    with pytest.raises(InvariantViolation):
        Population([0.0, np.nan]).validate()
    with pytest.raises(ConfigError):
        Population([0.0], params={"colour": 1.0})
    with pytest.raises(ConfigError):
        simulate(M.ModelSpec(M.DeGroot()), Population([0.0, 1.0]), -1, 0)


def test_message_bundle_excludes_receiver():
    with pytest.raises(ConfigError):
        MessageBundle.individual(2, [1, 2], [0.1, 0.2])
    b = MessageBundle.average(0, [1, 2], [0.0, 1.0])
    assert b.averaged and b.mean == 0.5 and b.count == 2


def test_attitude_space():
    assert AttitudeSpace.bounded(2).clamp_scalar(3.0) == 2.0
    assert AttitudeSpace.unbounded().clamp_scalar(1e9) == 1e9
    with pytest.raises(ConfigError):
        AttitudeSpace(-1.0)


def test_rng_helpers():
    assert make_rng(5).random() == make_rng(5).random()
    assert replica_seed(100, 2, 10, 3) == 123
    assert stream_rng(5, 1).random() != stream_rng(5, 2).random()
    assert stream_rng(5, 1).random() != make_rng(5).random()
