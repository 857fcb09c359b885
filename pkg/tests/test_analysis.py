from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from osig.analysis import (
    FORGERS, SCHEME_NAMES, DPScheme, Fact1Adversary, ForbiddenQueryAdversary,
    GameReport, MaulingSigncryptAdversary, NotApplicable, commit_encrypt_game,
    ddh_instance, dp_attack_report, dp_params, enumerate_dist, fact1_attack,
    make_scheme, nontransferability, run_experiment, total_variation, wilson)
from osig.groups import seeded_rng


def test_wilson_interval_reference_values():
    # textbook value for 50/100
    lo, hi = wilson(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-4)
    assert hi == pytest.approx(0.5962, abs=1e-4)
    assert wilson(0, 0) == (0.0, 1.0)
    lo, hi = wilson(200, 200)
    assert hi == 1.0 and lo > 0.98


@settings(max_examples=100)
@given(st.integers(1, 500), st.data())
def test_wilson_contains_the_estimate(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = wilson(k, n)
    assert 0 <= lo <= k / n <= hi <= 1


def test_game_report_fields():
    r = GameReport("s", "inv-cma", 200, 200)
    assert r.rate == 1.0 and r.advantage == 0.5
    assert not r.zero_advantage_plausible()
    r = GameReport("s", "inv-cma", 200, 103)
    assert r.zero_advantage_plausible()
    assert "wins=103/200" in r.to_text()
    rec = r.to_record()
    assert rec["trials"] == 200 and rec["wins"] == 103
    assert GameReport("s", "x", 1, 0, exact=Fraction(0)).advantage == 0


def test_forbidden_query_is_disqualified():
    sch = make_scheme("plain-ste")
    rep = run_experiment(sch, "inv-cma", ForbiddenQueryAdversary(), 20, 1)
    assert rep.disqualified == 20 and rep.trials == 0


def test_fact1_quick():
    assert fact1_attack("plain-ste", trials=20, seed=2).rate == 1.0
    assert fact1_attack("cteas", trials=20, seed=2).rate == 1.0
    with pytest.raises(NotApplicable):
        fact1_attack("etste")


def test_fact1_through_confirm_deny():
    rep = fact1_attack("plain-ste", oracle="verify", trials=20, seed=3)
    assert rep.rate == 1.0


def test_sinv_cma_fact1():
    sch = make_scheme("plain-ste")
    rep = run_experiment(sch, "sinv-cma", Fact1Adversary(), 40, 4)
    assert rep.rate == 1.0


def test_sind_cca_mauling_adversary_gains_nothing():
    sch = make_scheme("etste", "production")
    rep = run_experiment(sch, "sind-cca", MaulingSigncryptAdversary(), 60, 5)
    assert rep.disqualified == 0
    assert rep.zero_advantage_plausible()


@pytest.mark.parametrize("forger", sorted(FORGERS))
@pytest.mark.parametrize("name", ["plain-ste", "newste", "ctets", "etste"])
def test_forgers_fail_on_production(name, forger):
    sch = make_scheme(name, "production")
    rep = run_experiment(sch, "euf-cma", FORGERS[forger](), 10, 6)
    assert rep.wins == 0


def test_dp_status_identity_exhaustive():
    # toy: mauling by (alpha^rho', beta^rho') keeps validity for every rho'
    sch = DPScheme(dp_params("toy"))
    rng = seeded_rng(7, "dp")
    keys = sch.keygen(rng)
    while keys.beta == 1:
        keys = sch.keygen(rng)
    m = b"identity"
    sig, _ = sch.sign(keys, m, rng)
    bad = sch.sample_space(rng)
    while sch.status(keys, m, bad):
        bad = sch.sample_space(rng)
    for rho in range(100):
        assert sch.status(keys, m, sch.rerandomize(keys, sig, rho))
        assert not sch.status(keys, m, sch.rerandomize(keys, bad, rho))


@pytest.mark.parametrize("repaired", [False, True])
def test_dp_completeness(repaired):
    sch = DPScheme(dp_params("toy"), repaired)
    for i in range(20):
        rng = seeded_rng(8, repaired, i)
        assert all(sch.completeness(sch.keygen(rng), b"m%d" % i, rng))


def test_dp_ddh_instances():
    P = dp_params("toy")
    sch = DPScheme(P)
    rng = seeded_rng(9, "ddh")
    keys = sch.keygen(rng)
    while keys.beta == 1:
        keys = sch.keygen(rng)
    _, _, c1, c2 = ddh_instance(P, keys, False, rng)
    a = next(a for a in range(P.t - 1) if pow(P.alpha, a, P.t) == c1)
    assert c2 != pow(keys.beta, a, P.t)


def test_dp_attack_small():
    assert dp_attack_report("toy", 10, 1).rate == 1.0
    assert dp_attack_report("toy", 10, 1, repaired=True).rate == 1.0


def test_commit_encrypt_small():
    rep = commit_encrypt_game(300, 1)
    assert rep.trials == 300
    assert rep.zero_advantage_plausible()


def test_enumerate_dist_and_distance():
    def two_coins(rng):
        return rng.randrange(2) + rng.randrange(2)
    d = enumerate_dist(two_coins, 10)
    assert d == {0: Fraction(1, 4), 1: Fraction(1, 2), 2: Fraction(1, 4)}
    assert total_variation(d, {1: Fraction(1)}) == Fraction(1, 2)


@pytest.mark.parametrize("name", ["ctets", "cteas"])
def test_nontransferability_needs_perfect_hvzk(name):
    with pytest.raises(NotApplicable):
        nontransferability(make_scheme(name))


def test_completeness_not_applicable_to_cteas():
    with pytest.raises(NotApplicable):
        run_experiment(make_scheme("cteas"), "completeness", trials=1)


def test_scheme_names_build():
    for name in SCHEME_NAMES:
        assert make_scheme(name).name == name
