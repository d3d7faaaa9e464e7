from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from fervir.fock import (FockError, FockSpace, IndexSet, NotEigen, character, f_weight_vector,
                         is_smooth, psi_act, lbar_act, vacuum_energy, weight_of)
from fervir.scalar import ONE, ScalarK

V0 = FockSpace.V(0)
V12 = FockSpace.V(Fraction(1, 2))
HALF = ScalarK(Fraction(1, 2))


def test_psi_examples():
    assert psi_act(1, V0.xi(1)) == V0.vacuum()
    assert psi_act(0, V0.vacuum()) == V0.xi(0) * ScalarK(0, Fraction(1, 2))
    assert psi_act(2, V0.xi(1, 2)) == V0.xi(1) * -ONE
    tw = FockSpace.V(Fraction(1, 2), twist=2)
    assert psi_act(Fraction(-3, 2), tw.vacuum()) == tw.xi(Fraction(3, 2)) * ScalarK(2)


def test_psi_creation_and_annihilation():
    assert psi_act(-3, V0.xi(1)) == V0.xi(1, 3) * -ONE     # xi_3 passes xi_1
    assert psi_act(-1, V0.xi(1)).is_zero()
    assert psi_act(2, V0.xi(1)).is_zero()


def test_psi_parity_mismatch():
    with pytest.raises(FockError):
        psi_act(Fraction(1, 2), V0.vacuum())
    with pytest.raises(FockError):
        psi_act(1, V12.vacuum())


def test_psi0_squares_to_half():
    for key in V0.basis_up_to(3):
        v = V0.vector({key: ONE})
        assert psi_act(0, psi_act(0, v)) == v * HALF


def anticommutator(space, r, s, v):
    return psi_act(r, psi_act(s, v)) + psi_act(s, psi_act(r, v))


@pytest.mark.parametrize("space", [
    V0, V12, FockSpace.V(0, twist=ScalarK(1, 1)), FockSpace.V_m(3),
    FockSpace.V_I(IndexSet.finite([1, 4])), FockSpace.V_I(IndexSet.cofinite_set([2])),
], ids=str)
def test_anticommutation_relations(space):
    grid = [Fraction(t, 2) for t in space.grid(3)]
    idx = sorted(set(grid) | {-g for g in grid})
    for key in space.basis_up_to(3):
        v = space.vector({key: ONE})
        for r in idx:
            for s in idx:
                want = v * space.level if r + s == 0 else space.zero()
                assert anticommutator(space, r, s, v) == want, (r, s, key)


def test_V_I_sign_rule_and_weights():
    space = FockSpace.V_I(IndexSet.finite([5]))
    assert weight_of(space, (4, 10), 0) == ScalarK(-3)     # 2 added, 5 removed
    # psi_5 creates in V_I when 5 is in I and absent from J
    v = space.vacuum()                                      # J = I = {5}
    assert psi_act(-5, v).is_zero()
    assert psi_act(5, v) == space.xi(5)


def test_weight_examples():
    assert weight_of(V0, (), Fraction(1, 16)) == ScalarK(Fraction(1, 16))
    assert weight_of(V12, (1, 3), 0) == ScalarK(2)


def test_lbar_examples():
    assert lbar_act(0, V0.vacuum()) == V0.vacuum() * ScalarK(Fraction(1, 16))
    assert lbar_act(0, V0.xi(1, 2)) == V0.xi(1, 2) * ScalarK(Fraction(49, 16))
    assert lbar_act(3, V0.vacuum()).is_zero()
    assert lbar_act(0, V12.vacuum()) == V12.vacuum() * ScalarK(vacuum_energy(Fraction(1, 2)))


def test_lbar_ignores_twist():
    tw = FockSpace.V(0, twist=3)
    for k in range(-3, 4):
        got = lbar_act(k, tw.xi(1, 2))
        plain = lbar_act(k, V0.xi(1, 2))
        assert got.terms == plain.terms


def test_lbar_only_on_V():
    with pytest.raises(FockError):
        lbar_act(0, FockSpace.V_m(2).vacuum())
    with pytest.raises(ValueError):
        lbar_act(0, V0.vacuum(), pad=0)


@pytest.mark.parametrize("space", [V0, V12], ids=str)
def test_lbar_window_is_wide_enough(space):
    # widening the summation window by 5 must not change anything
    for key in space.basis_up_to(4):
        v = space.vector({key: ONE})
        for k in range(-4, 5):
            assert lbar_act(k, v) == lbar_act(k, v, pad=6), (k, key)


def test_V_m_bounds():
    Vm = FockSpace.V_m(2)
    with pytest.raises(FockError):
        psi_act(3, Vm.vacuum())
    with pytest.raises(FockError):
        Vm.xi(3)
    assert len(Vm.basis_up_to(10)) == 8


def test_bad_descriptors():
    with pytest.raises(FockError):
        FockSpace("W")
    with pytest.raises(FockError):
        IndexSet.finite([Fraction(1, 2)])
    with pytest.raises(FockError):
        IndexSet.from_json({"items": [1]})
    with pytest.raises(Exception):
        FockSpace.V(0, twist=0)


def test_json_round_trip():
    for space in (V0, V12, FockSpace.V_m(3, twist=-1), FockSpace.V_I(IndexSet.cofinite_set([0, 2]))):
        assert FockSpace.from_json(space.to_json()) == space


@pytest.mark.parametrize("delta, n, dim", [(0, 0, 2), (0, 3, 4), (Fraction(1, 2), Fraction(1, 2), 1)])
def test_character_examples(delta, n, dim):
    table = dict(character(delta, n))
    assert table[vacuum_energy(delta) + n] == dim


def test_character_against_enumeration():
    grid = [Fraction(2 * k + 1, 2) for k in range(8)]
    counts = {}
    for size in range(len(grid) + 1):
        for c in combinations(grid, size):
            s = sum(c, Fraction(0))
            counts[s] = counts.get(s, 0) + 1
    table = character(Fraction(1, 2), 4)
    base = vacuum_energy(Fraction(1, 2))
    for ev, dim in table:
        assert dim == counts.get(ev - base, 0)


def test_f_weight_vector():
    w = f_weight_vector(V0.xi(1, 3), 4)
    assert w == {1: ONE, 2: ScalarK(0), 3: ONE, 4: ScalarK(0)}
    assert all(not c for c in f_weight_vector(V0.vacuum(), 3).values())
    with pytest.raises(NotEigen):
        f_weight_vector(V0.xi(1) + V0.vacuum(), 3)
    with pytest.raises(FockError):
        f_weight_vector(V0.zero(), 3)


def test_is_smooth():
    assert is_smooth(FockSpace.V_I(IndexSet.finite([1, 4])))
    assert not is_smooth(FockSpace.V_I(IndexSet.cofinite_set([])))
    assert is_smooth(V12)


@given(st.lists(st.integers(min_value=0, max_value=6), unique=True), st.integers(min_value=1, max_value=6))
def test_basis_vectors_are_f_weight_vectors(J, kmax):
    v = V0.xi(*J)
    w = f_weight_vector(v, kmax)
    for k, lam in w.items():
        assert lam == (ONE if k in J else ScalarK(0))


@given(st.lists(st.integers(min_value=0, max_value=7), unique=True))
def test_L0_spectrum(J):
    v = V0.xi(*J)
    assert lbar_act(0, v) == v * ScalarK(Fraction(1, 16) + sum(J))
