from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fervir.findim import (FindimError, MatrixModule, Subspace, build_Vm, choice_spans,
                           cyclic_span, decompose, direct_sum, exhaustive_simple_mod_p, identity,
                           is_simple, is_simple_exact, mat_mul, restrict, vacuum_space)
from fervir.scalar import ONE, ZERO, ScalarK
from fervir.superalg import Symbol

HALF = ScalarK(Fraction(1, 2))
PSI0 = Symbol("psi", 0)


def test_V0_relations():
    V = build_Vm(0)
    assert V.dimension == 2 and V.parity_mask == (0, 1)
    assert mat_mul(V.action[PSI0], V.action[PSI0]) == identity(2, HALF)


@pytest.mark.parametrize("m", range(4))
def test_Vm_dimensions_and_level(m):
    V = build_Vm(m, mu=3)
    assert V.dimension == 2 ** (m + 1)
    assert V.level == ScalarK(9)
    assert sum(V.parity_mask) == V.dimension // 2


@pytest.mark.parametrize("m", range(4))
def test_Vm_is_simple(m):
    V = build_Vm(m)
    assert is_simple(V) and is_simple_exact(V)
    vac0, vac1 = vacuum_space(V)
    assert vac0.dim == vac1.dim == 1


@pytest.mark.parametrize("m", [0, 1, 2])
def test_Vm_simple_by_exhaustive_search_mod_7(m):
    assert exhaustive_simple_mod_p(build_Vm(m, mu=ScalarK(1, 1)))


def test_direct_sum_is_not_simple():
    W = direct_sum(build_Vm(1), build_Vm(1))
    assert not is_simple(W)
    assert not exhaustive_simple_mod_p(W)


def test_exhaustive_search_limits():
    with pytest.raises(FindimError):
        exhaustive_simple_mod_p(build_Vm(3))
    with pytest.raises(FindimError):
        exhaustive_simple_mod_p(build_Vm(1), p=7, root2=2)


def level_zero_module():
    # psi_0 nilpotent, z = 0: the odd line is a proper submodule
    n = ((ZERO, ONE), (ZERO, ZERO))
    return MatrixModule(2, (0, 1), {PSI0: n, Symbol("z"): identity(2, ZERO)}, 0)


def test_level_zero():
    W = level_zero_module()
    assert not is_simple(W)
    with pytest.raises(FindimError, match="z = 0"):
        choice_spans(W, [ONE, ZERO])


def test_matrix_module_validation():
    V = build_Vm(0)
    bad_z = dict(V.action)
    bad_z[Symbol("z")] = ((ONE, ZERO), (ZERO, ScalarK(2)))
    with pytest.raises(FindimError, match="scalar"):
        MatrixModule(2, (0, 1), bad_z, 0)
    with pytest.raises(FindimError, match="flip parity"):
        MatrixModule(2, (0, 0), V.action, 0)
    wrong = dict(V.action)
    wrong[PSI0] = ((ZERO, ONE), (ONE, ZERO))        # psi_0^2 = 1, not 1/2
    with pytest.raises(FindimError, match="relations"):
        MatrixModule(2, (0, 1), wrong, 0)
    with pytest.raises(FindimError):
        MatrixModule(2, (0, 1), {PSI0: V.action[PSI0]}, 0)
    with pytest.raises(FindimError):
        direct_sum(build_Vm(1), build_Vm(2))
    with pytest.raises(FindimError):
        direct_sum(build_Vm(1), build_Vm(1, mu=2))


def test_json_round_trip():
    V = build_Vm(1, mu=ScalarK(0, 1))
    assert MatrixModule.from_json(V.to_json()) == V


def test_subspace():
    S = Subspace.span([[ONE, ONE, ZERO], [ScalarK(2), ScalarK(2), ZERO]], 3)
    assert S.dim == 1 and S.contains([ScalarK(-1), ScalarK(-1), ZERO])
    assert not S.add([ScalarK(3), ScalarK(3), ZERO])
    assert S.add([ZERO, ZERO, ONE]) and S.dim == 2
    assert S == Subspace.span([[ZERO, ZERO, ONE], [ONE, ONE, ONE]], 3)


def test_cyclic_span_and_restrict():
    W = direct_sum(build_Vm(1), build_Vm(1))
    v = W.basis_vector(0)
    S = cyclic_span(W, v)
    assert S.dim == 4
    R = restrict(W, S)
    assert R.dimension == 4 and is_simple(R)
    with pytest.raises(FindimError, match="not invariant"):
        restrict(W, Subspace.span([v], W.dimension))
    with pytest.raises(FindimError):
        cyclic_span(W, [ZERO] * 8)


def test_overlapping_choice_spans():
    # v = 1 + xi_0 xi_1: both choice spans are all of V_[1]
    V = build_Vm(1)
    v = [ONE, ZERO, ZERO, ONE]          # keys (), (0,), (2,), (0, 2)
    spans = choice_spans(V, v)
    assert [S.dim for _, S in spans] == [4, 4]
    parts = decompose(V, v)
    assert [S.dim for S in parts] == [4]


def test_decompose_two_copies():
    W = direct_sum(build_Vm(2), build_Vm(2, mu=-1))
    v = [ZERO] * 16
    v[0] = v[8] = ONE
    # the parity operator identifies the two copies, so 1 + 1 spans one copy
    assert [S.dim for S in decompose(W, v)] == [8]
    v[8], v[12] = ZERO, ONE             # 1 + xi_0 xi_1
    assert [S.dim for S in decompose(W, v)] == [8, 8]
    assert cyclic_span(W, v).dim == 16


def test_decompose_rejects_bad_vectors():
    V = build_Vm(1)
    with pytest.raises(FindimError, match="homogeneous"):
        decompose(V, [ONE, ONE, ZERO, ZERO])
    with pytest.raises(FindimError, match="zero vector"):
        decompose(V, [ZERO] * 4)


W11 = direct_sum(build_Vm(1), build_Vm(1, mu=-1))


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8), st.integers(0, 1))
def test_decompose_property(coords, parity):
    v = [ScalarK(c) if W11.parity_mask[i] == parity else ZERO for i, c in enumerate(coords)]
    if not any(v):
        return
    parts = decompose(W11, v)
    assert sum(S.dim for S in parts) == cyclic_span(W11, v).dim
    assert all(S.dim == 4 for S in parts)
