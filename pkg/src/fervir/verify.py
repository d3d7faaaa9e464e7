"""Exhaustive module-axiom sweep shared by every module handle.

A module handle exposes:

* ``algebra`` -- the :class:`Algebra` acting;
* ``act_basis(sym, key)`` -- action of one basis symbol on one basis key,
  as a dict ``key -> ScalarK`` (may be shared, never mutated here);
* ``key_parity(key)`` -- parity of a basis key;
* ``test_keys(degree_bound, shift)`` -- basis keys to test; ``shift`` is
  the largest weight change the pair (x, y) can cause, for handles that
  carry a truncation;
* ``vector(terms)`` -- wrap a dict as a printable vector;
* ``describe()`` -- JSON-friendly parameters for the report.
"""
from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

from .lincomb import add_into
from .report import Stopwatch, VerificationReport
from .scalar import ONE, ScalarK
from .superalg import Symbol, structure_constants, super_sign

MINUS_ONE = -ONE


def apply_terms(module, sym: Symbol, terms: dict) -> dict:
    out: dict = {}
    for key, c in terms.items():
        res = module.act_basis(sym, key)
        if res:
            add_into(out, res, c)
    return out


def _shift(x: Symbol, y: Symbol) -> int:
    # only L_m moves the weight of a truncated factor
    s = 0
    for t in (x, y):
        if t.kind == "L":
            s += abs(t.twice) // 2
    return s


def _residual(module, x: Symbol, y: Symbol, key, br: dict) -> dict:
    """Exact residual of ``(x, y)`` on one basis key, over K."""
    sign = ONE if super_sign(x.parity, y.parity) > 0 else MINUS_ONE
    acc = apply_terms(module, x, module.act_basis(y, key))
    add_into(acc, apply_terms(module, y, module.act_basis(x, key)), -sign)
    for z, c in br.items():
        add_into(acc, module.act_basis(z, key), -c)
    return acc


class _Irrational(Exception):
    pass


class _RationalView:
    """Actions converted to gmpy2 rationals; raises once sqrt2 shows up."""

    def __init__(self, module):
        self.module = module
        self.cache: dict = {}

    def __call__(self, sym, key):
        try:
            return self.cache[sym, key]
        except KeyError:
            pass
        out = []
        for k, c in self.module.act_basis(sym, key).items():
            if c._q:
                raise _Irrational
            out.append((k, mpq(c._p, c._d)))
        self.cache[sym, key] = out
        return out


def _sweep_rational(module, pairs_keys):
    """First failing ``(x, y, key)`` and the number of triples checked."""
    act = _RationalView(module)
    cache = act.cache
    count = 0
    for x, y, br, keys in pairs_keys:
        sign = 1 if super_sign(x.parity, y.parity) > 0 else -1
        brq = [(z, mpq(c._p, c._d)) for z, c in br.items() if not c._q]
        if len(brq) != len(br):
            raise _Irrational
        for key in keys:
            count += 1
            acc: dict = {}
            get = acc.get
            for k1, c1 in cache.get((y, key)) or act(y, key):
                for k2, c2 in cache.get((x, k1)) or act(x, k1):
                    acc[k2] = get(k2, 0) + c1 * c2
            for k1, c1 in cache.get((x, key)) or act(x, key):
                c1 = sign * c1
                for k2, c2 in cache.get((y, k1)) or act(y, k1):
                    acc[k2] = get(k2, 0) - c1 * c2
            for z, c in brq:
                for k2, c2 in act(z, key):
                    acc[k2] = get(k2, 0) - c * c2
            if any(acc.values()):
                return (x, y, key), count
    return None, count


def _sweep_exact(module, pairs_keys):
    count = 0
    for x, y, br, keys in pairs_keys:
        for key in keys:
            count += 1
            if _residual(module, x, y, key, br):
                return (x, y, key), count
    return None, count


def verify_module_axioms(module, index_bound: int, degree_bound: int,
                         check: str = "module_axioms") -> VerificationReport:
    """Check ``x(yv) - (-1)^{|x||y|} y(xv) - [x,y]v == 0`` exhaustively.

    Pairs ``(x, y)`` run over all basis symbols with ``|index| <= index_bound``
    in canonical order, ``v`` over ``module.test_keys``.  The first failing
    triple in that order is the witness.  While every coefficient met is
    rational the sweep runs on gmpy2 rationals; otherwise over K.
    """
    if index_bound < 1:
        raise ValueError("index_bound must be >= 1")
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    watch = Stopwatch()
    alg = module.algebra
    params = {"module": module.describe(), "index_bound": index_bound,
              "degree_bound": degree_bound}
    report = VerificationReport(check, params)
    syms = alg.symbols(index_bound)
    keys_by_shift: dict = {}

    def pairs_keys():
        for x in syms:
            for y in syms:
                sh = _shift(x, y)
                keys = keys_by_shift.get(sh)
                if keys is None:
                    keys = keys_by_shift[sh] = module.test_keys(degree_bound, sh)
                yield x, y, structure_constants(alg, x, y), keys

    try:
        witness, count = _sweep_rational(module, pairs_keys())
    except _Irrational:
        witness, count = _sweep_exact(module, pairs_keys())
    if witness is not None:
        x, y, key = witness
        res = _residual(module, x, y, key, structure_constants(alg, x, y))
        report.fail(x=x, y=y, v=module.vector({key: ONE}), residual=module.vector(res))
    report.triples_checked = count
    report.duration_ms = watch.ms()
    return report


class FockHandle:
    """A Fock module as a module handle.

    ``V(delta)`` carries the S(delta) action: ``L_m`` as the normal-ordered
    ``Lbar_m``, ``psi_r`` as ``mu psi_r``, ``c`` as ``1/2`` and ``z`` as
    ``mu^2``.  ``V_[m]`` and ``V_I`` carry only F(0).
    """

    def __init__(self, space):
        self.space = space
        self._cache: dict = {}

    @property
    def algebra(self):
        from .superalg import F0, fermion_virasoro
        if self.space.kind == "V":
            return fermion_virasoro(self.space.delta)
        return F0

    def describe(self) -> dict:
        return self.space.to_json()

    def key_parity(self, key) -> int:
        return len(key) & 1

    def vector(self, terms: dict):
        return self.space.vector(terms)

    def test_keys(self, degree_bound, shift=0) -> list:
        return self.space.basis_up_to(degree_bound)

    def act_basis(self, sym: Symbol, key) -> dict:
        try:
            return self._cache[sym, key]
        except KeyError:
            pass
        from .fock import _lbar_basis
        sp = self.space
        if sym.kind == "psi":
            out = {}
            res = sp.psi_basis(sym.twice, key)    # raises outside F_[m] on V_[m]
            if res is not None:
                c = res[0] if sp.twist is None else res[0] * sp.twist
                out = {res[1]: c}
        elif sym.kind == "L" and sp.kind == "V":
            out = _lbar_basis(sp.delta2, sym.twice // 2, key, 1)
        elif sym.kind == "z":
            out = {key: sp.level}
        elif sym.kind == "c" and sp.kind == "V":
            out = {key: ScalarK(Fraction(1, 2))}
        else:
            raise ValueError(f"{sym} does not act on {sp}")
        self._cache[sym, key] = out
        return out

    def act(self, x, v):
        out: dict = {}
        for sym, a in x.terms.items():
            self.algebra.check_symbol(sym)
            for key, c in v.terms.items():
                add_into(out, self.act_basis(sym, key), a * c)
        return self.space.vector(out)
