"""Basis symbols, structure constants and brackets of the four algebras.

Supported algebras:

* ``thv``  -- twisted Heisenberg-Virasoro algebra, basis d_m, h_r, c1, c2, c3
* ``vir``  -- Virasoro algebra, basis L_m, c
* ``f0``, ``f12``  -- Fermion algebras F(0), F(1/2), basis psi_r, z
* ``s0``, ``s12``  -- Fermion-Virasoro algebras S(0), S(1/2), basis L_m, psi_r, c, z

Indices are stored doubled (``twice = 2 * index``) so that half-integer
indices stay integral.  The ``psi`` index grid is ``Z + delta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, NamedTuple

from .lincomb import LinComb, add_into
from .report import Stopwatch, VerificationReport
from .scalar import ScalarError, ScalarK

INDEXED = ("L", "psi", "d", "h")
CENTRAL = ("c", "z", "c1", "c2", "c3")
KIND_ORDER = {k: i for i, k in enumerate(("L", "d", "psi", "h", "c", "z", "c1", "c2", "c3"))}


class Symbol(NamedTuple):
    kind: str
    twice: int = 0

    @property
    def index(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def parity(self) -> int:
        return 1 if self.kind == "psi" else 0

    @property
    def degree(self) -> Fraction:
        return Fraction(self.twice, 2)

    def sort_key(self):
        return (KIND_ORDER[self.kind], self.twice)

    def __str__(self):
        if self.kind in CENTRAL:
            return self.kind
        return f"{self.kind}_{format_index(self.twice)}"


def format_index(twice: int) -> str:
    if twice % 2 == 0:
        return str(twice // 2)
    return f"{twice}/2"


def to_twice(index) -> int:
    """Doubled integer form of an integer or half-integer index."""
    x = Fraction(index) * 2
    if x.denominator != 1:
        raise ValueError(f"index {index} is not a half-integer")
    return int(x)


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Algebra:
    tag: str          # one of thv, vir, f, s
    delta2: int = 0   # 2 * delta; only meaningful for f and s

    @property
    def name(self) -> str:
        if self.tag in ("f", "s"):
            return f"{self.tag}{'12' if self.delta2 else '0'}"
        return self.tag

    @property
    def delta(self) -> Fraction:
        return Fraction(self.delta2, 2)

    @property
    def kinds(self) -> tuple[str, ...]:
        return {
            "thv": ("d", "h", "c1", "c2", "c3"),
            "vir": ("L", "c"),
            "f": ("psi", "z"),
            "s": ("L", "psi", "c", "z"),
        }[self.tag]

    @staticmethod
    def from_name(name: str) -> "Algebra":
        try:
            return ALGEBRAS[name]
        except KeyError:
            raise AlgebraError(f"unknown algebra {name!r}; expected one of {sorted(ALGEBRAS)}") from None

    def __str__(self):
        return self.name

    # -- symbols ------------------------------------------------------------

    def check_symbol(self, sym: Symbol) -> None:
        if sym.kind not in self.kinds:
            raise AlgebraError(f"symbol {sym.kind} is not admissible in {self.name}")
        if sym.kind == "psi":
            if sym.twice % 2 != self.delta2:
                raise AlgebraError(
                    f"index parity mismatch: psi_{format_index(sym.twice)} in {self.name}")
        elif sym.kind in INDEXED:
            if sym.twice % 2:
                raise AlgebraError(f"{sym.kind} needs an integer index, got {format_index(sym.twice)}")
        elif sym.twice:
            raise AlgebraError(f"central symbol {sym.kind} takes no index")

    def symbols(self, bound) -> list[Symbol]:
        """Basis symbols with ``|index| <= bound`` in canonical order."""
        b2 = to_twice(bound)
        out = []
        for kind in self.kinds:
            if kind in CENTRAL:
                out.append(Symbol(kind))
                continue
            parity = self.delta2 if kind == "psi" else 0
            out.extend(Symbol(kind, t) for t in range(-b2, b2 + 1) if t % 2 == parity)
        return sorted(out, key=Symbol.sort_key)

    # -- element constructors -------------------------------------------------

    def element(self, terms: dict | None = None) -> "Element":
        terms = dict(terms or {})
        for sym in terms:
            self.check_symbol(sym)
        return Element(self, terms)

    def basis(self, kind: str, index=0) -> "Element":
        sym = Symbol(kind, to_twice(index) if kind in INDEXED else 0)
        self.check_symbol(sym)
        return Element._from_clean(self, {sym: ScalarK(1)})

    def L(self, m) -> "Element":
        return self.basis("L", m)

    def psi(self, r) -> "Element":
        return self.basis("psi", r)

    def d(self, m) -> "Element":
        return self.basis("d", m)

    def h(self, r) -> "Element":
        return self.basis("h", r)

    def central(self, kind: str) -> "Element":
        return self.basis(kind)

    def zero(self) -> "Element":
        return Element._from_clean(self, {})


THV = Algebra("thv")
VIR = Algebra("vir")
F0 = Algebra("f", 0)
F12 = Algebra("f", 1)
S0 = Algebra("s", 0)
S12 = Algebra("s", 1)
ALGEBRAS = {a.name: a for a in (THV, VIR, F0, F12, S0, S12)}


def fermion_virasoro(delta) -> Algebra:
    return S12 if Fraction(delta) else S0


class Element(LinComb):
    """Finite linear combination of basis symbols of one algebra."""

    __slots__ = ()

    @property
    def algebra(self) -> Algebra:
        return self.space

    def parity(self):
        """0 or 1 for homogeneous elements, ``"mixed"`` otherwise."""
        ps = {s.parity for s in self.terms}
        if len(ps) > 1:
            return "mixed"
        return ps.pop() if ps else 0

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        from .text import format_element
        return format_element(self)


# -- structure constants ---------------------------------------------------

StructureConstants = Callable[[Algebra, Symbol, Symbol], dict]


def _q(x) -> ScalarK:
    return ScalarK(Fraction(x))


@lru_cache(maxsize=None)
def structure_constants(alg: Algebra, s: Symbol, t: Symbol) -> dict:
    """``[s, t]`` for basis symbols as a dict ``Symbol -> ScalarK``.

    The returned dict is shared through the cache; callers must not mutate it.
    """
    ks, kt = s.kind, t.kind
    if ks in CENTRAL or kt in CENTRAL:
        return {}
    if ks == "psi" and kt == "psi":
        return {Symbol("z"): ScalarK(1)} if s.twice + t.twice == 0 else {}
    if ks == "psi":
        # even-odd pair: [psi, x] = -[x, psi]
        return {k: -v for k, v in structure_constants(alg, t, s).items()}
    if ks == "L" and kt == "L":
        m, n = s.twice // 2, t.twice // 2
        out = {}
        if m != n:
            out[Symbol("L", 2 * (m + n))] = _q(m - n)
        if m + n == 0 and m * m * m - m:
            out[Symbol("c")] = _q(Fraction(m ** 3 - m, 12))
        return out
    if ks == "L" and kt == "psi":
        # [L_m, psi_n] = (-n - m/2) psi_{m+n}
        coef = Fraction(-(2 * t.twice + s.twice), 4)
        return {Symbol("psi", s.twice + t.twice): _q(coef)} if coef else {}
    if ks == "d" and kt == "d":
        m, n = s.twice // 2, t.twice // 2
        out = {}
        if m != n:
            out[Symbol("d", 2 * (m + n))] = _q(m - n)
        if m + n == 0 and m ** 3 - m:
            out[Symbol("c1")] = _q(Fraction(m ** 3 - m, 12))
        return out
    if ks == "d" and kt == "h":
        m, r = s.twice // 2, t.twice // 2
        out = {}
        if r:
            out[Symbol("h", 2 * (m + r))] = _q(-r)
        if m + r == 0 and m * m + m:
            out[Symbol("c2")] = _q(m * m + m)
        return out
    if ks == "h" and kt == "d":
        return {k: -v for k, v in structure_constants(alg, t, s).items()}
    if ks == "h" and kt == "h":
        r, u = s.twice // 2, t.twice // 2
        return {Symbol("c3"): _q(r)} if r + u == 0 and r else {}
    raise AlgebraError(f"no bracket between {s} and {t} in {alg.name}")


def super_sign(p: int, q: int) -> int:
    return -1 if (p & q) else 1


def _bracket_terms(alg, xt: dict, yt: dict, table: StructureConstants) -> dict:
    acc: dict = {}
    for s, a in xt.items():
        for t, b in yt.items():
            br = table(alg, s, t)
            if br:
                add_into(acc, br, a * b)
    return acc


def bracket(x: Element, y: Element, table: StructureConstants = structure_constants) -> Element:
    """Super bracket, extended bilinearly (also to non-homogeneous elements)."""
    if x.algebra != y.algebra:
        raise AlgebraError(f"cannot bracket elements of {x.algebra.name} and {y.algebra.name}")
    return Element._from_clean(x.algebra, _bracket_terms(x.algebra, x.terms, y.terms, table))


def jacobi_check(alg: Algebra, index_bound: int,
                 table: StructureConstants = structure_constants) -> VerificationReport:
    """Evaluate the graded Jacobi identity on every ordered basis triple.

    Triples are visited in lexicographic order of :meth:`Algebra.symbols`,
    so the reported witness is the first failing triple in that order.
    """
    if index_bound < 1:
        raise ValueError("index_bound must be >= 1")
    watch = Stopwatch()
    report = VerificationReport("jacobi", {"algebra": alg.name, "range": index_bound})
    syms = alg.symbols(index_bound)
    one = ScalarK(1)

    def br(u: dict, v: dict) -> dict:
        return _bracket_terms(alg, u, v, table)

    count = 0
    for x, y, z in product(syms, repeat=3):
        count += 1
        X, Y, Z = {x: one}, {y: one}, {z: one}
        px, py, pz = x.parity, y.parity, z.parity
        acc: dict = {}
        add_into(acc, br(X, br(Y, Z)), ScalarK(super_sign(px, pz)))
        add_into(acc, br(Y, br(Z, X)), ScalarK(super_sign(py, px)))
        add_into(acc, br(Z, br(X, Y)), ScalarK(super_sign(pz, py)))
        if acc:
            report.fail(x=x, y=y, z=z, residual=Element._from_clean(alg, acc))
            break
    report.triples_checked = count
    report.duration_ms = watch.ms()
    return report


def sigma_twist(mu, x: Element) -> Element:
    """Apply the automorphism psi -> mu psi, z -> mu^2 z (L and c fixed)."""
    mu = ScalarK.coerce(mu)
    if not mu:
        raise ScalarError("sigma_0 is not an automorphism (mu must be nonzero)")
    if x.algebra.tag not in ("f", "s"):
        raise AlgebraError(f"sigma twist is defined on F(delta) and S(delta), not {x.algebra.name}")
    mu2 = mu * mu
    out = {}
    for s, c in x.terms.items():
        if s.kind == "psi":
            out[s] = c * mu
        elif s.kind == "z":
            out[s] = c * mu2
        else:
            out[s] = c
    return Element._from_clean(x.algebra, out)
