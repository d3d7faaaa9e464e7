"""Virasoro-side modules: Omega(lambda, a), truncated Verma modules and the
tensor modules ``V(delta)^s (x) M`` over S(delta).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .fock import FockSpace, _lbar_basis, v_psi_basis
from .lincomb import LinComb, add_into
from .scalar import ONE, ZERO, ScalarError, ScalarK, sqrt_in_field
from .superalg import Algebra, AlgebraError, Element, Symbol, fermion_virasoro


class Poly:
    """Univariate polynomial over K, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [ScalarK.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def linear(cls, root) -> "Poly":
        """``x - root``."""
        return cls((-ScalarK.coerce(root), 1))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> ScalarK:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = ScalarK.coerce(other)
            return Poly([c * s for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, t) -> ScalarK:
        acc = ZERO
        t = ScalarK.coerce(t)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def shift(self, m) -> "Poly":
        """``f(x + m)``."""
        m = ScalarK.coerce(m)
        acc = Poly()
        lin = Poly((m, 1))
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly((c,))
        return acc

    def roots(self) -> list[ScalarK] | None:
        """All roots with multiplicity for degree <= 2; ``None`` if not in K."""
        d = self.degree
        if d < 1:
            return []
        if d == 1:
            return [-self.coeffs[0] / self.coeffs[1]]
        if d == 2:
            c, b, a = self.coeffs
            disc = b * b - 4 * a * c
            r = sqrt_in_field(disc)
            if r is None:
                return None
            two_a = a * 2
            return sorted([(-b - r) / two_a, (-b + r) / two_a], key=_root_key)
        raise ValueError("exact roots are only implemented up to degree 2")

    def __str__(self):
        return self.format("x")

    def __repr__(self):
        return f"Poly({self.format('x')})"

    def format(self, var: str) -> str:
        from .text import format_terms
        items = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                items.append((c, None if i == 0 else (var if i == 1 else f"{var}^{i}")))
        return format_terms(items)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, arr) -> "Poly":
        return cls([ScalarK.coerce(str(c)) for c in arr])


def _root_key(r: ScalarK):
    return (float(r), r.a, r.b)


def omega_act(m: int, f: Poly, lam, a) -> Poly:
    """``L_m . f(x) = lambda^m (x + m a) f(x + m)`` on Omega(lambda, a)."""
    lam = ScalarK.coerce(lam)
    if not lam:
        raise ScalarError("Omega(lambda, a) needs lambda != 0")
    a = ScalarK.coerce(a)
    return Poly((a * m, 1)) * f.shift(m) * (lam ** int(m))


# -- truncated Verma modules ------------------------------------------------------

@lru_cache(maxsize=None)
def _verma_basis(cc: ScalarK, h: ScalarK, m: int, part: tuple) -> dict:
    """``L_m . L_{-part[0]} ... L_{-part[-1]} v`` straightened into PBW form.

    ``L_m`` is commuted leftward-first past the largest generator, using
    ``L_m L_{-n} = L_{-n} L_m + (m + n) L_{m-n} + delta_{m,n} (m^3 - m)/12 c``.
    Result shared through the cache; do not mutate.
    """
    if not part:
        if m > 0:
            return {}
        if m == 0:
            return {(): h} if h else {}
        return {(-m,): ONE}
    n1, rest = part[0], part[1:]
    if m < 0 and -m >= n1:
        return {(-m,) + part: ONE}
    out: dict = {}
    for p, c in _verma_basis(cc, h, m, rest).items():
        add_into(out, _verma_basis(cc, h, -n1, p), c)
    if m + n1:
        add_into(out, _verma_basis(cc, h, m - n1, rest), ScalarK(m + n1))
    if m == n1 and m ** 3 - m:
        add_into(out, {rest: cc * ScalarK(Fraction(m ** 3 - m, 12))})
    return out


def partitions_up_to(depth: int) -> list[tuple[int, ...]]:
    """Partitions (descending parts) of every weight ``0..depth``."""
    out = []

    def gen(remaining, largest, prefix):
        out.append(tuple(prefix))
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            gen(remaining - part, part, prefix)
            prefix.pop()

    gen(depth, depth, [])
    return sorted(out, key=lambda p: (sum(p), [-x for x in p]))


@dataclass(frozen=True)
class VermaModule:
    """Verma module M(c, h) over Vir truncated above weight ``depth``."""
    central_charge: ScalarK
    h: ScalarK
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "central_charge", ScalarK.coerce(self.central_charge))
        object.__setattr__(self, "h", ScalarK.coerce(self.h))
        if self.depth < 1:
            raise ValueError("depth must be positive")

    def highest(self) -> "VermaVector":
        return VermaVector._from_clean(self, {(): ONE})

    def pbw(self, *parts: int) -> "VermaVector":
        key = tuple(sorted(parts, reverse=True))
        if any(p <= 0 for p in key) or sum(key) > self.depth:
            raise ValueError(f"bad PBW monomial {parts}")
        return VermaVector._from_clean(self, {key: ONE})

    def act_basis(self, m: int, part: tuple):
        """``(terms, truncated)`` for ``L_m`` on one PBW monomial."""
        if sum(part) - m > self.depth:
            return {}, True
        return _verma_basis(self.central_charge, self.h, m, part), False

    def L(self, m: int, v: "VermaVector") -> "VermaVector":
        out: dict = {}
        truncated = v.truncated
        for part, c in v.terms.items():
            terms, cut = self.act_basis(int(m), part)
            truncated |= cut
            add_into(out, terms, c)
        res = VermaVector._from_clean(self, out)
        res.truncated = truncated
        return res

    def act(self, x: Element, v: "VermaVector") -> "VermaVector":
        out: dict = {}
        truncated = v.truncated
        for sym, c in x.terms.items():
            if sym.kind == "L":
                part = self.L(sym.twice // 2, v)
                truncated |= part.truncated
                add_into(out, part.terms, c)
            elif sym.kind == "c":
                add_into(out, v.terms, self.central_charge * c)
            else:
                raise AlgebraError(f"{sym} is not a Virasoro symbol")
        res = VermaVector._from_clean(self, out)
        res.truncated = truncated
        return res


class VermaVector(LinComb):
    __slots__ = ("truncated",)

    @classmethod
    def _from_clean(cls, space, terms):
        obj = super()._from_clean(space, terms)
        obj.truncated = False
        return obj

    def __str__(self):
        from .text import format_terms
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), [-p for p in kv[0]]))
        return format_terms((c, _pbw_label(p)) for p, c in items)


def _pbw_label(part: tuple) -> str:
    return "v" if not part else "".join(f"L_-{p}" for p in part) + "v"


def verma_act(x: Element, v: VermaVector) -> VermaVector:
    return v.space.act(x, v)


# -- tensor modules ------------------------------------------------------------------

@dataclass(frozen=True)
class TensorModule:
    """``V(delta)^s (x) M(c, h)`` with F(delta) acting as zero on the Verma factor.

    psi_r acts as ``s psi_r (x) id``, L_m as ``Lbar_m (x) id + id (x) L_m``,
    z as ``s^2`` and c as ``1/2 + c``.
    """
    sqrt_lambda: ScalarK
    delta2: int
    verma: VermaModule
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "sqrt_lambda", ScalarK.coerce(self.sqrt_lambda))
        if not self.sqrt_lambda:
            raise ScalarError("sqrt(lambda) must be nonzero")

    @classmethod
    def build(cls, sqrt_lambda, delta, central_charge, h, depth) -> "TensorModule":
        return cls(ScalarK.coerce(sqrt_lambda), int(Fraction(delta) * 2),
                   VermaModule(central_charge, h, depth))

    @property
    def algebra(self) -> Algebra:
        return fermion_virasoro(Fraction(self.delta2, 2))

    @property
    def fock(self) -> FockSpace:
        return FockSpace("V", self.delta2, self.sqrt_lambda)

    @property
    def level(self) -> ScalarK:
        return self.sqrt_lambda * self.sqrt_lambda

    @property
    def total_central_charge(self) -> ScalarK:
        return ScalarK(Fraction(1, 2)) + self.verma.central_charge

    def key_parity(self, key) -> int:
        return len(key[0]) & 1

    def describe(self) -> dict:
        return {"kind": "tensor", "sqrt_lambda": str(self.sqrt_lambda),
                "delta": "1/2" if self.delta2 else "0",
                "c": str(self.verma.central_charge), "h": str(self.verma.h),
                "depth": self.verma.depth}

    @classmethod
    def from_json(cls, obj: dict) -> "TensorModule":
        return cls.build(ScalarK.coerce(str(obj.get("sqrt_lambda", "1"))),
                         Fraction(str(obj.get("delta", "0"))),
                         ScalarK.coerce(str(obj.get("c", "0"))),
                         ScalarK.coerce(str(obj.get("h", "0"))),
                         int(obj.get("depth", 6)))

    def vector(self, terms: dict) -> "TensorVector":
        return TensorVector(self, terms)

    def basis_vector(self, fock_indices=(), parts=()) -> "TensorVector":
        fk = tuple(sorted(int(Fraction(i) * 2) for i in fock_indices))
        part = tuple(sorted(parts, reverse=True))
        return TensorVector._from_clean(self, {(fk, part): ONE})

    def act_basis(self, sym: Symbol, key) -> dict:
        """Action on one basis key; cached per module, result must not be mutated."""
        try:
            return self._cache[sym, key]
        except KeyError:
            res = self._cache[sym, key] = _tensor_basis(self, sym, key)
            return res

    def act(self, x: Element, w: "TensorVector") -> "TensorVector":
        out: dict = {}
        for sym, a in x.terms.items():
            self.algebra.check_symbol(sym)
            for key, b in w.terms.items():
                add_into(out, self.act_basis(sym, key), a * b)
        return TensorVector._from_clean(self, out)

    def test_keys(self, degree_bound: int, shift: int) -> list:
        """Fock monomials with indices ``<= degree_bound`` tensored with PBW
        monomials of weight ``<= depth - shift`` (no truncation reachable)."""
        room = self.verma.depth - shift
        if room < 0:
            return []
        fock_keys = self.fock.basis_up_to(degree_bound)
        parts = partitions_up_to(room)
        return [(fk, p) for fk in fock_keys for p in parts]


def _tensor_basis(mod: TensorModule, sym: Symbol, key) -> dict:
    fk, part = key
    kind = sym.kind
    if kind == "psi":
        res = v_psi_basis(sym.twice, fk)
        if res is None:
            return {}
        return {(res[1], part): res[0] * mod.sqrt_lambda}
    if kind == "z":
        return {key: mod.level}
    if kind == "c":
        return {key: mod.total_central_charge}
    if kind == "L":
        m = sym.twice // 2
        out: dict = {}
        for k2, c in _lbar_basis(mod.delta2, m, fk, 1).items():
            add_into(out, {(k2, part): c})
        terms, cut = mod.verma.act_basis(m, part)
        if cut:
            raise ValueError(f"L_{m} on {_pbw_label(part)} leaves the truncation depth")
        for p2, c in terms.items():
            add_into(out, {(fk, p2): c})
        return out
    raise AlgebraError(f"{sym} does not act on a tensor module")


class TensorVector(LinComb):
    __slots__ = ()

    def __str__(self):
        from .text import format_index_list, format_terms
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], sum(kv[0][1]), kv[0][1]))
        return format_terms(
            (c, f"xi({format_index_list(fk)})|{_pbw_label(p)}") for (fk, p), c in items)


def tensor_act(x: Element, w: TensorVector) -> TensorVector:
    return w.space.act(x, w)
