"""Fermionic Fock modules V(delta), V_[m], V_I and their sigma twists.

Basis vectors are exterior monomials ``xi_{i1} ... xi_{ik}`` with strictly
increasing indices; a monomial is keyed by the sorted tuple of its doubled
indices.  For ``V_I`` the key is the symmetric difference ``J ^ I`` instead,
so a cofinite ``I`` never has to be materialised.

Signs follow the usual left-derivative / left-multiplication convention:
``psi_k`` removes ``k`` and ``psi_{-k}`` inserts it, each with sign
``(-1)**#{i in J : i < k}``.  Index 0 (delta = 0 only) is the smallest
index, so ``psi_0 = (xi_0 + d/dxi_0) / sqrt2`` never picks up a sign.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .lincomb import LinComb, add_into
from .scalar import ONE, SQRT2, ScalarError, ScalarK
from .superalg import format_index, to_twice

HALF_SQRT2 = SQRT2 * ScalarK(Fraction(1, 2))


class FockError(ValueError):
    pass


@dataclass(frozen=True)
class IndexSet:
    """A finite or cofinite subset of Z_+ (doubled representation).

    ``items`` lists the members of a finite set, or the excluded elements of
    a cofinite one.
    """
    items: tuple[int, ...] = ()
    cofinite: bool = False

    @classmethod
    def finite(cls, indices) -> "IndexSet":
        return cls(cls._clean(indices), False)

    @classmethod
    def cofinite_set(cls, excluded) -> "IndexSet":
        return cls(cls._clean(excluded), True)

    @staticmethod
    def _clean(indices) -> tuple[int, ...]:
        tw = sorted({to_twice(i) for i in indices})
        if any(t < 0 or t % 2 for t in tw):
            raise FockError("reference sets for V_I must lie in Z_+")
        return tuple(tw)

    @property
    def is_finite(self) -> bool:
        return not self.cofinite

    def __contains__(self, twice: int) -> bool:
        if twice < 0 or twice % 2:
            return False
        return (twice in self.items) != self.cofinite

    def count_below(self, twice: int) -> int:
        """Number of members strictly smaller than ``twice / 2``."""
        k = bisect_left(self.items, twice)
        if not self.cofinite:
            return k
        return max(0, (twice + 1) // 2) - k

    def to_json(self) -> dict:
        key = "cofinite" if self.cofinite else "finite"
        return {key: [t // 2 for t in self.items]}

    @classmethod
    def from_json(cls, obj) -> "IndexSet":
        if "finite" in obj:
            return cls.finite(obj["finite"])
        if "cofinite" in obj:
            return cls.cofinite_set(obj["cofinite"])
        raise FockError(f"bad index set descriptor {obj!r}")


# -- untwisted psi action on V(delta) monomials ------------------------------

def _toggle(key: tuple, n: int) -> tuple:
    if n in key:
        return tuple(t for t in key if t != n)
    return tuple(sorted(key + (n,)))


def _count_below(key: tuple, n: int) -> int:
    return bisect_left(key, n)


def v_psi_basis(r2: int, key: tuple):
    """``psi_r . xi_J`` on V(delta) as ``(coefficient, key)`` or ``None``."""
    if r2 == 0:
        return HALF_SQRT2, _toggle(key, 0)
    n = abs(r2)
    present = n in key
    if (r2 > 0) != present:
        return None
    sign = -ONE if _count_below(key, n) & 1 else ONE
    return sign, _toggle(key, n)


@lru_cache(maxsize=None)
def _lbar_basis(delta2: int, k: int, key: tuple, pad: int) -> dict:
    """``Lbar_k . xi_J`` on V(delta), untwisted; result shared, do not mutate.

    In ``:psi_a psi_b:`` (a = -j, b = j + k) the operator applied first has
    index ``max(a, b)``.  If that index exceeds ``M = max(J | {0})`` it is a
    positive index outside J and annihilates ``xi_J``.  Survivors therefore
    satisfy ``-j <= M`` and ``j + k <= M``, so ``|j| <= M + |k|``; ``pad``
    adds slack beyond that bound.
    """
    out: dict = {}
    if k == 0:
        const = Fraction(1 - delta2, 16)
        if const:
            out[key] = ScalarK(const)
    k2 = 2 * k
    top = (key[-1] if key else 0) + abs(k2) + 2 * pad
    for j2 in range(-top, top + 1):
        if j2 % 2 != delta2 or j2 == 0:
            continue
        a2, b2 = -j2, j2 + k2
        coef = Fraction(j2, 4)
        if b2 >= a2:
            first, second = b2, a2
        else:
            first, second, coef = a2, b2, -coef
        r1 = v_psi_basis(first, key)
        if r1 is None:
            continue
        r2 = v_psi_basis(second, r1[1])
        if r2 is None:
            continue
        add_into(out, {r2[1]: r1[0] * r2[0]}, ScalarK(coef))
    return out


@dataclass(frozen=True)
class FockSpace:
    """Descriptor of a Fock module: ``V`` (delta), ``V_m`` or ``V_I``."""
    kind: str = "V"
    delta2: int = 0
    twist: ScalarK | None = None
    m: int | None = None
    I: IndexSet | None = None

    def __post_init__(self):
        if self.kind not in ("V", "V_m", "V_I"):
            raise FockError(f"unknown Fock module kind {self.kind!r}")
        if self.delta2 not in (0, 1):
            raise FockError("delta must be 0 or 1/2")
        if self.kind == "V_m" and (self.m is None or self.m < 0 or self.delta2):
            raise FockError("V_m needs delta = 0 and m >= 0")
        if self.kind == "V_I" and (self.I is None or self.delta2):
            raise FockError("V_I needs delta = 0 and a reference set I")
        if self.twist is not None:
            object.__setattr__(self, "twist", ScalarK.coerce(self.twist))
            if not self.twist:
                raise ScalarError("twist parameter mu must be nonzero")

    # -- constructors ----------------------------------------------------

    @classmethod
    def V(cls, delta=0, twist=None) -> "FockSpace":
        return cls("V", to_twice(delta), twist)

    @classmethod
    def V_m(cls, m: int, twist=None) -> "FockSpace":
        return cls("V_m", 0, twist, m=m)

    @classmethod
    def V_I(cls, I: IndexSet, twist=None) -> "FockSpace":
        return cls("V_I", 0, twist, I=I)

    @classmethod
    def from_json(cls, obj: dict) -> "FockSpace":
        twist = obj.get("twist")
        twist = ScalarK.coerce(str(twist)) if twist is not None else None
        kind = obj.get("kind")
        if kind == "V":
            return cls.V(Fraction(str(obj.get("delta", "0"))), twist)
        if kind == "V_m":
            return cls.V_m(int(obj["m"]), twist)
        if kind == "V_I":
            return cls.V_I(IndexSet.from_json(obj["I"]), twist)
        raise FockError(f"unknown Fock module kind {kind!r}")

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "V":
            out["delta"] = "1/2" if self.delta2 else "0"
        elif self.kind == "V_m":
            out["m"] = self.m
        else:
            out["I"] = self.I.to_json()
        if self.twist is not None:
            out["twist"] = str(self.twist)
        return out

    @property
    def delta(self) -> Fraction:
        return Fraction(self.delta2, 2)

    @property
    def level(self) -> ScalarK:
        """Scalar by which z acts."""
        return ONE if self.twist is None else self.twist * self.twist

    # -- vectors -----------------------------------------------------------

    def vector(self, terms: dict) -> "FockVector":
        return FockVector(self, terms)

    def xi(self, *indices) -> "FockVector":
        """Basis vector; for ``V_I`` the indices give ``J ^ I``."""
        key = tuple(sorted(to_twice(i) for i in indices))
        self._check_key(key)
        return FockVector._from_clean(self, {key: ONE})

    def vacuum(self) -> "FockVector":
        return FockVector._from_clean(self, {(): ONE})

    def zero(self) -> "FockVector":
        return FockVector._from_clean(self, {})

    def _check_key(self, key: tuple):
        if len(set(key)) != len(key) or any(t < 0 or t % 2 != self.delta2 for t in key):
            raise FockError(f"bad monomial indices {key}")
        if self.kind == "V_m" and key and key[-1] > 2 * self.m:
            raise FockError(f"index above {self.m} in V_[{self.m}]")

    def grid(self, bound) -> list[int]:
        """Doubled non-negative indices on the delta grid, up to ``bound``."""
        b2 = to_twice(bound)
        return [t for t in range(0, b2 + 1) if t % 2 == self.delta2]

    def basis_up_to(self, bound) -> list[tuple]:
        """All monomial keys with every index ``<= bound`` (sorted by size)."""
        if self.kind == "V_m":
            bound = min(Fraction(bound), self.m)
        idx = self.grid(bound)
        return [c for n in range(len(idx) + 1) for c in combinations(idx, n)]

    def parity(self, key: tuple) -> int:
        return len(key) & 1

    # -- membership helpers (J from stored key) ----------------------------------

    def _in_J(self, key: tuple, n: int) -> bool:
        if self.kind == "V_I":
            return (n in self.I) != (n in key)
        return n in key

    def _below_J(self, key: tuple, n: int) -> int:
        if self.kind != "V_I":
            return _count_below(key, n)
        cnt = self.I.count_below(n)
        for t in key:
            if t >= n:
                break
            cnt += -1 if t in self.I else 1
        return cnt

    # -- actions -------------------------------------------------------------

    def psi_basis(self, r2: int, key: tuple):
        """Untwisted ``psi_r . xi`` on one basis key: ``(coef, key)`` or None."""
        if r2 % 2 != self.delta2:
            raise FockError(f"psi_{format_index(r2)} does not act on a delta={self.delta} module")
        if self.kind == "V_m" and abs(r2) > 2 * self.m:
            raise FockError(f"psi_{format_index(r2)} is not in F_[{self.m}]")
        if self.kind != "V_I":
            return v_psi_basis(r2, key)
        if r2 == 0:
            return HALF_SQRT2, _toggle(key, 0)
        n = abs(r2)
        if (r2 > 0) != self._in_J(key, n):
            return None
        sign = -ONE if self._below_J(key, n) & 1 else ONE
        return sign, _toggle(key, n)

    def psi(self, r, v: "FockVector") -> "FockVector":
        r2 = to_twice(r)
        scale = self.twist
        out: dict = {}
        for key, c in v.terms.items():
            res = self.psi_basis(r2, key)
            if res is not None:
                add_into(out, {res[1]: res[0] * c}, scale)
        return FockVector._from_clean(self, out)

    def z(self, v: "FockVector") -> "FockVector":
        return v * self.level

    def lbar(self, k: int, v: "FockVector", pad: int = 1) -> "FockVector":
        """Normal-ordered ``Lbar_k`` (insensitive to the twist)."""
        if self.kind != "V":
            raise FockError(f"Lbar acts on V(delta) only, not on {self.kind}")
        if pad < 1:
            raise ValueError("window padding must be >= 1")
        out: dict = {}
        for key, c in v.terms.items():
            add_into(out, _lbar_basis(self.delta2, int(k), key, pad), c)
        return FockVector._from_clean(self, out)

    def weight(self, key: tuple, base=0) -> ScalarK:
        """L_0 eigenvalue of a basis vector, counted from ``base``."""
        if self.kind == "V_I":
            added = sum(t for t in key if t not in self.I)
            removed = sum(t for t in key if t in self.I)
            return ScalarK.coerce(base) + ScalarK(Fraction(added - removed, 2))
        return ScalarK.coerce(base) + ScalarK(Fraction(sum(key), 2))

    def __str__(self):
        return _describe(self)


def _describe(space: FockSpace) -> str:
    if space.kind == "V":
        body = f"V({space.delta})"
    elif space.kind == "V_m":
        body = f"V_[{space.m}]"
    else:
        tag = "cofinite" if space.I.cofinite else "finite"
        body = f"V_I({tag}:{[t // 2 for t in space.I.items]})"
    return body if space.twist is None else f"{body}^({space.twist})"


class FockVector(LinComb):
    __slots__ = ()

    def parity(self):
        ps = {len(k) & 1 for k in self.terms}
        if len(ps) > 1:
            return "mixed"
        return ps.pop() if ps else 0

    def __str__(self):
        from .text import format_index_list, format_terms
        name = "xid" if self.space.kind == "V_I" else "xi"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return format_terms((c, f"{name}({format_index_list(k)})") for k, c in items)


# -- module-level operations ---------------------------------------------------

def psi_act(r, v: FockVector) -> FockVector:
    return v.space.psi(r, v)


def z_act(v: FockVector) -> FockVector:
    return v.space.z(v)


def lbar_act(k: int, v: FockVector, pad: int = 1) -> FockVector:
    return v.space.lbar(k, v, pad)


def weight_of(space: FockSpace, key: tuple, base=0) -> ScalarK:
    return space.weight(key, base)


def vacuum_energy(delta) -> Fraction:
    """The constant ``(1 - 2 delta) / 16`` of Lbar_0."""
    return Fraction(1 - to_twice(delta), 16)


def _count_subsets(grid2: list[int], n2_max: int) -> dict[int, int]:
    counts: dict[int, int] = {}

    def walk(i: int, total: int):
        counts[total] = counts.get(total, 0) + 1
        for j in range(i, len(grid2)):
            t = total + grid2[j]
            if t > n2_max:
                break
            walk(j + 1, t)

    walk(0, 0)
    return counts


def _generating_function(delta2: int, n2_max: int) -> list[int]:
    """Coefficients of prod (1 + t^j) over positive grid j, t = q^(1/2)."""
    coeffs = [0] * (n2_max + 1)
    coeffs[0] = 1
    for j2 in range(1, n2_max + 1):
        if j2 % 2 != delta2 or (delta2 == 0 and j2 % 2):
            continue
        for e in range(n2_max, j2 - 1, -1):
            coeffs[e] += coeffs[e - j2]
    if delta2 == 0:
        coeffs = [2 * c for c in coeffs]   # xi_0 doubles every weight space
    return coeffs


def character(delta, n_max) -> list[tuple[Fraction, int]]:
    """``(eigenvalue, dimension)`` of the L_0 weight spaces of V(delta).

    Dimensions come from explicit enumeration of monomials and are checked
    against the product formula; a mismatch raises ``AssertionError``.
    """
    delta2 = to_twice(delta)
    n2_max = to_twice(n_max)
    if n2_max < 0:
        raise ValueError("n_max must be >= 0")
    grid2 = [t for t in range(0, n2_max + 1) if t % 2 == delta2]
    counts = _count_subsets(grid2, n2_max)
    gf = _generating_function(delta2, n2_max)
    base = vacuum_energy(Fraction(delta2, 2))
    step = 1 if delta2 else 2          # weight grid: Z for delta=0, Z/2 for delta=1/2
    table = []
    for n2 in range(0, n2_max + 1, step):
        dim = counts.get(n2, 0)
        if dim != gf[n2]:
            raise AssertionError(f"enumeration {dim} != generating function {gf[n2]} at n={n2 / 2}")
        table.append((base + Fraction(n2, 2), dim))
    return table


class NotEigen(Exception):
    """Raised when a vector is not a simultaneous eigenvector."""


def f_weight_vector(v: FockVector, k_max) -> dict[Fraction, ScalarK]:
    """Eigenvalues of ``psi_{-k} psi_k`` for positive grid ``k <= k_max``.

    Raises :class:`NotEigen` when ``v`` is not a common eigenvector.
    """
    if v.is_zero():
        raise FockError("the zero vector has no F-weight")
    space = v.space
    key0, c0 = next(iter(v.terms.items()))
    out = {}
    for k2 in range(1, to_twice(k_max) + 1):
        if k2 % 2 != space.delta2:
            continue
        w = space.psi(Fraction(-k2, 2), space.psi(Fraction(k2, 2), v))
        lam = w.coefficient(key0) / c0
        if w != v * lam:
            raise NotEigen(f"not an eigenvector of psi_-{format_index(k2)} psi_{format_index(k2)}")
        out[Fraction(k2, 2)] = lam
    return out


def is_smooth(space: FockSpace) -> bool:
    """Every vector is killed by psi_k for all large k iff I is finite."""
    if space.kind == "V_I":
        return space.I.is_finite
    return True
