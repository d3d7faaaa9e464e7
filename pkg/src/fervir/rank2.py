"""Free C[L_0]-modules of rank 2 over S(delta) and their classifier.

Each family lives on ``C[x_0] (+) C[x_1]`` (even part, odd part) with

* ``L_m . f(x_0) = lambda^m (x_0 + m a) f(x_0 + m)``,
* ``L_m . g(x_1) = lambda^m (x_1 + m a') g(x_1 + m)``,
* ``psi_r . f(x_0) = F_r(x_1) f(x_1 + r)`` and ``psi_r . g(x_1) = 0``,
* ``c`` and ``z`` acting as zero,

where ``lambda^r = sqrt_lambda^(2r)`` and

==========================  ========  ==========  =====================================
family                      a         a'          F_r(t)
==========================  ========  ==========  =====================================
Omega(lambda, a, b)         a         a - 1/2     b lambda^r
OmegaPrime(lambda, a, b)    a         a - 3/2     b lambda^r (t - 2ra + 3r)
OmegaDoublePrime(lambda, b) 1         -3/2        b lambda^r (t + 3r)(t + r)
OmegaDoublePrimeTilde       5/2       0           b lambda^r t (t - 2r)
==========================  ========  ==========  =====================================

Basis keys are ``(parity, k)`` standing for ``x_parity^k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .lincomb import LinComb, add_into
from .scalar import ONE, ZERO, ScalarError, ScalarK, half_power, sqrt_in_field
from .superalg import Algebra, AlgebraError, Element, Symbol, fermion_virasoro, format_index, to_twice
from .virmod import Poly, _root_key
from .verify import verify_module_axioms

FAMILIES = ("Omega", "OmegaPrime", "OmegaDoublePrime", "OmegaDoublePrimeTilde")
_DEGREE = {"Omega": 0, "OmegaPrime": 1, "OmegaDoublePrime": 2, "OmegaDoublePrimeTilde": 2}
_FIXED_A = {"OmegaDoublePrime": ScalarK(1), "OmegaDoublePrimeTilde": ScalarK(Fraction(5, 2))}
_VARS = {"Omega": "x", "OmegaPrime": "y", "OmegaDoublePrime": "z", "OmegaDoublePrimeTilde": "zt"}


class Rank2Error(ValueError):
    pass


@dataclass(frozen=True)
class Rank2Family:
    tag: str
    delta2: int
    sqrt_lambda: ScalarK
    b: ScalarK
    a: ScalarK | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.tag not in FAMILIES:
            raise Rank2Error(f"unknown rank-2 family {self.tag!r}; expected one of {FAMILIES}")
        if self.delta2 not in (0, 1):
            raise Rank2Error("delta must be 0 or 1/2")
        object.__setattr__(self, "sqrt_lambda", ScalarK.coerce(self.sqrt_lambda))
        object.__setattr__(self, "b", ScalarK.coerce(self.b))
        if not self.sqrt_lambda:
            raise ScalarError("sqrt(lambda) must be nonzero")
        if self.tag in _FIXED_A:
            if self.a is not None and ScalarK.coerce(self.a) != _FIXED_A[self.tag]:
                raise Rank2Error(f"{self.tag} has no free parameter a")
            object.__setattr__(self, "a", None)
        else:
            if self.a is None:
                raise Rank2Error(f"{self.tag} needs a parameter a")
            object.__setattr__(self, "a", ScalarK.coerce(self.a))

    @classmethod
    def build(cls, tag: str, delta, sqrt_lambda, b, a=None) -> "Rank2Family":
        return cls(tag, to_twice(delta), ScalarK.coerce(sqrt_lambda), ScalarK.coerce(b),
                   None if a is None else ScalarK.coerce(a))

    # -- parameters ---------------------------------------------------------------

    @property
    def algebra(self) -> Algebra:
        return fermion_virasoro(Fraction(self.delta2, 2))

    @property
    def delta(self) -> Fraction:
        return Fraction(self.delta2, 2)

    @property
    def lam(self) -> ScalarK:
        return self.sqrt_lambda * self.sqrt_lambda

    @property
    def degree(self) -> int:
        """Degree of every F_r."""
        return _DEGREE[self.tag]

    @property
    def even_a(self) -> ScalarK:
        return _FIXED_A.get(self.tag, self.a)

    @property
    def odd_a(self) -> ScalarK:
        return self.even_a - ScalarK(Fraction(2 * self.degree + 1, 2))

    def lam_power(self, r2: int) -> ScalarK:
        """``lambda^r`` for ``r = r2 / 2``."""
        return half_power(self.sqrt_lambda, Fraction(r2, 2))

    def psi_factor(self, r2: int) -> Poly:
        """``F_r`` with ``psi_r . f(x_0) = F_r(x_1) f(x_1 + r)``."""
        r = ScalarK(Fraction(r2, 2))
        t = Poly.x()
        if self.tag == "Omega":
            core = Poly.const(1)
        elif self.tag == "OmegaPrime":
            core = t - Poly.const(r * self.a * 2 - r * 3)
        elif self.tag == "OmegaDoublePrime":
            core = (t + Poly.const(r * 3)) * (t + Poly.const(r))
        else:
            core = t * (t - Poly.const(r * 2))
        return core * (self.b * self.lam_power(r2))

    def psi_shift(self, r2: int) -> ScalarK:
        return ScalarK(Fraction(r2, 2))

    # -- handle protocol ------------------------------------------------------------

    def describe(self) -> dict:
        return self.to_json()

    def key_parity(self, key) -> int:
        return key[0]

    def test_keys(self, degree_bound: int, shift: int = 0) -> list:
        return [(p, k) for p in (0, 1) for k in range(degree_bound + 1)]

    def vector(self, terms: dict) -> "PolyPair":
        return PolyPair(self, terms)

    def act_basis(self, sym: Symbol, key) -> dict:
        """Action on ``x_p^k``; cached, the result must not be mutated."""
        try:
            return self._cache[sym, key]
        except KeyError:
            pass
        parity, k = key
        kind = sym.kind
        if kind == "L":
            m = sym.twice // 2
            a = self.even_a if parity == 0 else self.odd_a
            poly = _times_shifted_power(Poly((a * m, ONE)), ScalarK(m), k)
            out = {(parity, i): c * self.lam_power(2 * m) for i, c in enumerate(poly.coeffs) if c}
        elif kind == "psi":
            if parity:
                out = {}
            else:
                poly = _times_shifted_power(self.psi_factor(sym.twice), self.psi_shift(sym.twice), k)
                out = {(1, i): c for i, c in enumerate(poly.coeffs) if c}
        elif kind in ("c", "z"):
            out = {}
        else:
            raise AlgebraError(f"{sym} does not act on a rank-2 module")
        self._cache[sym, key] = out
        return out

    # -- vectors ----------------------------------------------------------------------

    def pair(self, even=None, odd=None) -> "PolyPair":
        return PolyPair.from_polys(self, even or Poly(), odd or Poly())

    def act(self, x: Element, v: "PolyPair") -> "PolyPair":
        if x.algebra != self.algebra:
            raise AlgebraError(
                f"element of {x.algebra.name} cannot act on a delta={self.delta} family")
        out: dict = {}
        for sym, a in x.terms.items():
            self.algebra.check_symbol(sym)
            for key, c in v.terms.items():
                add_into(out, self.act_basis(sym, key), a * c)
        return PolyPair._from_clean(self, out)

    # -- serialisation ----------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"kind": "rank2", "family": self.tag, "delta": "1/2" if self.delta2 else "0",
               "sqrt_lambda": str(self.sqrt_lambda)}
        if self.a is not None:
            out["a"] = str(self.a)
        out["b"] = str(self.b)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Rank2Family":
        try:
            a = obj.get("a")
            return cls.build(obj["family"], Fraction(str(obj.get("delta", "0"))),
                             ScalarK.coerce(str(obj["sqrt_lambda"])),
                             ScalarK.coerce(str(obj["b"])),
                             None if a is None else ScalarK.coerce(str(a)))
        except KeyError as exc:
            raise Rank2Error(f"rank-2 descriptor is missing field {exc.args[0]!r}") from None

    def __str__(self):
        params = [f"sqrt_lambda={self.sqrt_lambda}"]
        if self.a is not None:
            params.append(f"a={self.a}")
        params.append(f"b={self.b}")
        return f"{self.tag}[delta={self.delta}]({', '.join(params)})"


def _times_shifted_power(p: Poly, shift: ScalarK, k: int) -> Poly:
    """``p(x) * (x + shift)^k``."""
    powers = [ONE]
    for _ in range(k):
        powers.append(powers[-1] * shift)
    binom = Poly([powers[k - i] * comb(k, i) for i in range(k + 1)])
    return p * binom


class PolyPair(LinComb):
    """``f(x_0) (+) g(x_1)``; keys ``(parity, degree)``."""

    __slots__ = ()

    @classmethod
    def from_polys(cls, family, even: Poly, odd: Poly) -> "PolyPair":
        terms = {(0, i): c for i, c in enumerate(even.coeffs) if c}
        terms.update({(1, i): c for i, c in enumerate(odd.coeffs) if c})
        return cls._from_clean(family, terms)

    def _part(self, parity: int) -> Poly:
        top = max((k for p, k in self.terms if p == parity), default=-1)
        return Poly([self.terms.get((parity, i), ZERO) for i in range(top + 1)])

    @property
    def even(self) -> Poly:
        return self._part(0)

    @property
    def odd(self) -> Poly:
        return self._part(1)

    def __str__(self):
        var = _VARS.get(getattr(self.space, "tag", ""), "x")
        return f"({self.even.format(var + '0')}, {self.odd.format(var + '1')})"


def rank2_act(family: Rank2Family, x: Element, v: PolyPair) -> PolyPair:
    return family.act(x, v)


# -- action data ---------------------------------------------------------------------------

@dataclass
class Rank2Data:
    """Action data of a rank-2 module in the bases ``1_0``, ``1_1``.

    ``f_table[m]`` and ``g_table[m]`` (keys are doubled indices) satisfy
    ``psi_m 1_0 = f_m(L_0) 1_1`` and ``psi_m 1_1 = g_m(L_0) 1_0``; the even
    and odd parts carry ``Omega(lambda, a)`` and ``Omega(lambda', a')``.
    """
    lam: ScalarK
    a: ScalarK
    a_prime: ScalarK
    f_table: dict
    g_table: dict
    lambda_prime: ScalarK | None = None
    level: ScalarK = ZERO
    central_charge: ScalarK = ZERO
    sqrt_lambda: ScalarK | None = None

    def __post_init__(self):
        self.lam = ScalarK.coerce(self.lam)
        self.a = ScalarK.coerce(self.a)
        self.a_prime = ScalarK.coerce(self.a_prime)
        self.level = ScalarK.coerce(self.level)
        self.central_charge = ScalarK.coerce(self.central_charge)
        if self.lambda_prime is not None:
            self.lambda_prime = ScalarK.coerce(self.lambda_prime)
        if self.sqrt_lambda is not None:
            self.sqrt_lambda = ScalarK.coerce(self.sqrt_lambda)
        if not self.lam or (self.lambda_prime is not None and not self.lambda_prime):
            raise Rank2Error("lambda must be nonzero")
        keys = set(self.f_table) | set(self.g_table)
        if len({k % 2 for k in keys}) > 1:
            raise Rank2Error("table indices mix integer and half-integer values")

    @property
    def delta2(self) -> int:
        keys = list(self.f_table) or list(self.g_table)
        return keys[0] % 2 if keys else 0

    def to_json(self) -> dict:
        out = {"lambda": str(self.lam), "a": str(self.a), "a_prime": str(self.a_prime),
               "f_table": {format_index(k): p.to_json() for k, p in sorted(self.f_table.items())},
               "g_table": {format_index(k): p.to_json() for k, p in sorted(self.g_table.items())}}
        if self.lambda_prime is not None:
            out["lambda_prime"] = str(self.lambda_prime)
        if self.level:
            out["level"] = str(self.level)
        if self.central_charge:
            out["central_charge"] = str(self.central_charge)
        if self.sqrt_lambda is not None:
            out["sqrt_lambda"] = str(self.sqrt_lambda)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Rank2Data":
        def sc(name, default=None):
            v = obj.get(name, default)
            return None if v is None else ScalarK.coerce(str(v))

        def table(name):
            return {to_twice(Fraction(k)): Poly.from_json(v) for k, v in obj.get(name, {}).items()}

        try:
            return cls(sc("lambda"), sc("a"), sc("a_prime"), table("f_table"), table("g_table"),
                       sc("lambda_prime"), sc("level", "0"), sc("central_charge", "0"),
                       sc("sqrt_lambda"))
        except (TypeError, AttributeError):
            raise Rank2Error("Rank2Data needs lambda, a, a_prime, f_table and g_table") from None


def _window_indices(delta2: int, window) -> list[int]:
    w2 = to_twice(window)
    return [t for t in range(-w2, w2 + 1) if t % 2 == delta2]


def generate_rank2_data(family: Rank2Family, window=4) -> Rank2Data:
    """Read off ``f_m, g_m, lambda, a, a'`` by acting on ``1_0`` and ``1_1``."""
    alg = family.algebra
    one0 = family.pair(even=Poly.const(1))
    one1 = family.pair(odd=Poly.const(1))
    f_table, g_table = {}, {}
    for m2 in _window_indices(family.delta2, window):
        psi = alg.basis("psi", Fraction(m2, 2))
        f_table[m2] = family.act(psi, one0).odd
        g_table[m2] = family.act(psi, one1).even
    L1 = alg.L(1)
    even = family.act(L1, one0).even     # lambda (x + a)
    odd = family.act(L1, one1).odd       # lambda' (x + a')
    return Rank2Data(even.lead, even.coeffs[0] / even.lead, odd.coeffs[0] / odd.lead,
                     f_table, g_table, lambda_prime=odd.lead)


# -- classification -------------------------------------------------------------------------

LEMMAS = {
    "level_zero": "c and z must act as zero on a free rank-2 module",
    "psi_square": "psi_m^2 = 0 forces g_m(t) f_m(t+m) = 0 and f_m(t) g_m(t+m) = 0",
    "zero_propagation": "one vanishing f_r (or g_r) forces the whole table to vanish",
    "lambda_match": "the even and odd parts share lambda",
    "even_odd_shift": "deg f_m is a constant d and a' - a = -d - 1/2",
    "shift_recursion": "(-m - n/2) f_{m+n}(t) = lambda^n (t + n a') f_m(t+n) - lambda^n (t + m + n a) f_m(t)",
    "degree_bound": "d <= 2",
    "root_progression": "for m > 0 the roots of f_m are 2ma', 2ma' + 2m, ..., 2ma - 3m",
    "two_root_parameter": "d = 2 forces a = 1 or a = 5/2",
    "sqrt_in_field": "a square root of lambda must exist in Q(sqrt2)",
    "reconstruction": "the identified family reproduces the data and satisfies the module axioms",
}


@dataclass(frozen=True)
class Identified:
    family: Rank2Family
    parity_changed: bool = False

    def to_json(self) -> dict:
        return {"outcome": "Identified", "family": self.family.to_json(),
                "parity_changed": self.parity_changed}

    def __str__(self):
        flip = " (after parity change)" if self.parity_changed else ""
        return f"Identified: {self.family}{flip}"


@dataclass(frozen=True)
class OddPartDecoupled:
    def to_json(self) -> dict:
        return {"outcome": "OddPartDecoupled"}

    def __str__(self):
        return "OddPartDecoupled: every psi_m acts as zero"


@dataclass(frozen=True)
class Inconsistent:
    lemma: str
    detail: str

    def to_json(self) -> dict:
        return {"outcome": "Inconsistent", "lemma": self.lemma,
                "statement": LEMMAS[self.lemma], "detail": self.detail}

    def __str__(self):
        return f"Inconsistent [{self.lemma}]: {LEMMAS[self.lemma]}; {self.detail}"


def _idx(m2: int) -> str:
    return format_index(m2)


def classify_rank2(data: Rank2Data, verify_bounds: tuple[int, int] = (2, 2)):
    """Identify the family and parameters behind ``data``.

    Returns :class:`Identified`, :class:`OddPartDecoupled` or
    :class:`Inconsistent` naming the first violated constraint.
    """
    delta2 = data.delta2
    r2 = 1 if delta2 else 2           # smallest positive index on the grid
    need = [r2, -r2, r2 + 2, 3 * r2]
    window = sorted(set(data.f_table) | set(data.g_table))     # absent entries are zero
    missing = [m for m in need if m not in window]
    if missing:
        raise Rank2Error("window too small: missing indices " + ", ".join(_idx(m) for m in missing))

    if data.level or data.central_charge:
        return Inconsistent("level_zero", f"z acts as {data.level}, c acts as {data.central_charge}")

    f_table = {m: data.f_table.get(m, Poly()) for m in window}
    g_table = {m: data.g_table.get(m, Poly()) for m in window}
    if not any(f_table.values()) and not any(g_table.values()):
        return OddPartDecoupled()

    for m2, f in f_table.items():
        g = g_table[m2]
        shift = ScalarK(Fraction(m2, 2))
        if (g * f.shift(shift)) or (f * g.shift(shift)):
            return Inconsistent("psi_square", f"psi_{_idx(m2)}^2 does not act as zero")

    lam = data.lam
    lam_p = data.lambda_prime if data.lambda_prime is not None else lam
    a, a_p = data.a, data.a_prime
    swapped = False
    if not any(f_table.values()):
        f_table, g_table = g_table, f_table
        lam, lam_p, a, a_p = lam_p, lam, a_p, a
        swapped = True

    zeros = [m for m, f in f_table.items() if not f]
    if zeros or any(g_table.values()):
        where = zeros[0] if zeros else next(m for m, g in g_table.items() if g)
        return Inconsistent("zero_propagation",
                            f"psi acts nontrivially on both parts or f_{_idx(where)} = 0")

    if lam_p != lam:
        return Inconsistent("lambda_match", f"lambda = {lam}, lambda' = {lam_p}")

    degrees = {f.degree for f in f_table.values()}
    if len(degrees) > 1:
        return Inconsistent("even_odd_shift", f"deg f_m takes several values {sorted(degrees)}")
    d = degrees.pop()
    if a_p - a != ScalarK(Fraction(-2 * d - 1, 2)):
        return Inconsistent("even_odd_shift", f"a' - a = {a_p - a} but d = {d}")

    t = Poly.x()
    for m2, fm in f_table.items():
        for n2 in range(-max(f_table), max(f_table) + 1, 2):
            if m2 + n2 not in f_table:
                continue
            n = n2 // 2
            ln = lam ** n
            lhs = f_table[m2 + n2] * ScalarK(Fraction(-2 * m2 - n2, 4))
            rhs = ((t + Poly.const(a_p * n)) * fm.shift(n) * ln
                   - (t + Poly.const(ScalarK(Fraction(m2, 2)) + a * n)) * fm * ln)
            if lhs != rhs:
                return Inconsistent("shift_recursion", f"fails at m={_idx(m2)}, n={n}")

    if d > 2:
        return Inconsistent("degree_bound", f"deg f_m = {d}")

    if d >= 1:
        for m2, fm in f_table.items():
            if m2 <= 0:
                continue
            m = ScalarK(Fraction(m2, 2))
            roots = fm.roots()
            if roots is None:
                return Inconsistent("root_progression", f"roots of f_{_idx(m2)} lie outside Q(sqrt2)")
            expected = sorted((m * a_p * 2 + m * 2 * i for i in range(d)), key=_root_key)
            if roots != expected or expected[-1] != m * a * 2 - m * 3:
                return Inconsistent(
                    "root_progression",
                    f"f_{_idx(m2)} has roots {[str(x) for x in roots]}, expected {[str(x) for x in expected]}")

    if d == 2 and a not in _FIXED_A.values():
        return Inconsistent("two_root_parameter", f"d = 2 but a = {a}")

    lead = f_table[r2].lead
    if data.sqrt_lambda is not None:
        s = data.sqrt_lambda
        if s * s != lam:
            raise Rank2Error(f"supplied sqrt_lambda {s} does not square to lambda = {lam}")
    else:
        s = sqrt_in_field(lam)
        if s is None:
            return Inconsistent("sqrt_in_field", f"lambda = {lam} has no square root in Q(sqrt2)")
        if lead.sign() < 0:
            s = -s
    b = lead / half_power(s, Fraction(r2, 2))

    if d == 0:
        family = Rank2Family("Omega", delta2, s, b, a)
    elif d == 1:
        family = Rank2Family("OmegaPrime", delta2, s, b, a)
    elif a == _FIXED_A["OmegaDoublePrime"]:
        family = Rank2Family("OmegaDoublePrime", delta2, s, b)
    else:
        family = Rank2Family("OmegaDoublePrimeTilde", delta2, s, b)

    for m2, fm in f_table.items():
        if family.psi_factor(m2) != fm:
            return Inconsistent("reconstruction", f"{family} predicts f_{_idx(m2)} = "
                                f"{family.psi_factor(m2)}, data has {fm}")
    report = verify_module_axioms(family, *verify_bounds)
    if not report.passed:
        return Inconsistent("reconstruction", f"{family} fails the module axioms")
    return Identified(family, swapped)
