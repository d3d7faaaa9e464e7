"""Finite-dimensional F_[m]-modules as explicit matrices over K.

``F_[m]`` is spanned by ``psi_{-m}, ..., psi_m`` and ``z`` (delta = 0).
Matrices act on column vectors: ``M[i][j]`` is the coefficient of ``e_i``
in ``x . e_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .fock import FockSpace
from .scalar import ONE, ZERO, ScalarError, ScalarK
from .superalg import Symbol

Matrix = tuple  # tuple of row tuples of ScalarK


class FindimError(ValueError):
    pass


def _sym_name(sym: Symbol) -> str:
    return str(sym)


def _parse_sym(name: str) -> Symbol:
    if name == "z":
        return Symbol("z")
    if not name.startswith("psi_"):
        raise FindimError(f"unknown generator {name!r}")
    return Symbol("psi", int(Fraction(name[4:]) * 2))


def mat_vec(M: Matrix, v) -> list:
    out = []
    for row in M:
        acc = ZERO
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(B[0]) if B else 0
    cols = [[B[i][j] for i in range(len(B))] for j in range(n)]
    return tuple(tuple(_dot(row, col) for col in cols) for row in A)


def _dot(u, v) -> ScalarK:
    acc = ZERO
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def identity(n: int, scale=ONE) -> Matrix:
    return tuple(tuple(scale if i == j else ZERO for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class MatrixModule:
    dimension: int
    parity_mask: tuple
    action: dict          # Symbol -> Matrix
    m: int

    def __post_init__(self):
        object.__setattr__(self, "parity_mask", tuple(self.parity_mask))
        if self.dimension < 1 or len(self.parity_mask) != self.dimension:
            raise FindimError("dimension and parity mask disagree")
        expected = {Symbol("psi", 2 * r) for r in range(-self.m, self.m + 1)} | {Symbol("z")}
        if set(self.action) != expected:
            raise FindimError(f"action must define exactly psi_-{self.m}..psi_{self.m} and z")
        for sym, M in self.action.items():
            if len(M) != self.dimension or any(len(row) != self.dimension for row in M):
                raise FindimError(f"{sym} matrix has the wrong shape")
        self._validate()

    # -- validation --------------------------------------------------------------

    @property
    def level(self) -> ScalarK:
        return self.action[Symbol("z")][0][0]

    @property
    def psis(self) -> list[Symbol]:
        return [Symbol("psi", 2 * r) for r in range(-self.m, self.m + 1)]

    def _validate(self):
        n = self.dimension
        lam = self.level
        if self.action[Symbol("z")] != identity(n, lam):
            raise FindimError("z must act as a scalar")
        for sym in self.psis:
            M = self.action[sym]
            for i in range(n):
                for j in range(n):
                    if M[i][j] and self.parity_mask[i] == self.parity_mask[j]:
                        raise FindimError(f"{sym} does not flip parity at entry ({i}, {j})")
        for s in self.psis:
            for t in self.psis:
                if t.twice < s.twice:
                    continue
                A, B = self.action[s], self.action[t]
                AB, BA = mat_mul(A, B), mat_mul(B, A)
                want = lam if s.twice + t.twice == 0 else ZERO
                for i in range(n):
                    for j in range(n):
                        if AB[i][j] + BA[i][j] != (want if i == j else ZERO):
                            raise FindimError(f"[{s}, {t}] violates the F_[{self.m}] relations")

    # -- vectors -----------------------------------------------------------------

    def act(self, sym: Symbol, v) -> list:
        return mat_vec(self.action[sym], v)

    def basis_vector(self, i: int) -> list:
        return [ONE if j == i else ZERO for j in range(self.dimension)]

    def parity_of(self, v):
        ps = {self.parity_mask[i] for i, c in enumerate(v) if c}
        if len(ps) > 1:
            return "mixed"
        return ps.pop() if ps else 0

    def is_homogeneous(self, v) -> bool:
        return self.parity_of(v) != "mixed"

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "parity_mask": list(self.parity_mask),
            "m": self.m,
            "action": {_sym_name(s): [[str(c) for c in row] for row in M]
                       for s, M in sorted(self.action.items(), key=lambda kv: kv[0].sort_key())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixModule":
        action = {_parse_sym(k): tuple(tuple(ScalarK.coerce(str(c)) for c in row) for row in M)
                  for k, M in obj["action"].items()}
        return cls(int(obj["dimension"]), tuple(obj["parity_mask"]), action, int(obj["m"]))


def build_Vm(m: int, mu=1) -> MatrixModule:
    """``V_[m]`` twisted by ``sigma_mu``: exterior algebra on ``xi_0..xi_m``."""
    if m < 0:
        raise FindimError("m must be non-negative")
    mu = ScalarK.coerce(mu)
    if not mu:
        raise ScalarError("mu must be nonzero")
    space = FockSpace.V_m(m, mu)
    keys = space.basis_up_to(m)
    pos = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    action = {}
    for r in range(-m, m + 1):
        rows = [[ZERO] * n for _ in range(n)]
        for j, key in enumerate(keys):
            res = space.psi_basis(2 * r, key)
            if res is not None:
                rows[pos[res[1]]][j] = res[0] * mu
        action[Symbol("psi", 2 * r)] = tuple(tuple(r_) for r_ in rows)
    action[Symbol("z")] = identity(n, mu * mu)
    return MatrixModule(n, tuple(len(k) & 1 for k in keys), action, m)


def direct_sum(A: MatrixModule, B: MatrixModule) -> MatrixModule:
    if A.m != B.m:
        raise FindimError("summands must be modules over the same F_[m]")
    if A.level != B.level:
        raise FindimError("summands must share the level so that z stays scalar")
    n, k = A.dimension, B.dimension
    action = {}
    for sym in A.action:
        MA, MB = A.action[sym], B.action[sym]
        rows = [tuple(MA[i]) + (ZERO,) * k for i in range(n)]
        rows += [(ZERO,) * n + tuple(MB[i]) for i in range(k)]
        action[sym] = tuple(rows)
    return MatrixModule(n + k, A.parity_mask + B.parity_mask, action, A.m)


# -- subspaces ------------------------------------------------------------------------

class Subspace:
    """Row space in reduced echelon form (pivot 1, zeros above and below)."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: list[list] = []
        self.pivots: list[int] = []

    @classmethod
    def span(cls, vectors, ambient: int) -> "Subspace":
        S = cls(ambient)
        for v in vectors:
            S.add(v)
        return S

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> list[list]:
        return [list(r) for r in self.rows]

    def reduce(self, v) -> list:
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = w[p]
            if c:
                w = [a - c * b if b else a for a, b in zip(w, row)]
        return w

    def add(self, v) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        w = self.reduce(v)
        p = next((i for i, c in enumerate(w) if c), None)
        if p is None:
            return False
        inv = w[p].inverse()
        w = [c * inv for c in w]
        for i, row in enumerate(self.rows):
            c = row[p]
            if c:
                self.rows[i] = [a - c * b if b else a for a, b in zip(row, w)]
        at = next((i for i, q in enumerate(self.pivots) if q > p), len(self.pivots))
        self.rows.insert(at, w)
        self.pivots.insert(at, p)
        return True

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def to_json(self) -> list:
        return [[str(c) for c in row] for row in self.rows]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def cyclic_span(module: MatrixModule, v) -> Subspace:
    """Smallest generator-invariant subspace containing ``v``."""
    if not any(v):
        raise FindimError("cyclic span of the zero vector")
    S = Subspace(module.dimension)
    gens = [module.action[s] for s in module.psis]
    todo = [list(v)]
    S.add(v)
    while todo:
        w = todo.pop()
        for M in gens:
            u = mat_vec(M, w)
            if S.add(u):
                todo.append(u)
    return S


def restrict(module: MatrixModule, S: Subspace) -> MatrixModule:
    """The submodule carried by ``S`` in its echelon basis (rows must be homogeneous)."""
    mask = []
    for row in S.rows:
        p = module.parity_of(row)
        if p == "mixed":
            raise FindimError("subspace is not graded")
        mask.append(p)
    action = {}
    for sym, M in module.action.items():
        cols = []
        for row in S.rows:
            img = mat_vec(M, row)
            coords = [img[p] for p in S.pivots]
            recon = [ZERO] * module.dimension
            for c, r in zip(coords, S.rows):
                if c:
                    recon = [a + c * b for a, b in zip(recon, r)]
            if recon != img:
                raise FindimError(f"subspace is not invariant under {sym}")
            cols.append(coords)
        action[sym] = tuple(tuple(cols[j][i] for j in range(S.dim)) for i in range(S.dim))
    return MatrixModule(S.dim, tuple(mask), action, module.m)


# -- simplicity -------------------------------------------------------------------------

def spanning_test_vectors(module: MatrixModule) -> list[list]:
    """Basis vectors and sums of pairs of same-parity basis vectors."""
    n = module.dimension
    out = [module.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if module.parity_mask[i] == module.parity_mask[j]:
                v = [ZERO] * n
                v[i] = v[j] = ONE
                out.append(v)
    return out


def vacuum_space(module: MatrixModule) -> tuple[Subspace, Subspace]:
    """Joint kernel of ``psi_1, ..., psi_m``, split by parity."""
    n = module.dimension
    rows = []
    for k in range(1, module.m + 1):
        rows.extend(module.action[Symbol("psi", 2 * k)])
    out = []
    for parity in (0, 1):
        slots = [i for i in range(n) if module.parity_mask[i] == parity]
        # kernel of the rows restricted to these columns
        sub = [[row[i] for i in slots] for row in rows]
        kernel = _kernel(sub, len(slots))
        vecs = []
        for kv in kernel:
            v = [ZERO] * n
            for i, c in zip(slots, kv):
                v[i] = c
            vecs.append(v)
        out.append(Subspace.span(vecs, n))
    return out[0], out[1]


def _kernel(rows, ncols: int) -> list[list]:
    E = Subspace(ncols)
    for r in rows:
        E.add(r)
    free = [j for j in range(ncols) if j not in E.pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(E.rows, E.pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def is_simple_exact(module: MatrixModule) -> bool:
    """Exact test via vacuum vectors.

    With ``z`` acting as ``lambda != 0`` every nonzero graded submodule
    contains a homogeneous vector killed by ``psi_1..psi_m`` (apply positive
    modes greedily; they anticommute), and ``psi_0`` swaps the even and odd
    vacuum spaces invertibly.  So the module is simple iff both vacuum
    spaces are lines and they generate everything.  With ``z = 0`` the
    positive and negative modes together act nilpotently, so simplicity
    means dimension one.
    """
    if not module.level:
        return module.dimension == 1
    vac0, vac1 = vacuum_space(module)
    if vac0.dim != 1 or vac1.dim != 1:
        return False
    full = module.dimension
    return all(cyclic_span(module, S.rows[0]).dim == full for S in (vac0, vac1))


def is_simple(module: MatrixModule, cross_check: bool = True) -> bool:
    """Simplicity by cyclic generation from the spanning test vectors.

    Every test vector must generate the whole space.  The verdict is
    compared with :func:`is_simple_exact`; a disagreement raises, since it
    would mean the spanning heuristic missed a submodule.
    """
    n = module.dimension
    verdict = all(cyclic_span(module, v).dim == n for v in spanning_test_vectors(module))
    if cross_check:
        exact = is_simple_exact(module)
        if exact != verdict:
            raise FindimError(f"spanning heuristic says {verdict}, vacuum criterion says {exact}")
    return verdict


# -- brute force over F_p --------------------------------------------------------------------

def _mod_p(c: ScalarK, p: int, root2: int) -> int:
    num = (c.a.numerator * c.b.denominator + c.b.numerator * c.a.denominator * root2) % p
    den = (c.a.denominator * c.b.denominator) % p
    if den == 0:
        raise FindimError(f"denominator of {c} vanishes mod {p}")
    return num * pow(den, -1, p) % p


def _rank_mod_p(vectors, p: int) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def exhaustive_simple_mod_p(module: MatrixModule, p: int = 7, root2: int = 3,
                            max_dim: int = 8) -> bool:
    """Reduce mod ``p`` (sqrt2 -> ``root2``) and try every homogeneous line.

    Each graded submodule contains a homogeneous vector, so the reduced
    module is simple iff every nonzero homogeneous vector (up to scalars)
    generates the whole space.  Exhaustive, hence only for small dimension.
    """
    if root2 * root2 % p != 2 % p:
        raise FindimError(f"{root2} is not a square root of 2 mod {p}")
    n = module.dimension
    if n > max_dim:
        raise FindimError(f"exhaustive search is limited to dimension <= {max_dim}")
    gens = [[[_mod_p(c, p, root2) for c in row] for row in module.action[s]] for s in module.psis]

    def apply(M, v):
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in M)

    def span_dim(v) -> int:
        basis = [v]
        todo = [v]
        rank = 1
        while todo:
            w = todo.pop()
            for M in gens:
                u = apply(M, w)
                if _rank_mod_p(basis + [u], p) > rank:
                    basis.append(u)
                    todo.append(u)
                    rank += 1
        return rank

    for parity in (0, 1):
        slots = [i for i in range(n) if module.parity_mask[i] == parity]
        for coords in product(range(p), repeat=len(slots)):
            lead = next((c for c in coords if c), 0)
            if lead != 1:          # one representative per line
                continue
            v = [0] * n
            for i, c in zip(slots, coords):
                v[i] = c
            if span_dim(tuple(v)) != n:
                return False
    return True


# -- decomposition ------------------------------------------------------------------------------

def _choice_ops(k: int, which: str) -> list[list[Symbol]]:
    """Words (rightmost applied first) for X_k or Y_k."""
    pk, mk = Symbol("psi", 2 * k), Symbol("psi", -2 * k)
    if which == "X":
        return [[pk], [mk, pk]]
    return [[mk], [pk, mk]]


def _apply_word(module: MatrixModule, word, v):
    for sym in reversed(word):
        v = module.act(sym, v)
    return v


def choice_spans(module: MatrixModule, v) -> list[tuple[tuple[str, ...], Subspace]]:
    """Nonzero spans ``span{x_1 ... x_m v, psi_0 x_1 ... x_m v : x_j in Z_j}``.

    ``Z_k`` runs over ``X_k = {psi_k, psi_-k psi_k}`` and
    ``Y_k = {psi_-k, psi_k psi_-k}``; tuples come in lexicographic order with
    X before Y.  Each span is a submodule that is zero or simple.
    """
    if not module.level:
        raise FindimError("decomposition needs z to act by a nonzero scalar (z = 0 given)")
    if not any(v):
        raise FindimError("cannot decompose from the zero vector")
    if not module.is_homogeneous(v):
        raise FindimError("v must be homogeneous")
    m = module.m
    psi0 = Symbol("psi", 0)
    out = []
    for choice in product("XY", repeat=m):
        vecs = []
        for words in product(*(_choice_ops(k + 1, choice[k]) for k in range(m))):
            u = _apply_word(module, [s for w in words for s in w], v)
            vecs.append(u)
            vecs.append(module.act(psi0, u))
        S = Subspace.span(vecs, module.dimension)
        if S.dim:
            out.append((choice, S))
    return out


def decompose(module: MatrixModule, v) -> list[Subspace]:
    """Write ``U(F_[m]) v`` as a direct sum of simple submodules.

    The choice spans always add up to ``U(F_[m]) v`` but may overlap (for
    ``v = 1 + xi_0 xi_1`` in ``V_[1]`` both spans are the whole module).
    Since each one is simple it either meets the running sum in zero or lies
    inside it, so keeping the spans that enlarge the sum, in choice order,
    gives a direct decomposition.
    """
    kept: list[Subspace] = []
    total = Subspace(module.dimension)
    for _, S in choice_spans(module, v):
        before = total.dim
        for row in S.rows:
            total.add(row)
        grown = total.dim - before
        if grown == S.dim:
            kept.append(S)
        elif grown:
            raise FindimError("a choice span meets the others in a proper nonzero subspace")
    _check_decomposition(module, v, kept)
    return kept


def _check_decomposition(module: MatrixModule, v, parts: list[Subspace]):
    whole = cyclic_span(module, v)
    total = Subspace(module.dimension)
    for S in parts:
        for row in S.rows:
            total.add(row)
    if total.dim != sum(S.dim for S in parts):
        raise FindimError("summands are not independent")
    if total != whole:
        raise FindimError("summands do not add up to the cyclic span")
    expected = 2 ** (module.m + 1)
    for S in parts:
        if S.dim != expected:
            raise FindimError(f"summand of dimension {S.dim}, expected {expected}")
        if not is_simple(restrict(module, S)):
            raise FindimError("a summand is not simple")
