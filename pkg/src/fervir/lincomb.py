"""Finite linear combinations over K keyed by hashable basis labels."""
from __future__ import annotations

from .scalar import ScalarK


def add_into(acc: dict, terms, scale: ScalarK | None = None) -> dict:
    """Accumulate ``scale * terms`` into ``acc`` in place, dropping zeros."""
    items = terms.items() if isinstance(terms, dict) else terms
    for key, c in items:
        if scale is not None:
            c = c * scale
        old = acc.get(key)
        if old is not None:
            c = old + c
            if c:
                acc[key] = c
            else:
                del acc[key]
        elif c:
            acc[key] = c
    return acc


class LinComb:
    """Base class for vectors: a dict ``basis key -> ScalarK`` with no zeros.

    Subclasses carry the ambient space in ``space`` and decide how keys are
    printed.  Arithmetic requires both operands to live in the same space.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space, terms=None):
        self.space = space
        self.terms = {k: ScalarK.coerce(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def _from_clean(cls, space, terms: dict):
        obj = cls.__new__(cls)
        obj.space = space
        obj.terms = terms
        return obj

    def _check(self, other):
        if not isinstance(other, LinComb) or other.space != self.space:
            raise ValueError("vectors live in different spaces")

    def __add__(self, other):
        self._check(other)
        return self._from_clean(self.space, add_into(dict(self.terms), other.terms))

    def __sub__(self, other):
        self._check(other)
        return self._from_clean(self.space, add_into(dict(self.terms), other.terms, ScalarK(-1)))

    def __neg__(self):
        return self._from_clean(self.space, {k: -c for k, c in self.terms.items()})

    def __mul__(self, scalar):
        s = ScalarK.coerce(scalar)
        if not s:
            return self._from_clean(self.space, {})
        return self._from_clean(self.space, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, key) -> ScalarK:
        return self.terms.get(key, ScalarK(0))

    def __repr__(self):
        return f"{type(self).__name__}({self})"
