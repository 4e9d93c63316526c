"""Catalogue of basis-indexed graded Lie algebras.

Each algebra is presented through an index-domain predicate plus a structure
constant rule for brackets of basis elements e_i (and f_i for the semidirect
product family). Supported algebras:

* ``wittz``     two-sided Witt algebra, [e_i, e_j] = (j - i) e_{i+j}, i in Z
* ``wittpos``   positive Witt subalgebra, indices i >= 1
* ``witt1``     one-sided Witt subalgebra, indices i >= -1
* ``wab``       W(a, b) = Witt + tensor density module span{f_j}:
                [e_i, e_j] = (i - j) e_{i+j}, [e_i, f_j] = -(j + a + b*i) f_{i+j}
* ``thin``      thin algebra, [e_1, e_n] = e_{n+1} for n >= 2
* ``solv``      solvable algebra with abelian radical, [e_1, e_i] = e_i, i >= 2
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactlin import SparseVec, as_scalar

WITT_Z = "wittz"
WITT_POS = "wittpos"
WITT_ONE_SIDED = "witt1"
WAB = "wab"
THIN = "thin"
SOLV_ABELIAN = "solv"

ALGEBRA_NAMES = (WITT_Z, WITT_POS, WITT_ONE_SIDED, WAB, THIN, SOLV_ABELIAN)


class KeyOutOfDomain(Exception):
    """A basis key falls outside the algebra's index domain."""


@dataclass(frozen=True, order=True)
class BasisKey:
    """Tagged basis index: kind 'e' or 'f', integer index.

    Ordering is the canonical one used everywhere: all e-keys before all
    f-keys, then by index.
    """

    kind: str
    index: int

    def __repr__(self) -> str:
        return f"{self.kind}{self.index}"


def E(i: int) -> BasisKey:
    return BasisKey("e", i)


def F(i: int) -> BasisKey:
    return BasisKey("f", i)


@dataclass(frozen=True)
class AlgebraSpec:
    """An algebra from the catalogue, with exact rational parameters for W(a,b)."""

    name: str
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    def __post_init__(self):
        if self.name not in ALGEBRA_NAMES:
            raise ValueError(f"unknown algebra {self.name!r}")
        if self.name == WAB:
            if self.a is None or self.b is None:
                raise ValueError("wab requires parameters a and b")
        elif self.a is not None or self.b is not None:
            raise ValueError(f"{self.name} takes no parameters")

    def label(self) -> str:
        if self.name == WAB:
            return f"wab(a={self.a},b={self.b})"
        return self.name


def witt_z() -> AlgebraSpec:
    return AlgebraSpec(WITT_Z)


def witt_pos() -> AlgebraSpec:
    return AlgebraSpec(WITT_POS)


def witt_one_sided() -> AlgebraSpec:
    return AlgebraSpec(WITT_ONE_SIDED)


def wab(a, b) -> AlgebraSpec:
    return AlgebraSpec(WAB, as_scalar(a), as_scalar(b))


def thin() -> AlgebraSpec:
    return AlgebraSpec(THIN)


def solv_abelian() -> AlgebraSpec:
    return AlgebraSpec(SOLV_ABELIAN)


def in_domain(alg: AlgebraSpec, key: BasisKey) -> bool:
    """True iff key is a basis key of the algebra."""
    if key.kind == "f":
        return alg.name == WAB
    if alg.name in (WITT_Z, WAB):
        return True
    if alg.name == WITT_ONE_SIDED:
        return key.index >= -1
    return key.index >= 1  # wittpos, thin, solv


def _require_in_domain(alg: AlgebraSpec, key: BasisKey) -> None:
    if not in_domain(alg, key):
        raise KeyOutOfDomain(f"{key} is not a basis key of {alg.label()}")


def bracket(alg: AlgebraSpec, k1: BasisKey, k2: BasisKey) -> SparseVec:
    """Exact bracket [k1, k2] of two basis keys as a sparse vector.

    All catalogued algebras are closed under bracket, so results never leave
    the domain; out-of-domain inputs raise KeyOutOfDomain.
    """
    _require_in_domain(alg, k1)
    _require_in_domain(alg, k2)
    i, j = k1.index, k2.index
    if alg.name in (WITT_Z, WITT_POS, WITT_ONE_SIDED):
        coeff = Fraction(j - i)
        return SparseVec({E(i + j): coeff}) if coeff else SparseVec()
    if alg.name == WAB:
        if k1.kind == "e" and k2.kind == "e":
            coeff = Fraction(i - j)
            return SparseVec({E(i + j): coeff}) if coeff else SparseVec()
        if k1.kind == "e" and k2.kind == "f":
            coeff = -(j + alg.a + alg.b * i)
            return SparseVec({F(i + j): coeff}) if coeff else SparseVec()
        if k1.kind == "f" and k2.kind == "e":
            coeff = i + alg.a + alg.b * j
            return SparseVec({F(i + j): coeff}) if coeff else SparseVec()
        return SparseVec()  # [f, f] = 0
    if alg.name == THIN:
        if i == 1 and j >= 2:
            return SparseVec({E(j + 1): 1})
        if j == 1 and i >= 2:
            return SparseVec({E(i + 1): -1})
        return SparseVec()
    # solvable with abelian radical
    if i == 1 and j >= 2:
        return SparseVec({E(j): 1})
    if j == 1 and i >= 2:
        return SparseVec({E(i): -1})
    return SparseVec()


def bracket_vec(alg: AlgebraSpec, v: SparseVec, w: SparseVec) -> SparseVec:
    """Bilinear extension of ``bracket`` to sparse vectors."""
    out = SparseVec()
    for k1, c1 in v.items():
        for k2, c2 in w.items():
            term = bracket(alg, k1, k2)
            if term:
                out = out + term.scaled(c1 * c2)
    return out
