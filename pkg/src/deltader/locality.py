"""Pointwise and pairwise feasibility of candidate maps against a family.

A candidate is locally consistent at x when some member of the span of the
family basis agrees with it at x; the 2-local variant demands one member
matching at two points simultaneously. On a window the family is a finite
list of maps, so both questions are exact linear feasibility problems.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .algebras import AlgebraSpec, BasisKey, E, F
from .dersolve import FamilyBasis
from .exactlin import RatMatrix, SparseVec, as_scalar, solve_feasible
from .operators import WindowTooSmall, evaluate


@dataclass(frozen=True)
class LocalReport:
    """Feasibility of matching the candidate at one element."""

    element: SparseVec
    feasible: bool
    params: Optional[SparseVec] = None


@dataclass(frozen=True)
class TwoLocalReport:
    """Feasibility of matching the candidate at two elements with one member."""

    x: SparseVec
    y: SparseVec
    feasible: bool
    params: Optional[SparseVec] = None


@dataclass(frozen=True)
class AdditivityWitness:
    nonadditive: bool
    lhs: SparseVec  # candidate(x + y)
    rhs: SparseVec  # candidate(x) + candidate(y)


def _window_guard(family: FamilyBasis, *elements: SparseVec) -> None:
    keys = family.window.key_set()
    for el in elements:
        missing = set(el.support()) - keys
        if missing:
            raise WindowTooSmall(f"element uses {sorted(missing)} outside the family window")


def _match_system(images: List[List[SparseVec]], targets: List[SparseVec]):
    """Feasibility of sum_k c_k * images[k] = targets, stacked over blocks.

    images[k] is the list of per-block values of the k-th basis map; blocks
    share the single parameter vector c.
    """
    rows = {}
    nblocks = len(targets)
    for block in range(nblocks):
        for k, per_block in enumerate(images):
            for key, val in per_block[block].entries.items():
                rows.setdefault((block, key), {})[k] = val
    coords = sorted(rows)
    coord_index = {c: i for i, c in enumerate(coords)}
    matrix_rows = [rows[c] for c in coords]
    rhs = {}
    for block, target in enumerate(targets):
        for key, val in target.entries.items():
            coord = (block, key)
            if coord not in coord_index:
                coord_index[coord] = len(matrix_rows)
                matrix_rows.append({})
            rhs[coord_index[coord]] = val
    matrix = RatMatrix.from_rows(matrix_rows, len(images))
    return solve_feasible(matrix, SparseVec(rhs))


def local_feasible_at(candidate, x: SparseVec, family: FamilyBasis) -> LocalReport:
    """Solve sum_k c_k B_k(x) = candidate(x) for the family maps B_k."""
    _window_guard(family, x)
    target = evaluate(candidate, x)
    images = [[m.evaluate(x)] for m in family.basis]
    result = _match_system(images, [target])
    return LocalReport(x, result.feasible, result.solution if result.feasible else None)


def check_local(candidate, family: FamilyBasis, elements: Sequence[SparseVec]) -> List[LocalReport]:
    """Per-element local feasibility; consistent on the sample iff all feasible."""
    return [local_feasible_at(candidate, x, family) for x in elements]


def two_local_feasible_at(candidate, x: SparseVec, y: SparseVec, family: FamilyBasis) -> TwoLocalReport:
    """One parameter vector across the joint system at x and y."""
    _window_guard(family, x, y)
    targets = [evaluate(candidate, x), evaluate(candidate, y)]
    images = [[m.evaluate(x), m.evaluate(y)] for m in family.basis]
    result = _match_system(images, targets)
    return TwoLocalReport(x, y, result.feasible, result.solution if result.feasible else None)


@dataclass(frozen=True)
class PropagationReport:
    c: Fraction
    feasible: bool
    params: Optional[SparseVec] = None


def zero_propagation_scan(
    alg: AlgebraSpec,
    candidate_value_at_next: SparseVec,
    m: int,
    c_values: Sequence,
    family: FamilyBasis,
) -> List[PropagationReport]:
    """Feasibility of a single family member matching a map that kills e_m and
    sends e_{m+1} to the given value, probed at e_{m+1} - c*e_m per c.

    A linear map with those two values sends e_{m+1} - c*e_m to the same
    value for every c, so the scan asks, per c, whether

        sum_k p_k (B_k(e_{m+1}) - c * B_k(e_m)) = value

    has a solution. With finitely supported families, infeasibility across
    the c range certifies that a vanishing image forces the next one to
    vanish too.
    """
    e_m = SparseVec({E(m): 1})
    e_next = SparseVec({E(m + 1): 1})
    _window_guard(family, e_m, e_next)
    at_m = [b.evaluate(e_m) for b in family.basis]
    at_next = [b.evaluate(e_next) for b in family.basis]
    reports = []
    for c in c_values:
        c = as_scalar(c)
        images = [[nx - am.scaled(c)] for nx, am in zip(at_next, at_m)]
        result = _match_system(images, [candidate_value_at_next])
        reports.append(PropagationReport(c, result.feasible, result.solution))
    return reports


def wab_f_scan(
    alg: AlgebraSpec,
    candidate_value_at_fm: SparseVec,
    m: int,
    family: FamilyBasis,
) -> LocalReport:
    """Probe feasibility at x = f_m + e_m + e_k with k = q' - p' + m + 1.

    p' and q' are the f-offset bounds of the candidate value relative to m.
    A linear map vanishing at e_m and e_k and sending f_m to the value sends
    x to the value itself, so feasibility of sum_k c_k B_k(x) = value is the
    probe's verdict; nonzero values are expected to be infeasible.
    """
    offsets = []
    for key in candidate_value_at_fm.support():
        if key.kind != "f":
            raise ValueError("candidate value must be supported on f-keys")
        offsets.append(key.index - m)
    if offsets:
        p_lo, q_hi = min(offsets), max(offsets)
    else:
        p_lo = q_hi = 0
    k = q_hi - p_lo + m + 1
    probe = SparseVec({F(m): 1, E(m): 1, E(k): 1})
    _window_guard(family, probe)
    images = [[b.evaluate(probe)] for b in family.basis]
    result = _match_system(images, [candidate_value_at_fm])
    return LocalReport(probe, result.feasible, result.solution)


def certify_nonadditive(candidate, x: SparseVec, y: SparseVec) -> AdditivityWitness:
    """Compare candidate(x + y) with candidate(x) + candidate(y) exactly."""
    lhs = evaluate(candidate, x + y)
    rhs = evaluate(candidate, x) + evaluate(candidate, y)
    return AdditivityWitness(lhs != rhs, lhs, rhs)


def deterministic_sample(
    window_keys: Sequence[BasisKey],
    pair_box: int = 6,
    extra_terms: int = 5,
    seed: int = 2024,
) -> List[SparseVec]:
    """Reproducible sample: every window key, pairwise sums in a sub-box, and
    a seeded batch of 3-term combinations with small coefficients."""
    keys = sorted(window_keys)
    sample = [SparseVec({k: 1}) for k in keys]
    box = keys[:pair_box]
    for k1, k2 in itertools.combinations(box, 2):
        sample.append(SparseVec({k1: 1, k2: 1}))
    rng = random.Random(seed)
    coeffs = [Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(3)]
    for _ in range(extra_terms):
        chosen = rng.sample(keys, min(3, len(keys)))
        sample.append(SparseVec({k: rng.choice(coeffs) for k in chosen}))
    return sample
