"""Consistency tests for cost functions: decomposition or violation witness.

The unweighted checks are exact functional equations on bounded integer
domains; a pass certifies consistency only up to the tested bound, which the
report states explicitly.  The weighted classifier implements the
affine-or-exponential dichotomy on a rational sample grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence, Union

from .costs import (
    Affine,
    CostModel,
    Exponential,
    Tabulated,
    eval_cost,
    eval_cost_entry,
    model_dimension,
)
from .errors import GameError, LoadRangeError, UsageError


@dataclass(frozen=True)
class UnweightedConsistent:
    f: tuple  # f[r][k] for k = 0..L
    A: tuple  # symmetric, zero diagonal
    L: int


@dataclass(frozen=True)
class WeightedAffine:
    A: tuple
    b: tuple


@dataclass(frozen=True)
class WeightedExponential:
    a: tuple
    phi: float
    b: tuple


@dataclass(frozen=True)
class Violation:
    lemma: str  # jacobian | cross_a | cross_b | cross_distinct | linearity | weighted labels
    r: Optional[int] = None
    s: Optional[int] = None
    t: Optional[int] = None
    x: Optional[tuple] = None
    y: Optional[tuple] = None


ConsistencyReport = Union[UnweightedConsistent, WeightedAffine, WeightedExponential, Violation]


def _bump(x: tuple, *indices: int) -> tuple:
    out = list(x)
    for idx in indices:
        out[idx] += 1
    return tuple(out)


def _require_range(c: Tabulated, L: int, extra: int, what: str) -> None:
    if L + extra > c.max_load:
        raise LoadRangeError(
            f"{what} at bound {L} needs table entries up to {L + extra}, "
            f"model is bounded by {c.max_load}"
        )


def check_jacobian_symmetry(c: Tabulated, L: int) -> Optional[Violation]:
    """Unit-increment symmetry: the discrete Jacobian of c must be symmetric.

    Checks c_r(x+1_{rs}) - c_r(x+1_r) = c_s(x+1_{rs}) - c_s(x+1_s) for all
    r < s and all x with entries <= L.  Returns the first violation or None.
    """
    _require_range(c, L, 1, "Jacobian symmetry check")
    m = c.m
    for x in product(range(L + 1), repeat=m):
        for r in range(m):
            for s in range(r + 1, m):
                lhs = eval_cost_entry(c, _bump(x, r, s), r) - eval_cost_entry(c, _bump(x, r), r)
                rhs = eval_cost_entry(c, _bump(x, r, s), s) - eval_cost_entry(c, _bump(x, s), s)
                if lhs != rhs:
                    return Violation(lemma="jacobian", r=r, s=s, x=x)
    return None


def check_cross_linearity(c: Tabulated, L: int) -> Optional[Violation]:
    """Cross effects must be linear: discrete Hessian diagonal in every off direction.

    Four conditions over all x with entries <= L and x_r > 0:
      cross_a:        c_r(x+1_s) - c_r(x)       = c_r(x+1_{rs}) - c_r(x+1_r)
      cross_b:        c_r(x+2*1_s) - c_r(x+1_s) = c_r(x+1_s)   - c_r(x)
      cross_distinct: c_r(x+1_s) - c_r(x)       = c_r(x+1_{st}) - c_r(x+1_t)   (r,s,t distinct)
      linearity:      c_r(x+1_s) - c_r(x) is the same for every base point with x_r > 0
    """
    _require_range(c, L, 2, "cross-linearity check")
    m = c.m
    for x in product(range(L + 1), repeat=m):
        for r in range(m):
            if x[r] == 0:
                continue
            for s in range(m):
                if s == r:
                    continue
                d0 = eval_cost_entry(c, _bump(x, s), r) - eval_cost_entry(c, x, r)
                if d0 != eval_cost_entry(c, _bump(x, r, s), r) - eval_cost_entry(c, _bump(x, r), r):
                    return Violation(lemma="cross_a", r=r, s=s, x=x)
                if eval_cost_entry(c, _bump(x, s, s), r) - eval_cost_entry(c, _bump(x, s), r) != d0:
                    return Violation(lemma="cross_b", r=r, s=s, x=x)
                for t in range(m):
                    if t == r or t == s:
                        continue
                    if d0 != eval_cost_entry(c, _bump(x, s, t), r) - eval_cost_entry(c, _bump(x, t), r):
                        return Violation(lemma="cross_distinct", r=r, s=s, t=t, x=x)
    # consolidated linearity: compare every base point against the axis reference
    for r in range(m):
        ref = tuple(1 if u == r else 0 for u in range(m))
        for s in range(m):
            if s == r:
                continue
            dref = eval_cost_entry(c, _bump(ref, s), r) - eval_cost_entry(c, ref, r)
            for x in product(range(L + 1), repeat=m):
                if x[r] == 0:
                    continue
                d = eval_cost_entry(c, _bump(x, s), r) - eval_cost_entry(c, x, r)
                if d != dref:
                    return Violation(lemma="linearity", r=r, s=s, x=x, y=ref)
    return None


def decompose_unweighted(c: Tabulated, L: int) -> ConsistencyReport:
    """Recover (f, A) with f_r(k) = c_r(k*1_r), a_rs = c_r(1_{rs}) - c_r(1_r), a_rr = 0.

    Preconditions: the Jacobian and cross-linearity checks passed at bound L.
    The reconstruction c_r(x) = f_r(x_r) + (A x)_r is re-verified exactly on
    every x <= L with x_r > 0; a mismatch means a bug or an insufficient L.
    """
    _require_range(c, L, 1, "decomposition")
    m = c.m
    f = []
    for r in range(m):
        axis = []
        for k in range(L + 1):
            pt = tuple(k if u == r else 0 for u in range(m))
            axis.append(eval_cost_entry(c, pt, r))
        f.append(tuple(axis))
    A = [[Fraction(0)] * m for _ in range(m)]
    for r in range(m):
        unit_r = tuple(1 if u == r else 0 for u in range(m))
        for s in range(m):
            if s == r:
                continue
            A[r][s] = eval_cost_entry(c, _bump(unit_r, s), r) - eval_cost_entry(c, unit_r, r)
    for r in range(m):
        for s in range(r + 1, m):
            if A[r][s] != A[s][r]:
                return Violation(lemma="jacobian", r=r, s=s, x=tuple([0] * m))
    for x in product(range(L + 1), repeat=m):
        for r in range(m):
            if x[r] == 0:
                continue
            rebuilt = f[r][x[r]] + sum(A[r][s] * x[s] for s in range(m) if x[s])
            if rebuilt != eval_cost_entry(c, x, r):
                raise GameError(
                    f"decomposition failed to reconstruct c_{r} at {x}; "
                    "run the consistency checks first or increase L"
                )
    return UnweightedConsistent(f=tuple(f), A=tuple(tuple(row) for row in A), L=L)


def analyze_unweighted(c: Tabulated, L: int) -> ConsistencyReport:
    """Full necessity pipeline: Jacobian, cross-linearity, then decomposition."""
    violation = check_jacobian_symmetry(c, L)
    if violation is not None:
        return violation
    violation = check_cross_linearity(c, L)
    if violation is not None:
        return violation
    return decompose_unweighted(c, L)


def _close(a, b, tol: float) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
    return a == b


def classify_weighted(
    model: CostModel,
    grid: Optional[Sequence] = None,
    m: Optional[int] = None,
    tol: float = 1e-9,
) -> ConsistencyReport:
    """Affine/exponential dichotomy on a rational sample grid.

    Structured Affine and Exponential models are classified directly (only
    the symmetry of A needs checking).  Any other model evaluable at the grid
    points is sampled: affinity means all second differences vanish; the
    exponential branch requires per-resource separability and a shared
    exponent recovered by the three-point ratio test.
    """
    if isinstance(model, Affine):
        for r in range(model.m):
            for s in range(r + 1, model.m):
                if model.A[r][s] != model.A[s][r]:
                    return Violation(lemma="affine_asymmetric", r=r, s=s)
        return WeightedAffine(A=model.A, b=model.b)
    if isinstance(model, Exponential):
        return WeightedExponential(a=model.a, phi=model.phi, b=model.b)

    if grid is None:
        grid = (0, 1, 2, 3)
    grid = tuple(grid)
    if len(grid) < 3:
        raise UsageError("classification needs at least three grid points")
    if grid[0] != 0:
        raise UsageError("the sample grid must start at 0")
    delta = grid[1] - grid[0]
    if any(grid[k + 1] - grid[k] != delta for k in range(len(grid) - 1)) or delta <= 0:
        raise UsageError("the sample grid must be an increasing arithmetic progression")
    dim = model_dimension(model, m)

    points = list(product(grid, repeat=dim))
    values = {pt: eval_cost(model, pt) for pt in points}
    top = grid[-1]

    affine_witness = None
    diffs = {}
    for r in range(dim):
        for s in range(dim):
            base = None
            for pt in points:
                if pt[s] == top:
                    continue
                nxt = pt[:s] + (pt[s] + delta,) + pt[s + 1 :]
                d = values[nxt][r] - values[pt][r]
                if base is None:
                    base = d
                elif not _close(d, base, tol):
                    affine_witness = Violation(lemma="not_affine", r=r, s=s, x=pt)
                    break
            diffs[(r, s)] = base
        if affine_witness:
            break

    if affine_witness is None:
        A = tuple(
            tuple(Fraction(diffs[(r, s)]) / delta for s in range(dim)) for r in range(dim)
        )
        for r in range(dim):
            for s in range(r + 1, dim):
                if not _close(A[r][s], A[s][r], tol):
                    return Violation(lemma="affine_asymmetric", r=r, s=s)
        b = values[tuple([0] * dim)]
        return WeightedAffine(A=A, b=tuple(b))

    # exponential branch: separable with a shared exponent
    zero = tuple([0] * dim)
    for r in range(dim):
        for pt in points:
            axis = tuple(pt[r] if u == r else 0 for u in range(dim))
            if not _close(values[pt][r], values[axis][r], tol):
                return Violation(lemma="not_affine_or_exponential", r=r, s=None, x=pt)
    a_out, b_out, phis = [], [], []
    for r in range(dim):
        axis_val = lambda k: float(values[tuple(grid[k] if u == r else 0 for u in range(dim))][r])
        v0, v1, v2 = axis_val(0), axis_val(1), axis_val(2)
        d1, d2 = v1 - v0, v2 - v1
        if abs(d1) <= tol and abs(d2) <= tol:
            a_out.append(0.0)
            b_out.append(v0)
            continue
        if d1 == 0 or (d2 / d1) <= 0:
            return affine_witness
        phi_r = math.log(d2 / d1) / float(delta)
        a_r = d1 / (math.exp(phi_r * float(delta)) - 1.0)
        b_r = v0 - a_r
        for k in range(len(grid)):
            fitted = a_r * math.exp(phi_r * float(grid[k])) + b_r
            if not _close(fitted, axis_val(k), tol):
                return affine_witness
        a_out.append(a_r)
        b_out.append(b_r)
        phis.append(phi_r)
    if not phis:
        # all-constant cost: affine with A = 0 is the canonical reading
        return WeightedAffine(
            A=tuple(tuple(Fraction(0) for _ in range(dim)) for _ in range(dim)),
            b=values[zero],
        )
    if any(abs(p - phis[0]) > tol for p in phis[1:]):
        return Violation(lemma="exponential_phi_mismatch")
    return WeightedExponential(a=tuple(a_out), phi=phis[0], b=tuple(b_out))
