"""Seeded random instances.

Every instance draws from its own counter-based generator keyed by
(seed, index), so a campaign gives the same records whatever the worker
count or completion order.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..affine import AffCoweight, AffWeylElt
from ..bruhat import UP, Budget, candidate_reflections, edge
from ..daweyl import DARoot, DARootRN, DoubleAffineWeyl, WTElement
from ..length import ell

log = logging.getLogger(__name__)

_MASK = (1 << 64) - 1


def instance_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & _MASK, index & _MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def random_word(rng: np.random.Generator, rank: int, max_length: int = 3) -> List[int]:
    size = int(rng.integers(0, max_length + 1))
    return [int(i) for i in rng.integers(1, rank + 1, size=size)]


def random_element(dw: DoubleAffineWeyl, rng: np.random.Generator) -> WTElement:
    """Level 1-2 over an affine ground; any coweight over a finite one."""
    g = dw.ground
    if not g.is_affine:
        nu = tuple(int(v) for v in rng.integers(-2, 3, size=g.rank))
        return WTElement(nu, g.from_word(random_word(rng, g.rank)))
    finite = g.finite
    level = int(rng.integers(1, 3))
    nu = tuple(int(v) for v in rng.integers(-2, 3, size=finite.rank))
    central = int(rng.integers(-1, 2))
    coroot = rng.integers(-1, 2, size=finite.rank)
    lam = tuple(int(v) for v in finite.cartan @ coroot)
    u = finite.from_word(random_word(rng, finite.rank))
    return WTElement(AffCoweight(nu, level, central), AffWeylElt(lam, u))


def random_root(dw: DoubleAffineWeyl, rng: np.random.Generator) -> DARoot:
    g = dw.ground
    finite = g.finite if g.is_affine else g
    beta = finite.positive_roots[int(rng.integers(0, len(finite.positive_roots)))]
    n = int(rng.integers(-2, 3))
    if not g.is_affine:
        return DARoot(beta, n)
    return dw.from_rn(DARootRN(beta, int(rng.integers(-2, 3)), n))


def sample_edge(
    dw: DoubleAffineWeyl,
    rng: np.random.Generator,
    min_gap: int = 1,
    max_gap: Optional[int] = None,
    attempts: int = 256,
) -> Optional[Tuple[WTElement, DARoot]]:
    """An up edge (x, gamma) whose length gap lies in [min_gap, max_gap].

    A down edge is turned around: x*s_gamma becomes the lower end.
    """
    for _ in range(attempts):
        x = random_element(dw, rng)
        gamma = random_root(dw, rng)
        e = edge(dw, x, gamma)
        if e is None:
            continue
        if e.direction != UP:
            x = e.target
            e = edge(dw, x, gamma)
        gap = ell(dw, e.target) - ell(dw, x)
        if gap >= min_gap and (max_gap is None or gap <= max_gap):
            return x, gamma
    log.debug("no edge with gap in [%s, %s] after %d attempts", min_gap, max_gap, attempts)
    return None


def _walk_up(
    dw: DoubleAffineWeyl, rng: np.random.Generator, x: WTElement, steps: int, limit: int
) -> WTElement:
    candidates = candidate_reflections(dw, Budget(1, 1))
    for _ in range(steps):
        for i in rng.permutation(len(candidates)):
            e = edge(dw, x, candidates[int(i)])
            if e is not None and e.direction == UP and ell(dw, e.target) <= limit:
                x = e.target
                break
    return x


def sample_triple(
    dw: DoubleAffineWeyl, rng: np.random.Generator, max_gap: int = 4
) -> Tuple[WTElement, WTElement, WTElement]:
    """x <= y <= z joined by short up walks, with ell(z) - ell(x) <= max_gap."""
    x = random_element(dw, rng)
    limit = ell(dw, x) + max_gap
    y = _walk_up(dw, rng, x, int(rng.integers(0, 3)), limit)
    z = _walk_up(dw, rng, y, int(rng.integers(0, 3)), limit)
    return x, y, z
