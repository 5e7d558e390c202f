"""Ground truth computed without the length or Bruhat machinery.

`CoxeterGroup` is the affine Weyl group of a finite simply-laced system
written as a Coxeter group: generator matrices on the affine root lattice,
lengths by descent peeling and Bruhat comparison by the subword property.
The brute-force scans evaluate Inv++ and intervals by definition over a
rectangle of double-affine roots.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from .daweyl import DARoot, DoubleAffineWeyl, WTElement
from .errors import UsageError
from .length import candidate_bounds, ell
from .rootsys import FiniteRootSystem

log = logging.getLogger(__name__)

MAX_INTERVAL_GAP = 4


@dataclass(frozen=True)
class CoxeterElt:
    """A word in the generators s_0 .. s_n (index 0 is the affine node)."""

    word: Tuple[int, ...] = ()

    def __mul__(self, other: "CoxeterElt") -> "CoxeterElt":
        return CoxeterElt(self.word + other.word)

    def __str__(self) -> str:
        return "*".join(f"s{i}" for i in self.word) or "e"


class CoxeterGroup:
    def __init__(self, system: FiniteRootSystem):
        self.system = system
        self.rank = system.rank + 1
        theta = np.array(system.highest_root, dtype=np.int64)
        cartan = np.zeros((self.rank, self.rank), dtype=np.int64)
        cartan[1:, 1:] = system.cartan
        cartan[0, 0] = 2
        cartan[0, 1:] = cartan[1:, 0] = -(system.cartan @ theta)
        self.cartan = cartan
        eye = np.eye(self.rank, dtype=np.int64)
        self.generators = [eye - np.outer(eye[i], cartan[i]) for i in range(self.rank)]
        self._identity = eye

    def __repr__(self) -> str:
        return f"CoxeterGroup({self.system.label!r} affine)"

    def matrix(self, e: CoxeterElt) -> np.ndarray:
        mat = self._identity
        for i in e.word:
            if not 0 <= i < self.rank:
                raise UsageError(f"no generator s{i} in affine {self.system.label}")
            mat = mat @ self.generators[i]
        return mat

    def _descent(self, mat: np.ndarray) -> Optional[int]:
        for i in range(self.rank):
            if np.any(mat[:, i] < 0):
                return i
        return None

    def _peel(self, mat: np.ndarray) -> List[int]:
        peeled = []
        while True:
            i = self._descent(mat)
            if i is None:
                return peeled[::-1]
            peeled.append(i)
            mat = mat @ self.generators[i]

    def cox_length(self, e: CoxeterElt) -> int:
        return len(self._peel(self.matrix(e)))

    def reduced_word(self, e: CoxeterElt) -> CoxeterElt:
        return CoxeterElt(tuple(self._peel(self.matrix(e))))

    def cox_leq(self, a: CoxeterElt, b: CoxeterElt) -> bool:
        """Subword property on one reduced word of b."""
        target = self.matrix(a).tobytes()
        products: Dict[bytes, np.ndarray] = {self._identity.tobytes(): self._identity}
        for i in self.reduced_word(b).word:
            extended = {}
            for mat in products.values():
                nxt = mat @ self.generators[i]
                extended[nxt.tobytes()] = nxt
            products.update(extended)
        return target in products

    def elements_up_to(self, max_length: int) -> Iterator[Tuple[CoxeterElt, int]]:
        seen = {self._identity.tobytes()}
        frontier = [(CoxeterElt(), self._identity)]
        yield CoxeterElt(), 0
        for length in range(1, max_length + 1):
            fresh = []
            for elt, mat in frontier:
                for i, gen in enumerate(self.generators):
                    nxt = mat @ gen
                    key = nxt.tobytes()
                    if key in seen:
                        continue
                    seen.add(key)
                    word = CoxeterElt(elt.word + (i,))
                    fresh.append((word, nxt))
                    yield word, length
            frontier = fresh

    # -- identification with W_T over the finite ground -------------------
    def _check(self, dw: DoubleAffineWeyl) -> None:
        if dw.ground.is_affine or dw.ground.label != self.system.label:
            raise UsageError(f"identification needs the finite ground {self.system.label}")

    def generator_root(self, i: int) -> DARoot:
        """alpha_i[0] for i >= 1 and theta_h[-1] = pi - theta_h for the affine node."""
        if i == 0:
            return DARoot(self.system.highest_root, -1)
        return DARoot(self.system.simple_roots[i - 1], 0)

    def identify(self, dw: DoubleAffineWeyl, e: CoxeterElt) -> WTElement:
        self._check(dw)
        x = dw.identity
        for i in e.word:
            x = dw.mult(x, dw.reflection(self.generator_root(i)))
        return x

    def lattice_image(self, dw: DoubleAffineWeyl, x: WTElement) -> np.ndarray:
        """Matrix of x on the affine root lattice in the basis alpha_0, ..., alpha_n."""
        self._check(dw)
        theta = self.system.highest_root
        columns = []
        for i in range(self.rank):
            image = dw.act(x, self.generator_root(i))
            g, k = dw.raw(image.root)
            finite = [a + k * t for a, t in zip(g, theta)]
            columns.append([image.sign * v for v in [k] + finite])
        return np.array(columns, dtype=np.int64).T


# -- brute force over a rectangle -------------------------------------------
def _scan(dw: DoubleAffineWeyl, depth: int, height: int) -> Iterator[DARoot]:
    for beta in dw.ground.positive_roots_in_box(depth):
        for n in range(-height, height + 1):
            yield DARoot(beta, n)


def _up(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> Optional[WTElement]:
    target = dw.mult(x, dw.reflection(gamma))
    if not dw.is_member(target) or dw.act(x, gamma).sign < 0:
        return None
    return target


def _down(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> Optional[WTElement]:
    target = dw.mult(x, dw.reflection(gamma))
    if not dw.is_member(target) or dw.act(x, gamma).sign > 0:
        return None
    return target


def brute_inv_pp(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot, depth: int, height: int) -> Set[DARoot]:
    """Inv++ by definition over depth <= R, |m| <= N; refuses bounds below the certified ones."""
    dw.require_member(x)
    if _up(dw, x, gamma) is None:
        raise UsageError(f"{gamma} does not give an up edge from {x}")
    need_depth, need_height = candidate_bounds(dw, x, gamma)
    if depth < need_depth or height < need_height:
        raise UsageError(
            f"bounds ({depth}, {height}) are below the certified ({need_depth}, {need_height})"
        )
    refl = dw.reflection(gamma)
    found = set()
    for g in _scan(dw, depth, height):
        flipped = dw.act(refl, g)
        if flipped.sign > 0:
            continue
        if dw.act(x, g).sign > 0 and dw.act(x, flipped.root).sign > 0:
            found.add(g)
    return found


def brute_interval(dw: DoubleAffineWeyl, x: WTElement, y: WTElement, depth: int, height: int) -> Set[WTElement]:
    """[x, y] as reached by edges in the rectangle from both ends."""
    dw.require_member(x)
    dw.require_member(y)
    low, high = ell(dw, x), ell(dw, y)
    if high - low > MAX_INTERVAL_GAP:
        raise UsageError(f"interval gap {high - low} exceeds {MAX_INTERVAL_GAP}")
    if high < low:
        return set()
    roots = list(_scan(dw, depth, height))

    def sweep(start: WTElement, step, keep) -> Set[WTElement]:
        reached = {start}
        frontier = [start]
        while frontier:
            fresh = []
            for z in frontier:
                for gamma in roots:
                    t = step(dw, z, gamma)
                    if t is not None and t not in reached and keep(ell(dw, t)):
                        reached.add(t)
                        fresh.append(t)
            frontier = fresh
        return reached

    above = sweep(x, _up, lambda size: size <= high)
    if y not in above:
        return set()
    below = sweep(y, _down, lambda size: size >= low)
    log.debug("interval [%s, %s]: %d above, %d below", x, y, len(above), len(below))
    return above & below
