"""Finite simply-laced root systems of type A_n, D_n, E_6, E_7 and E_8.

Roots are integer tuples in the simple-root basis and coweights are integer
tuples in the fundamental-coweight basis, so every pairing is an exact
integer dot product. `FiniteRootSystem` also serves as the ground datum of
the single-affine instantiation: its coweights are the translation parts
and its Weyl group is the finite one.
"""
from __future__ import annotations

import functools
import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from .errors import ConfigError, DomainError, InvariantError, UsageError

log = logging.getLogger(__name__)

Root = Tuple[int, ...]
Coweight = Tuple[int, ...]

_LABEL = re.compile(r"^([ADE])(\d+)$")

# number of positive roots per type, used as a closure sanity check
_EXPECTED_POSITIVE = {
    "A": lambda n: n * (n + 1) // 2,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
}


@dataclass(frozen=True)
class CartanDatum:
    label: str
    kind: str
    rank: int
    cartan: Tuple[Tuple[int, ...], ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.cartan, dtype=np.int64)


def _dynkin_edges(kind: str, rank: int) -> List[Tuple[int, int]]:
    if kind == "A":
        return [(i, i + 1) for i in range(rank - 1)]
    if kind == "D":
        return [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    # Bourbaki labelling: 1-3-4-5-6(-7-8) with 2 attached to 4
    edges = [(0, 2), (1, 3), (2, 3)]
    edges += [(i, i + 1) for i in range(3, rank - 1)]
    return edges


def cartan_datum(label: str) -> CartanDatum:
    """Build the Cartan datum for a label such as "A2", "D4" or "E8"."""
    match = _LABEL.match(label.strip()) if isinstance(label, str) else None
    if match is None:
        raise ConfigError(f"unsupported Cartan label {label!r}")
    kind, rank = match.group(1), int(match.group(2))
    if (kind == "A" and rank < 1) or (kind == "D" and rank < 4) or (
        kind == "E" and rank not in (6, 7, 8)
    ):
        raise ConfigError(f"unsupported Cartan label {label!r}")
    mat = 2 * np.eye(rank, dtype=np.int64)
    for i, j in _dynkin_edges(kind, rank):
        mat[i, j] = mat[j, i] = -1
    return CartanDatum(
        label=f"{kind}{rank}",
        kind=kind,
        rank=rank,
        cartan=tuple(tuple(int(v) for v in row) for row in mat),
    )


class FiniteWeylElt:
    """A finite Weyl group element, stored as its action matrix on root coordinates.

    The inverse matrix is carried along so the dual action on coweights
    (inverse transpose) never needs a matrix inversion.
    """

    __slots__ = ("mat", "inv", "_key")

    def __init__(self, mat: np.ndarray, inv: np.ndarray):
        self.mat = np.asarray(mat, dtype=np.int64)
        self.inv = np.asarray(inv, dtype=np.int64)
        self.mat.flags.writeable = False
        self.inv.flags.writeable = False
        self._key = self.mat.tobytes()

    @classmethod
    def identity(cls, rank: int) -> "FiniteWeylElt":
        eye = np.eye(rank, dtype=np.int64)
        return cls(eye, eye)

    def __mul__(self, other: "FiniteWeylElt") -> "FiniteWeylElt":
        return FiniteWeylElt(self.mat @ other.mat, other.inv @ self.inv)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, FiniteWeylElt) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FiniteWeylElt({self.mat.tolist()})"

    def __reduce__(self):
        return (FiniteWeylElt, (self.mat.copy(), self.inv.copy()))

    def inverse(self) -> "FiniteWeylElt":
        return FiniteWeylElt(self.inv, self.mat)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.mat, np.eye(len(self.mat), dtype=np.int64)))

    def act(self, theta: Sequence[int]) -> Root:
        return tuple(int(v) for v in self.mat @ np.asarray(theta, dtype=np.int64))

    def act_cw(self, nu: Sequence[int]) -> Coweight:
        return tuple(int(v) for v in self.inv.T @ np.asarray(nu, dtype=np.int64))


class TitsConeTag(NamedTuple):
    member: bool
    rep: Any = None
    witness: Any = None


def dominant_translate(ground, mu, cap: int = 10_000) -> TitsConeTag:
    """Move `mu` into the dominant chamber by simple reflections, lowest index first.

    Works for any ground datum exposing `simple_roots` and `simple_reflection`.
    """
    if cap <= 0:
        raise UsageError(f"cap must be positive, got {cap}")
    if not ground.in_tits_cone(mu):
        return TitsConeTag(False)
    witness = ground.identity
    for _ in range(cap):
        for i, alpha in enumerate(ground.simple_roots):
            p = ground.pairing(mu, alpha)
            if p < 0:
                mu = ground.cw_add(mu, ground.cw_scale(-p, ground.coroot(alpha)))
                witness = ground.weyl_mult(ground.simple_reflection(i), witness)
                break
        else:
            return TitsConeTag(True, mu, witness)
    raise InvariantError(
        f"dominant_translate did not terminate within {cap} steps",
        {"ground": ground.label, "mu": repr(mu)},
    )


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


class FiniteRootSystem:
    """Enumerated root data of a finite simply-laced Cartan datum."""

    is_affine = False

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.label = datum.label
        self.rank = datum.rank
        self.cartan = datum.matrix
        self.positive_roots: List[Root] = self._close_positive_roots()
        self._positive: FrozenSet[Root] = frozenset(self.positive_roots)
        self.roots: List[Root] = self.positive_roots + [
            self.negate(theta) for theta in self.positive_roots
        ]
        self._roots: FrozenSet[Root] = frozenset(self.roots)
        self.two_rho: Root = tuple(
            int(v) for v in np.sum(np.array(self.positive_roots), axis=0)
        )
        self.highest_root: Root = max(self.positive_roots, key=sum)
        self.dual_coxeter = 1 + sum(self.highest_root)
        det = int(round(np.linalg.det(self.cartan)))
        self._cartan_det = det
        self._cartan_adj = np.rint(np.linalg.inv(self.cartan) * det).astype(np.int64)
        self.identity = FiniteWeylElt.identity(self.rank)
        self.zero_coweight: Coweight = (0,) * self.rank
        self.simple_roots: List[Root] = [
            tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)
        ]
        self._simple_reflections = [self.reflection(a) for a in self.simple_roots]
        self._check()
        log.debug(
            "built %s: %d positive roots, h_dual=%d",
            self.label,
            len(self.positive_roots),
            self.dual_coxeter,
        )

    def __repr__(self) -> str:
        return f"FiniteRootSystem({self.label!r})"

    def __reduce__(self):
        return (build_system, (self.datum,))

    def _close_positive_roots(self) -> List[Root]:
        simple = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            fresh = []
            for theta in frontier:
                pairings = self.cartan @ np.array(theta)
                for i in range(self.rank):
                    image = list(theta)
                    image[i] -= int(pairings[i])
                    image = tuple(image)
                    if all(v >= 0 for v in image) and image not in found:
                        found.add(image)
                        fresh.append(image)
            frontier = fresh
        return sorted(found, key=lambda t: (sum(t), tuple(-v for v in t)))

    def _check(self) -> None:
        expected = _EXPECTED_POSITIVE[self.datum.kind](self.rank)
        if len(self.positive_roots) != expected:
            raise InvariantError(
                f"{self.label}: closure found {len(self.positive_roots)} positive roots,"
                f" expected {expected}"
            )
        # ADE: distinct positive roots pair to -1, 0 or 1
        roots = np.array(self.positive_roots, dtype=np.int64)
        table = roots @ self.cartan @ roots.T
        off = table - 2 * np.eye(len(roots), dtype=np.int64)
        if np.any(np.abs(off) > 1):
            raise InvariantError(f"{self.label}: pairing bound |<b,t>| <= 1 violated")

    # -- roots -----------------------------------------------------------
    def is_root(self, theta: Sequence[int]) -> bool:
        return tuple(theta) in self._roots

    def is_positive(self, theta: Sequence[int]) -> bool:
        return tuple(theta) in self._positive

    def negate(self, theta: Sequence[int]) -> Root:
        return tuple(-v for v in theta)

    def abs_root(self, theta: Root) -> Root:
        return theta if self.is_positive(theta) else self.negate(theta)

    def height(self, theta: Root) -> int:
        return sum(theta)

    def depth(self, theta: Root) -> int:
        return 0

    def sort_key(self, theta: Root):
        return (sum(theta), theta)

    def _require_root(self, theta: Sequence[int]) -> Root:
        theta = tuple(int(v) for v in theta)
        if len(theta) != self.rank:
            raise UsageError(f"{self.label}: expected {self.rank} coordinates, got {theta}")
        if theta not in self._roots:
            raise DomainError(f"{self.label}: {theta} is not a root")
        return theta

    # -- coweights -------------------------------------------------------
    def pairing(self, nu: Sequence[int], theta: Sequence[int]) -> int:
        if len(nu) != self.rank or len(theta) != self.rank:
            raise UsageError(
                f"{self.label}: dimension mismatch in pairing {tuple(nu)} with {tuple(theta)}"
            )
        return _dot(nu, theta)

    def coroot(self, theta: Sequence[int]) -> Coweight:
        theta = self._require_root(theta)
        return tuple(int(v) for v in self.cartan @ np.array(theta, dtype=np.int64))

    @functools.lru_cache(maxsize=4096)
    def coroot_coords(self, lam: Coweight) -> Tuple[int, ...]:
        """Coordinates of a coroot-lattice coweight in the simple-coroot basis."""
        scaled = self._cartan_adj @ np.array(lam, dtype=np.int64)
        if np.any(scaled % self._cartan_det):
            raise DomainError(f"{self.label}: {lam} is not in the coroot lattice")
        return tuple(int(v) for v in scaled // self._cartan_det)

    def coweight_form(self, nu: Coweight, lam: Coweight) -> int:
        """The invariant form (nu, lam) for lam in the coroot lattice."""
        return _dot(nu, self.coroot_coords(tuple(lam)))

    def cw_add(self, a: Coweight, b: Coweight) -> Coweight:
        return tuple(x + y for x, y in zip(a, b))

    def cw_scale(self, k: int, a: Coweight) -> Coweight:
        return tuple(k * x for x in a)

    def cw_neg(self, a: Coweight) -> Coweight:
        return tuple(-x for x in a)

    def coweight_magnitude(self, nu: Coweight) -> int:
        return max((abs(v) for v in nu), default=0)

    def weyl_magnitude(self, w: FiniteWeylElt) -> int:
        return 0

    def in_tits_cone(self, nu: Coweight) -> bool:
        if len(nu) != self.rank:
            raise UsageError(f"{self.label}: expected {self.rank} coordinates, got {nu}")
        return True

    def two_ht(self, nu: Coweight) -> int:
        return self.pairing(nu, self.two_rho)

    @functools.lru_cache(maxsize=65536)
    def dominant_translate(self, nu: Coweight, cap: int = 10_000) -> TitsConeTag:
        return dominant_translate(self, nu, cap)

    def roots_below(self, nu: Coweight) -> List[Root]:
        """Positive roots pairing strictly negatively with `nu`."""
        return [theta for theta in self.positive_roots if _dot(nu, theta) < 0]

    def positive_roots_in_box(self, depth: int) -> List[Root]:
        return list(self.positive_roots)

    # -- Weyl group ------------------------------------------------------
    def reflection(self, theta: Sequence[int]) -> FiniteWeylElt:
        return self._reflection(self._require_root(theta))

    @functools.lru_cache(maxsize=4096)
    def _reflection(self, theta: Root) -> FiniteWeylElt:
        vec = np.array(theta, dtype=np.int64)
        mat = np.eye(self.rank, dtype=np.int64) - np.outer(vec, self.cartan @ vec)
        return FiniteWeylElt(mat, mat)

    def simple_reflection(self, i: int) -> FiniteWeylElt:
        return self._simple_reflections[i]

    def act_root(self, w: FiniteWeylElt, theta: Root) -> Root:
        return w.act(theta)

    def act_cw(self, w: FiniteWeylElt, nu: Coweight) -> Coweight:
        return w.act_cw(nu)

    def weyl_mult(self, a: FiniteWeylElt, b: FiniteWeylElt) -> FiniteWeylElt:
        return a * b

    def weyl_inverse(self, a: FiniteWeylElt) -> FiniteWeylElt:
        return a.inverse()

    @functools.lru_cache(maxsize=65536)
    def inv(self, w: FiniteWeylElt) -> FrozenSet[Root]:
        """Inversion set {theta > 0 : w(theta) < 0}."""
        return frozenset(
            theta for theta in self.positive_roots if not self.is_positive(w.act(theta))
        )

    inv_fin = inv

    def from_word(self, word: Sequence[int]) -> FiniteWeylElt:
        """Product s_{i1} s_{i2} ... with 1-based generator indices."""
        w = self.identity
        for i in word:
            if not 1 <= i <= self.rank:
                raise UsageError(f"{self.label}: no simple reflection s{i}")
            w = w * self._simple_reflections[i - 1]
        return w

    def reduced_word(self, w: FiniteWeylElt) -> List[int]:
        """A reduced word (1-based) obtained by peeling right descents."""
        peeled = []
        for _ in range(len(self.positive_roots) + 1):
            if w.is_identity():
                return peeled[::-1]
            for i, alpha in enumerate(self.simple_roots):
                if not self.is_positive(w.act(alpha)):
                    peeled.append(i + 1)
                    w = w * self._simple_reflections[i]
                    break
        raise InvariantError(f"{self.label}: descent peeling did not reach the identity")

    def length(self, w: FiniteWeylElt) -> int:
        return len(self.inv(w))

    def elements_up_to(self, max_length: int) -> Iterator[Tuple[FiniteWeylElt, int]]:
        """Yield (element, length) for every element of length <= max_length."""
        seen: Dict[FiniteWeylElt, int] = {self.identity: 0}
        frontier = [self.identity]
        yield self.identity, 0
        for length in range(1, max_length + 1):
            fresh = []
            for w in frontier:
                for s in self._simple_reflections:
                    v = w * s
                    if v not in seen:
                        seen[v] = length
                        fresh.append(v)
                        yield v, length
            if not fresh:
                return
            frontier = fresh


@functools.lru_cache(maxsize=None)
def build_system(datum: CartanDatum) -> FiniteRootSystem:
    return FiniteRootSystem(datum)


def load_system(label: str) -> FiniteRootSystem:
    return build_system(cartan_datum(label))
