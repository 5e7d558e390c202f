"""Untwisted affinization of a finite simply-laced root system.

Real affine roots are theta + r*delta, coweights are nu + level*d + central*c,
and affine Weyl elements are t^lam u with lam in the coroot lattice. The
conventions are fixed by

    t^lam u (theta + r delta) = u(theta) + (r + <lam, u(theta)>) delta
    t^lam (nu, level, k)      = (nu - level*lam, level, k + (nu, lam) - level*(lam, lam)/2)

which keeps every pairing <w(mu), w(gamma)> = <mu, gamma> and gives
s_{theta + r delta} = t^{r theta^vee} s_theta.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import FrozenSet, List, NamedTuple, Tuple

from .errors import DomainError, UsageError
from .rootsys import (
    Coweight,
    FiniteRootSystem,
    FiniteWeylElt,
    Root,
    TitsConeTag,
    dominant_translate,
    load_system,
)

log = logging.getLogger(__name__)


class AffRealRoot(NamedTuple):
    theta: Root
    r: int


class AffCoweight(NamedTuple):
    nu: Coweight
    level: int = 0
    central: int = 0


@dataclass(frozen=True)
class AffWeylElt:
    """t^lam u; lam is stored in fundamental-coweight coordinates."""

    lam: Coweight
    u: FiniteWeylElt


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


class AffineRootSystem:
    """Ground datum of the double-affine construction over an affine ADE group."""

    is_affine = True

    def __init__(self, finite: FiniteRootSystem):
        self.finite = finite
        self.label = finite.label
        self.rank = finite.rank
        zero = finite.zero_coweight
        self.identity = AffWeylElt(zero, finite.identity)
        self.zero_coweight = AffCoweight(zero, 0, 0)
        self.d = AffCoweight(zero, 1, 0)
        self.c = AffCoweight(zero, 0, 1)
        self.alpha0 = AffRealRoot(finite.negate(finite.highest_root), 1)
        self.simple_roots: List[AffRealRoot] = [self.alpha0] + [
            AffRealRoot(alpha, 0) for alpha in finite.simple_roots
        ]
        self._simple_reflections = [self.reflection(a) for a in self.simple_roots]

    def __repr__(self) -> str:
        return f"AffineRootSystem({self.label!r})"

    # -- roots -----------------------------------------------------------
    def is_root(self, gamma: AffRealRoot) -> bool:
        return self.finite.is_root(gamma.theta)

    def is_positive(self, gamma: AffRealRoot) -> bool:
        return gamma.r > 0 or (gamma.r == 0 and self.finite.is_positive(gamma.theta))

    def negate(self, gamma: AffRealRoot) -> AffRealRoot:
        return AffRealRoot(self.finite.negate(gamma.theta), -gamma.r)

    def abs_root(self, gamma: AffRealRoot) -> AffRealRoot:
        return gamma if self.is_positive(gamma) else self.negate(gamma)

    def height(self, gamma: AffRealRoot) -> int:
        return sum(gamma.theta) + gamma.r * self.finite.dual_coxeter

    def depth(self, gamma: AffRealRoot) -> int:
        return abs(gamma.r)

    def sort_key(self, gamma: AffRealRoot):
        return (gamma.r, sum(gamma.theta), gamma.theta)

    def coroot(self, gamma: AffRealRoot) -> AffCoweight:
        return AffCoweight(self.finite.coroot(gamma.theta), 0, gamma.r)

    # -- coweights -------------------------------------------------------
    def pairing(self, mu: AffCoweight, gamma: AffRealRoot) -> int:
        return self.finite.pairing(mu.nu, gamma.theta) + mu.level * gamma.r

    aff_pairing = pairing

    def cw_add(self, a: AffCoweight, b: AffCoweight) -> AffCoweight:
        return AffCoweight(
            self.finite.cw_add(a.nu, b.nu), a.level + b.level, a.central + b.central
        )

    def cw_scale(self, k: int, a: AffCoweight) -> AffCoweight:
        return AffCoweight(self.finite.cw_scale(k, a.nu), k * a.level, k * a.central)

    def cw_neg(self, a: AffCoweight) -> AffCoweight:
        return self.cw_scale(-1, a)

    def coweight_magnitude(self, mu: AffCoweight) -> int:
        return max([abs(v) for v in mu.nu] + [abs(mu.level), abs(mu.central)])

    def weyl_magnitude(self, w: AffWeylElt) -> int:
        return max((abs(v) for v in self.finite.coroot_coords(w.lam)), default=0)

    def in_tits_cone(self, mu: AffCoweight) -> bool:
        if len(mu.nu) != self.rank:
            raise UsageError(f"{self.label}: expected {self.rank} coordinates, got {mu.nu}")
        return mu.level > 0 or (mu.level == 0 and not any(mu.nu))

    def two_ht(self, mu: AffCoweight) -> int:
        return self.finite.two_ht(mu.nu) + 2 * mu.central * self.finite.dual_coxeter

    @functools.lru_cache(maxsize=65536)
    def dominant_translate(self, mu: AffCoweight, cap: int = 10_000) -> TitsConeTag:
        return dominant_translate(self, mu, cap)

    def roots_below(self, mu: AffCoweight) -> List[AffRealRoot]:
        """Positive real roots gamma with <mu, gamma> < 0; finite inside the Tits cone."""
        if not self.in_tits_cone(mu):
            raise DomainError(f"{self.label}: {mu} is outside the Tits cone")
        if mu.level == 0:
            return []
        found = []
        for theta in self.finite.roots:
            p = _dot(mu.nu, theta)
            r_min = 0 if self.finite.is_positive(theta) else 1
            r_max = (-p - 1) // mu.level
            found.extend(AffRealRoot(theta, r) for r in range(r_min, r_max + 1))
        return found

    def positive_roots_in_box(self, depth: int) -> List[AffRealRoot]:
        found = []
        for r in range(0, depth + 1):
            for theta in self.finite.roots:
                if r > 0 or self.finite.is_positive(theta):
                    found.append(AffRealRoot(theta, r))
        return found

    # -- affine Weyl group ----------------------------------------------
    def reflection(self, gamma: AffRealRoot) -> AffWeylElt:
        """s_{theta + r delta} = t^{r theta^vee} s_theta."""
        theta_vee = self.finite.coroot(gamma.theta)
        return AffWeylElt(
            self.finite.cw_scale(gamma.r, theta_vee), self.finite.reflection(gamma.theta)
        )

    def simple_reflection(self, i: int) -> AffWeylElt:
        return self._simple_reflections[i]

    def translation(self, lam: Coweight) -> AffWeylElt:
        self.finite.coroot_coords(tuple(lam))
        return AffWeylElt(tuple(lam), self.finite.identity)

    def act_root(self, w: AffWeylElt, gamma: AffRealRoot) -> AffRealRoot:
        theta = w.u.act(gamma.theta)
        return AffRealRoot(theta, gamma.r + _dot(w.lam, theta))

    aff_act_root = act_root

    def act_cw(self, w: AffWeylElt, mu: AffCoweight) -> AffCoweight:
        nu = w.u.act_cw(mu.nu)
        lam_coords = self.finite.coroot_coords(w.lam)
        shifted = tuple(a - mu.level * b for a, b in zip(nu, w.lam))
        central = mu.central + _dot(nu, lam_coords) - mu.level * (_dot(lam_coords, w.lam) // 2)
        return AffCoweight(shifted, mu.level, central)

    aff_act_cw = act_cw

    def weyl_mult(self, a: AffWeylElt, b: AffWeylElt) -> AffWeylElt:
        return AffWeylElt(self.finite.cw_add(a.lam, a.u.act_cw(b.lam)), a.u * b.u)

    def weyl_inverse(self, a: AffWeylElt) -> AffWeylElt:
        u_inv = a.u.inverse()
        return AffWeylElt(self.finite.cw_neg(u_inv.act_cw(a.lam)), u_inv)

    @functools.lru_cache(maxsize=65536)
    def inv(self, w: AffWeylElt) -> FrozenSet[AffRealRoot]:
        """{gamma > 0 : w(gamma) < 0}, scanning r up to max |<lam, theta>| + 1."""
        bound = max(abs(_dot(w.lam, theta)) for theta in self.finite.roots) + 1
        found = set()
        for theta in self.finite.roots:
            r_min = 0 if self.finite.is_positive(theta) else 1
            for r in range(r_min, bound + 1):
                gamma = AffRealRoot(theta, r)
                if not self.is_positive(self.act_root(w, gamma)):
                    found.add(gamma)
        return frozenset(found)

    aff_inv = inv


@functools.lru_cache(maxsize=None)
def load_affine(label: str) -> AffineRootSystem:
    return AffineRootSystem(load_system(label))
