"""Double-affine roots and the semigroup W_T = T x| W.

A double-affine root beta[n] = sgn(n)(beta + n pi) is stored as
`DARoot(beta, n)` with `beta` a positive real root of the ground datum.
Elements pi^mu w of W_P are `WTElement(mu, w)`; membership in W_T is the
predicate "mu lies in the Tits cone" and is never implied by the type.

Everything here is generic over the ground datum (`AffineRootSystem` for
the double-affine case, `FiniteRootSystem` for the single-affine one). The
(r, n) indexing beta[r, n] only exists over an affine ground.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Any, NamedTuple, Tuple

from .affine import AffRealRoot
from .errors import DomainError, InvariantError, UsageError

log = logging.getLogger(__name__)


class DARoot(NamedTuple):
    beta: Any
    n: int


class SignedDARoot(NamedTuple):
    root: DARoot
    sign: int


class DARootRN(NamedTuple):
    beta_fin: Tuple[int, ...]
    r: int
    n: int


class SignedRN(NamedTuple):
    root: DARootRN
    sign: int


class XDecomposition(NamedTuple):
    """x = pi^{level Lambda_0} pi^{mu_fin} t^{nu} w (central part pi^{kc} split off)."""

    level: int
    mu_fin: Tuple[int, ...]
    nu: Tuple[int, ...]
    w: Any
    central: int


@dataclass(frozen=True)
class WTElement:
    mu: Any
    w: Any


def sgn(n: int) -> int:
    return 1 if n >= 0 else -1


def sigma(r: int, n: int) -> int:
    """+1 iff n > 0, or n = 0 and r >= 0."""
    return 1 if n > 0 or (n == 0 and r >= 0) else -1


class DoubleAffineWeyl:
    """W_P over a ground datum, with its action on double-affine roots."""

    def __init__(self, ground):
        self.ground = ground
        self.identity = WTElement(ground.zero_coweight, ground.identity)

    def __repr__(self) -> str:
        kind = "affine" if self.ground.is_affine else "finite"
        return f"DoubleAffineWeyl({self.ground.label!r}, {kind})"

    # -- roots -----------------------------------------------------------
    def raw(self, root: DARoot) -> Tuple[Any, int]:
        """(ground root, pi-coefficient) of the value of beta[n]; the coefficient is >= 0."""
        if root.n >= 0:
            return root.beta, root.n
        return self.ground.negate(root.beta), -root.n

    def normalize(self, gamma, n: int) -> SignedDARoot:
        """Write gamma + n pi as sign * beta[m] with beta > 0."""
        if self.ground.is_positive(gamma):
            return SignedDARoot(DARoot(gamma, n), 1 if n >= 0 else -1)
        return SignedDARoot(DARoot(self.ground.negate(gamma), -n), 1 if n > 0 else -1)

    def check_root(self, root: DARoot) -> DARoot:
        if not self.ground.is_root(root.beta) or not self.ground.is_positive(root.beta):
            raise DomainError(f"{root.beta} is not a positive real root of {self.ground.label}")
        return root

    # -- W_P -------------------------------------------------------------
    def is_member(self, x: WTElement) -> bool:
        return self.ground.in_tits_cone(x.mu)

    def require_member(self, x: WTElement) -> WTElement:
        if not self.is_member(x):
            raise DomainError(f"{x} is not in W_T (translation part outside the Tits cone)")
        return x

    def mult(self, x: WTElement, y: WTElement) -> WTElement:
        g = self.ground
        return WTElement(g.cw_add(x.mu, g.act_cw(x.w, y.mu)), g.weyl_mult(x.w, y.w))

    def inverse(self, x: WTElement) -> WTElement:
        g = self.ground
        w_inv = g.weyl_inverse(x.w)
        return WTElement(g.cw_neg(g.act_cw(w_inv, x.mu)), w_inv)

    @functools.lru_cache(maxsize=65536)
    def reflection(self, root: DARoot) -> WTElement:
        """s_{beta[n]} = pi^{n beta^vee} s_beta; usually not in W_T."""
        g = self.ground
        return WTElement(g.cw_scale(root.n, g.coroot(root.beta)), g.reflection(root.beta))

    da_reflection = reflection

    def act(self, x: WTElement, root: DARoot) -> SignedDARoot:
        """pi^mu w (beta + n pi) = w(beta) + (n + <mu, w(beta)>) pi, normalized."""
        g = self.ground
        gamma, n = self.raw(root)
        image = g.act_root(x.w, gamma)
        return self.normalize(image, n + g.pairing(x.mu, image))

    da_act = act

    def iota(self, root: DARoot, g: DARoot) -> DARoot:
        """-s_{root}(g) for g in Inv(s_root)."""
        image = self.act(self.reflection(root), g)
        if image.sign > 0:
            raise UsageError(f"{g} is not an inversion of s_{root}")
        return image.root

    # -- (r, n) indexing over an affine ground --------------------------
    def _require_affine(self) -> None:
        if not self.ground.is_affine:
            raise UsageError("(r, n) indexing needs an affine ground datum")

    def from_rn(self, rn: DARootRN) -> DARoot:
        self._require_affine()
        if not self.ground.finite.is_positive(rn.beta_fin):
            raise DomainError(f"{rn.beta_fin} is not a positive finite root")
        gamma = AffRealRoot(tuple(rn.beta_fin), rn.r)
        if sigma(rn.r, rn.n) > 0:
            signed = self.normalize(gamma, rn.n)
        else:
            signed = self.normalize(self.ground.negate(gamma), -rn.n)
        if signed.sign < 0:
            raise InvariantError(f"beta[r,n] normalized to a negative root: {rn}")
        return signed.root

    def to_rn(self, root: DARoot) -> DARootRN:
        self._require_affine()
        gamma, n = self.raw(root)
        if self.ground.finite.is_positive(gamma.theta):
            return DARootRN(gamma.theta, gamma.r, n)
        return DARootRN(self.ground.finite.negate(gamma.theta), -gamma.r, -n)

    def decompose(self, x: WTElement) -> XDecomposition:
        self._require_affine()
        return XDecomposition(x.mu.level, x.mu.nu, x.w.lam, x.w.u, x.mu.central)

    def rn_act(self, x: WTElement, rn: DARootRN) -> SignedRN:
        """Action on beta[s, m] through a = -<nu, w(beta)>, b = -<mu, w(beta)>."""
        level, mu_fin, nu, w, _ = self.decompose(x)
        finite = self.ground.finite
        w_beta = w.act(rn.beta_fin)
        a = -finite.pairing(nu, w_beta)
        b = -finite.pairing(mu_fin, w_beta)
        s, m = rn.r, rn.n
        if finite.is_positive(w_beta):
            p, q = s - a, m - b + level * (s - a)
            return SignedRN(DARootRN(w_beta, p, q), sigma(s, m) * sigma(p, q))
        p, q = a - s, b - m + level * (a - s)
        return SignedRN(DARootRN(finite.negate(w_beta), p, q), -sigma(s, m) * sigma(p, q))

    def rn_rotate(self, center: DARootRN, gamma: DARootRN) -> DARootRN:
        """beta[s, m] -> beta[2r - s, 2n - m]: the rotation |s_center| on its own line."""
        if tuple(center.beta_fin) != tuple(gamma.beta_fin):
            raise UsageError(f"{gamma} does not lie over {center.beta_fin}")
        return DARootRN(gamma.beta_fin, 2 * center.r - gamma.r, 2 * center.n - gamma.n)

    def rn_pairing(self, a: DARootRN, b: DARootRN) -> int:
        finite = self.ground.finite
        return (
            sigma(a.r, a.n)
            * sigma(b.r, b.n)
            * finite.pairing(finite.coroot(a.beta_fin), b.beta_fin)
        )

    def rn_value(self, rn: DARootRN) -> Tuple[Tuple[int, ...], int, int]:
        """The vector sigma(r,n) * (beta, r, n)."""
        sg = sigma(rn.r, rn.n)
        return tuple(sg * v for v in rn.beta_fin), sg * rn.r, sg * rn.n

    def rn_from_value(self, value: Tuple[Tuple[int, ...], int, int]) -> SignedRN:
        theta, r, n = value
        finite = self.ground.finite
        if finite.is_positive(theta):
            return SignedRN(DARootRN(tuple(theta), r, n), sigma(r, n))
        if not finite.is_root(theta):
            raise DomainError(f"{theta} is not a finite root")
        return SignedRN(DARootRN(finite.negate(theta), -r, -n), -sigma(-r, -n))
