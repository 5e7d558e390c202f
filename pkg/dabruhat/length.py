"""Length functions on W_T and windowed inversion sets.

For x = pi^mu w in W_T,

    ell_eps(x) = 2ht(mu_+) + eps * (#{g in Inv(w^-1) : <mu,g> >= 0} - #{g in Inv(w^-1) : <mu,g> < 0})

and ell is ell_eps at eps = 1. Inversion sets of W_P elements are infinite,
so they are only ever enumerated inside a finite window S of positive ground
roots, using the explicit description of Inv(w^-1 pi^-mu) over each eta in S.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Set, Tuple

from .daweyl import DARoot, DoubleAffineWeyl, WTElement
from .errors import DomainError, UsageError

log = logging.getLogger(__name__)


class EpsLength(NamedTuple):
    """Value base + eps * epsilon in Z + Z epsilon; tuples order lexicographically."""

    base: int
    eps: int


@dataclass(frozen=True)
class Window:
    roots: FrozenSet

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __contains__(self, item) -> bool:
        return item in self.roots

    def closed_under(self, ground, w) -> bool:
        return all(ground.abs_root(ground.act_root(w, g)) in self.roots for g in self.roots)

    def contains(self, roots: Iterable) -> bool:
        return all(g in self.roots for g in roots)

    def close(self, ground, w) -> "Window":
        """Smallest superset closed under |w| for an involution w."""
        images = {ground.abs_root(ground.act_root(w, g)) for g in self.roots}
        return Window(frozenset(self.roots | images))

    def union(self, roots: Iterable) -> "Window":
        return Window(frozenset(self.roots | set(roots)))


# -- length functions -----------------------------------------------------
@functools.lru_cache(maxsize=131072)
def ell_eps(dw: DoubleAffineWeyl, x: WTElement) -> EpsLength:
    dw.require_member(x)
    g = dw.ground
    tag = g.dominant_translate(x.mu)
    eps = 0
    for gamma in g.inv(g.weyl_inverse(x.w)):
        eps += 1 if g.pairing(x.mu, gamma) >= 0 else -1
    return EpsLength(g.two_ht(tag.rep), eps)


def ell(dw: DoubleAffineWeyl, x: WTElement) -> int:
    value = ell_eps(dw, x)
    return value.base + value.eps


def ell_translation(ground, mu) -> int:
    """2ht(mu) - sum over gamma > 0 with <mu,gamma> < 0 of <mu, 2 gamma>."""
    if not ground.in_tits_cone(mu):
        raise DomainError(f"{mu} is outside the Tits cone")
    correction = sum(2 * ground.pairing(mu, gamma) for gamma in ground.roots_below(mu))
    return ground.two_ht(mu) - correction


def four_case_term(p: int, inside: bool) -> int:
    if p < 0:
        return -2 * p - 1 if inside else -2 * p
    return 1 if inside else 0


def ell_via_eq19(dw: DoubleAffineWeyl, x: WTElement) -> int:
    """Length as 2ht(mu) plus a four-case sum over the finitely many eta that contribute."""
    dw.require_member(x)
    g = dw.ground
    inversions = g.inv(g.weyl_inverse(x.w))
    support = set(g.roots_below(x.mu)) | set(inversions)
    total = g.two_ht(x.mu)
    for eta in support:
        total += four_case_term(g.pairing(x.mu, eta), eta in inversions)
    return total


# -- inversion sets of x^-1 = w^-1 pi^-mu ---------------------------------
def membership_range(p: int, inside: bool) -> range:
    """The m with eta[m] in Inv(w^-1 pi^-mu), given p = <mu, eta> and eta in Inv(w^-1)."""
    if p < 0:
        return range(p + 1, 0) if inside else range(p, 0)
    return range(0, p + 1) if inside else range(0, p)


def inv_member(dw: DoubleAffineWeyl, x: WTElement, root: DARoot) -> bool:
    """Whether root lies in Inv(x^-1) for x = pi^mu w, decided in closed form."""
    g = dw.ground
    inside = root.beta in g.inv(g.weyl_inverse(x.w))
    return root.n in membership_range(g.pairing(x.mu, root.beta), inside)


def inv_window_count(dw: DoubleAffineWeyl, window: Iterable, x: WTElement) -> int:
    """#Inv_S(x^-1): sum of |<mu,eta>| over S with the -1 / +1 / 0 corrections."""
    g = dw.ground
    inversions = g.inv(g.weyl_inverse(x.w))
    total = 0
    for eta in window:
        p = g.pairing(x.mu, eta)
        total += abs(p)
        if eta in inversions:
            total += -1 if p < 0 else 1
    return total


def inv_window(dw: DoubleAffineWeyl, window: Iterable, x: WTElement) -> Set[DARoot]:
    """Inv_S(x^-1) by testing signs of x^-1 directly over a padded range of m."""
    g = dw.ground
    x_inv = dw.inverse(x)
    found = set()
    for eta in window:
        p = g.pairing(x.mu, eta)
        for m in range(min(p, 0) - 2, max(p, 0) + 3):
            root = DARoot(eta, m)
            if dw.act(x_inv, root).sign < 0:
                found.add(root)
    return found


# -- the image of psi and the window of an edge -----------------------------
class _EdgeData(NamedTuple):
    w_beta: object
    shifted: object
    s_w_beta: object
    candidates: List


def _edge_data(dw: DoubleAffineWeyl, x: WTElement, root: DARoot) -> _EdgeData:
    g = dw.ground
    dw.require_member(x)
    w_beta = g.act_root(x.w, root.beta)
    shifted = g.cw_add(x.mu, g.cw_scale(root.n, g.coroot(w_beta)))
    if not g.in_tits_cone(shifted):
        raise DomainError(f"x * s_{root} leaves W_T")
    s_w_beta = g.reflection(w_beta)
    rotated = g.act_cw(s_w_beta, shifted)
    candidates = set(g.roots_below(rotated)) | set(g.inv(s_w_beta)) | set(g.roots_below(shifted))
    return _EdgeData(w_beta, shifted, s_w_beta, sorted(candidates, key=g.sort_key))


def _psi_scan(dw: DoubleAffineWeyl, x: WTElement, root: DARoot) -> Iterator[DARoot]:
    """Every theta[m] that can lie in the image of psi, before sign tests."""
    data = _edge_data(dw, x, root)
    g = dw.ground
    for theta in data.candidates:
        p = g.pairing(data.shifted, theta)
        for m in range(min(p, 0) - 1, max(p, 0) + 2):
            yield DARoot(theta, m)


def psi_image(dw: DoubleAffineWeyl, x: WTElement, root: DARoot) -> FrozenSet[DARoot]:
    """{eta : x^-1(eta) > 0, s x^-1(eta) < 0, x s x^-1(eta) < 0} for s = s_root."""
    refl = dw.reflection(root)
    x_inv = dw.inverse(x)
    y_inv = dw.mult(refl, x_inv)
    conj = dw.mult(dw.mult(x, refl), x_inv)
    found = set()
    for eta in _psi_scan(dw, x, root):
        if dw.act(y_inv, eta).sign > 0:
            continue
        if dw.act(x_inv, eta).sign < 0:
            continue
        if dw.act(conj, eta).sign > 0:
            continue
        found.add(eta)
    return frozenset(found)


def candidate_bounds(dw: DoubleAffineWeyl, x: WTElement, root: DARoot) -> Tuple[int, int]:
    """(R, N) bounding every pulled-back candidate: depth of beta <= R and |n| <= N."""
    g = dw.ground
    x_inv = dw.inverse(x)
    depth, height = g.depth(root.beta), abs(root.n)
    for eta in _psi_scan(dw, x, root):
        back = dw.act(x_inv, eta).root
        depth = max(depth, g.depth(back.beta))
        height = max(height, abs(back.n))
    return depth, height


def build_window(dw: DoubleAffineWeyl, x: WTElement, root: DARoot) -> Window:
    """Smallest S meeting the containment conditions, then closed under |s_{w(beta)}|."""
    data = _edge_data(dw, x, root)
    g = dw.ground
    roots = set(g.inv(data.s_w_beta))
    roots |= g.inv(g.weyl_inverse(x.w))
    roots |= {eta.beta for eta in psi_image(dw, x, root)}
    roots |= set(g.roots_below(x.mu))
    roots |= set(g.roots_below(data.shifted))
    window = Window(frozenset(roots)).close(g, data.s_w_beta)
    log.debug("window for %s along %s: %d roots", x, root, len(window))
    return window


def enlarge_window(dw: DoubleAffineWeyl, x: WTElement, root: DARoot, window: Window, depth: int) -> Window:
    g = dw.ground
    data = _edge_data(dw, x, root)
    return window.union(g.positive_roots_in_box(depth)).close(g, data.s_w_beta)


def window_conditions(dw: DoubleAffineWeyl, x: WTElement, root: DARoot, window: Window) -> Dict[str, bool]:
    data = _edge_data(dw, x, root)
    g = dw.ground
    return {
        "closed": window.closed_under(g, data.s_w_beta),
        "inversions": window.contains(g.inv(data.s_w_beta))
        and window.contains(g.inv(g.weyl_inverse(x.w))),
        "psi_supports": window.contains(eta.beta for eta in psi_image(dw, x, root)),
        "mu_negative": window.contains(g.roots_below(x.mu)),
        "shifted_negative": window.contains(g.roots_below(data.shifted)),
    }


# -- height identity ---------------------------------------------------------
def height_window(ground, beta, depth: int = 0) -> Window:
    s_beta = ground.reflection(beta)
    window = Window(frozenset(ground.inv(s_beta)))
    if depth:
        window = window.union(ground.positive_roots_in_box(depth))
    return window.close(ground, s_beta)


def height_identity_check(ground, beta, window: Window) -> bool:
    """2ht(beta^vee) == sum over S of <beta^vee, gamma>."""
    s_beta = ground.reflection(beta)
    if not window.contains(ground.inv(s_beta)) or not window.closed_under(ground, s_beta):
        raise UsageError(f"window is not admissible for {beta}")
    coroot = ground.coroot(beta)
    return ground.two_ht(coroot) == sum(ground.pairing(coroot, gamma) for gamma in window)
