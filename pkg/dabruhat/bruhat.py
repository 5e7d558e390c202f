"""Bruhat order on W_T: edges, Inv++, the phi/psi decomposition and chains.

An edge x -- x*s_{beta[n]} exists when both ends lie in W_T; it points up
when x(beta[n]) > 0. The length increment along an up edge is #Inv++, and
an up edge with increment >= 2 is refined into a verified three-step chain.
Order queries are searches over a budgeted rectangle of reflections and
return certificates, never bare booleans for the double-affine case.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .daweyl import DARoot, DARootRN, DoubleAffineWeyl, WTElement, sigma
from .errors import ChainError, DomainError, InvariantError, UsageError
from .length import Window, build_window, ell, ell_eps, inv_member, inv_window, psi_image

log = logging.getLogger(__name__)

UP = "up"
DOWN = "down"

# axis directions in the (r, n) plane; the slope -level pair is added per search
_RAY_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class Edge:
    x: WTElement
    gamma: DARoot
    direction: str
    target: WTElement


class Budget(NamedTuple):
    """Rectangle of candidate reflections: depth of the ground root <= r, |n| <= n."""

    r: int
    n: int

    def enlarged(self, factor: int = 2) -> "Budget":
        return Budget(factor * max(self.r, 1), factor * max(self.n, 1))


@dataclass(frozen=True)
class Chain:
    """x = z0 < z1 < ... along `steps`; `mirrored` marks a case chain found on the negated grid."""

    elements: Tuple[WTElement, ...]
    steps: Tuple[DARoot, ...]
    route: str = ""
    mirrored: bool = False
    notes: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def start(self) -> WTElement:
        return self.elements[0]

    @property
    def end(self) -> WTElement:
        return self.elements[-1]


class LeqResult(NamedTuple):
    verdict: str
    chain: Optional[Chain]
    budget: Budget


class CoverScan(NamedTuple):
    covers: Tuple[DARoot, ...]
    budget: Budget


class DeodharResult(NamedTuple):
    count: int
    bound: int
    verdict: str
    budget: Budget


class InversionDecomposition(NamedTuple):
    source: FrozenSet[DARoot]
    target: FrozenSet[DARoot]
    phi_image: FrozenSet[DARoot]
    psi_image: FrozenSet[DARoot]
    injective: bool
    disjoint: bool
    exact: bool


def _root_key(dw: DoubleAffineWeyl) -> Callable[[DARoot], tuple]:
    g = dw.ground

    def key(root: DARoot):
        return (g.height(root.beta), g.sort_key(root.beta), root.n)

    return key


# -- edges -------------------------------------------------------------------
def edge(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> Optional[Edge]:
    """The edge from x along s_gamma, or None when x*s_gamma leaves W_T."""
    dw.require_member(x)
    dw.check_root(gamma)
    target = dw.mult(x, dw.reflection(gamma))
    if not dw.is_member(target):
        return None
    direction = UP if dw.act(x, gamma).sign > 0 else DOWN
    return Edge(x, gamma, direction, target)


def _require_up(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> Edge:
    e = edge(dw, x, gamma)
    if e is None or e.direction != UP:
        raise UsageError(f"{gamma} does not give an up edge from {x}")
    return e


def default_budget(dw: DoubleAffineWeyl, *elements: WTElement) -> Budget:
    g = dw.ground
    size = max(
        (max(g.coweight_magnitude(e.mu), g.weyl_magnitude(e.w)) for e in elements), default=0
    )
    return Budget(2 + size, 2 + size)


def candidate_reflections(dw: DoubleAffineWeyl, budget: Budget) -> List[DARoot]:
    if budget.r < 0 or budget.n < 0:
        raise UsageError(f"budget must be non-negative, got {budget}")
    roots = dw.ground.positive_roots_in_box(budget.r)
    found = [DARoot(beta, n) for beta in roots for n in range(-budget.n, budget.n + 1)]
    return sorted(found, key=_root_key(dw))


# -- Inv++ and the phi / psi maps ------------------------------------------------
def inv_pp(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> FrozenSet[DARoot]:
    """Inv++: g in Inv(s_gamma) with x(g) > 0 and x(-s_gamma(g)) > 0.

    Enumerated as the pull-back of the image of psi, then every member is
    re-tested against the definition.
    """
    _require_up(dw, x, gamma)
    x_inv = dw.inverse(x)
    refl = dw.reflection(gamma)
    found = set()
    for eta in psi_image(dw, x, gamma):
        g = dw.act(x_inv, eta).root
        if dw.act(refl, g).sign > 0:
            raise InvariantError(f"{g} is not an inversion of s_{gamma}", {"x": repr(x)})
        if dw.act(x, g).sign < 0 or dw.act(x, dw.iota(gamma, g)).sign < 0:
            raise InvariantError(f"{g} fails the positivity conditions", {"x": repr(x)})
        found.add(g)
    if gamma not in found:
        raise InvariantError(
            f"Inv++ misses {gamma} itself", {"x": repr(x), "found": sorted(map(repr, found))}
        )
    return frozenset(found)


def phi(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot, eta: DARoot) -> DARoot:
    """eta if s x^-1 already makes it negative, otherwise its image under x s x^-1."""
    _require_up(dw, x, gamma)
    if not inv_member(dw, x, eta):
        raise UsageError(f"{eta} is not an inversion of x^-1 for x = {x}")
    refl = dw.reflection(gamma)
    x_inv = dw.inverse(x)
    if dw.act(dw.mult(refl, x_inv), eta).sign < 0:
        return eta
    image = dw.act(dw.mult(dw.mult(x, refl), x_inv), eta)
    if image.sign < 0:
        raise InvariantError(f"phi({eta}) came out negative", {"x": repr(x), "gamma": repr(gamma)})
    return image.root


def psi(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot, g: DARoot) -> DARoot:
    if g not in inv_pp(dw, x, gamma):
        raise UsageError(f"{g} is not in Inv++ of s_{gamma} at {x}")
    return dw.act(x, g).root


def decompose_inversions(
    dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot, window: Optional[Window] = None
) -> InversionDecomposition:
    e = _require_up(dw, x, gamma)
    window = window if window is not None else build_window(dw, x, gamma)
    source = frozenset(inv_window(dw, window, x))
    target = frozenset(inv_window(dw, window, e.target))
    pp = inv_pp(dw, x, gamma)
    phi_image = frozenset(phi(dw, x, gamma, eta) for eta in source)
    psi_image_ = frozenset(dw.act(x, g).root for g in pp)
    injective = len(phi_image) == len(source) and len(psi_image_) == len(pp)
    disjoint = not (phi_image & psi_image_)
    exact = (phi_image | psi_image_) == target
    return InversionDecomposition(source, target, phi_image, psi_image_, injective, disjoint, exact)


def decomposition_check(
    dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot, window: Optional[Window] = None
) -> bool:
    parts = decompose_inversions(dw, x, gamma, window)
    return parts.injective and parts.disjoint and parts.exact


def length_diff_check(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> bool:
    """ell(x s) - ell(x) == #Inv++; a down edge is checked from its upper end."""
    e = edge(dw, x, gamma)
    if e is None:
        raise UsageError(f"x * s_{gamma} leaves W_T for x = {x}")
    if e.direction == DOWN:
        return length_diff_check(dw, e.target, gamma)
    return ell(dw, e.target) - ell(dw, x) == len(inv_pp(dw, x, gamma))


def is_cover(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> bool:
    e = _require_up(dw, x, gamma)
    return ell(dw, e.target) - ell(dw, x) == 1


def covers_up(dw: DoubleAffineWeyl, x: WTElement, budget: Optional[Budget] = None) -> CoverScan:
    """Cover reflections above x inside the budget rectangle."""
    dw.require_member(x)
    budget = budget or default_budget(dw, x)
    base = ell(dw, x)
    covers = []
    for gamma in candidate_reflections(dw, budget):
        e = edge(dw, x, gamma)
        if e is not None and e.direction == UP and ell(dw, e.target) == base + 1:
            covers.append(gamma)
    return CoverScan(tuple(covers), budget)


# -- chains ----------------------------------------------------------------------
def verify_chain(dw: DoubleAffineWeyl, chain: Chain) -> bool:
    if len(chain.elements) != len(chain.steps) + 1:
        raise ChainError("chain has mismatched elements and steps", {"route": chain.route})
    lengths = [ell(dw, z) for z in chain.elements]
    for i, step in enumerate(chain.steps):
        e = edge(dw, chain.elements[i], step)
        diagnostics = {"route": chain.route, "index": i, "step": repr(step)}
        if e is None or e.direction != UP:
            raise ChainError(f"step {i} is not an up edge", diagnostics)
        if e.target != chain.elements[i + 1]:
            raise ChainError(f"step {i} does not land on the next element", diagnostics)
        if lengths[i + 1] <= lengths[i]:
            raise ChainError(f"length does not increase at step {i}", diagnostics)
    return True


def _build_chain(
    dw: DoubleAffineWeyl, x: WTElement, steps: Sequence[DARoot], target: WTElement, route: str
) -> Optional[Chain]:
    elements = [x]
    for step in steps:
        try:
            e = edge(dw, elements[-1], step)
        except DomainError:
            return None
        if e is None or e.direction != UP:
            return None
        elements.append(e.target)
    if elements[-1] != target:
        return None
    lengths = [ell(dw, z) for z in elements]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        return None
    return Chain(tuple(elements), tuple(steps), route)


def _largest_run(positive: Callable[[int], bool], cap: int, diagnostics: Dict) -> int:
    """Largest c >= 0 with positive(1), ..., positive(c) all true."""
    c = 0
    while positive(c + 1):
        c += 1
        if c > cap:
            raise ChainError("positivity run did not terminate", diagnostics)
    return c


def _rank_one_route(
    dw: DoubleAffineWeyl, x: WTElement, rn: DARootRN, points: FrozenSet[Tuple[int, int]]
) -> Tuple[str, List[Tuple[int, int]]]:
    """Pick the chain for an edge with sigma(r, n) > 0 all of whose Inv++ lies over one root.

    The sign of w(beta) does not matter: w(beta) < 0 moves the apex of the
    positive region from (a, b) to (a + 1, b - level), which the case split
    already covers.
    """
    b, r, n = rn
    level = x.mu.level
    cap = 4 * (abs(r) + abs(n) + dw.ground.coweight_magnitude(x.mu)) + 16
    diagnostics = {"x": repr(x), "root": repr(rn), "inv_pp": sorted(points)}

    def positive(s: int, m: int) -> bool:
        return dw.act(x, dw.from_rn(DARootRN(b, s, m))).sign > 0

    if sigma(r, n - 1) < 0:
        if r == 0:
            raise ChainError("case 1 reached with r = 0", diagnostics)
        if r > 0:
            return "case1-r>0", [(r - 1, n), (-1, n), (0, n)]
        if (r - 1, n) in points:
            c = _largest_run(lambda c: positive(r - c, n), cap, diagnostics)
            return "case1-r<0", [(r - c, n), (r, n), (r + c, n)]
        if r == -1:
            return "case1-r=-1", [(0, 0), (1, -1), (0, 0)]
        raise ChainError("case 1 with r < -1 and no neighbour in Inv++", diagnostics)
    if (r, n - 1) in points:
        if r >= 0:
            return "case2", [(r, n - 1), (r, -1), (r, 0)]
        # beta[r, 0] = -(beta + r delta) here, so the last step moves up to beta[r, 1]
        return "case2-r<0", [(r, n - 1), (r, 0), (r, 1)]
    for s, m in points:
        if m + level * s != n + level * r:
            raise ChainError(f"Inv++ point {(s, m)} is off the line of slope -{level}", diagnostics)
    c = _largest_run(lambda c: positive(r + c, n - c * level), cap, diagnostics)
    if c == 0:
        raise ChainError("case 3 found no positive point along the line", diagnostics)
    centre = (r + c, n - c * level)
    return "case3", [centre, (2 * centre[0] - r, 2 * centre[1] - n), centre]


def _rank_one_chain(
    dw: DoubleAffineWeyl, x: WTElement, rn: DARootRN, points: FrozenSet[Tuple[int, int]],
    target: WTElement,
) -> Tuple[Optional[Chain], str]:
    """Case chain for a rank-one edge, or None and the reason it failed.

    When sigma(r, n) < 0 the grid is mirrored through the origin:
    x s_{beta[0,0]} sends beta[s, m] where x sends beta[-s, -m] (off the
    origin), so the shape found for beta[-r, -n] is negated back onto x.
    """
    b = rn.beta_fin
    mirrored = sigma(rn.r, rn.n) < 0
    base, centre, grid = x, rn, points
    if mirrored:
        base = dw.mult(x, dw.reflection(dw.from_rn(DARootRN(b, 0, 0))))
        centre = DARootRN(b, -rn.r, -rn.n)
        grid = frozenset((-s, -m) for s, m in points)
    try:
        route, shape = _rank_one_route(dw, base, centre, grid)
    except ChainError as err:
        return None, f"rank-one dispatch: {err}"
    if mirrored:
        route += "-mirrored"
        shape = [(-s, -m) for s, m in shape]
    steps = [dw.from_rn(DARootRN(b, s, m)) for s, m in shape]
    chain = _build_chain(dw, x, steps, target, route)
    if chain is None:
        return None, f"{route} chain {shape} failed verification"
    return replace(chain, mirrored=mirrored), ""


def _search_points(rn: DARootRN, points: Iterable[Tuple[int, int]], level: int) -> List[Tuple[int, int]]:
    anchors = set(points) | {(rn.r, rn.n), (0, 0)}
    lo_r = min(p[0] for p in anchors) - 2
    hi_r = max(p[0] for p in anchors) + 2
    lo_n = min(p[1] for p in anchors) - 2
    hi_n = max(p[1] for p in anchors) + 2
    found = {(s, m) for s in range(lo_r, hi_r + 1) for m in range(lo_n, hi_n + 1)}
    reach = 2 * max(hi_r - lo_r, hi_n - lo_n) + 2
    directions = _RAY_DIRECTIONS + ((1, -level), (-1, level))
    for ds, dm in directions:
        for k in range(1, reach + 1):
            found.add((rn.r + k * ds, rn.n + k * dm))
    return sorted(found, key=lambda p: (abs(p[0] - rn.r) + abs(p[1] - rn.n), p))


def _fallback_search(
    dw: DoubleAffineWeyl, x: WTElement, rn: DARootRN, points, target: WTElement
) -> Optional[Chain]:
    """Last resort: try the three rank-one chain shapes over a neighbourhood of Inv++."""
    b = rn.beta_fin
    here = (rn.r, rn.n)
    candidates = _search_points(rn, points, x.mu.level)
    roots = {p: dw.from_rn(DARootRN(b, p[0], p[1])) for p in candidates}

    def root(p):
        return roots.get(p) or dw.from_rn(DARootRN(b, p[0], p[1]))

    up_from_x = [p for p in candidates if p != here and dw.act(x, roots[p]).sign > 0]
    for p in up_from_x:
        rotated = (2 * p[0] - here[0], 2 * p[1] - here[1])
        chain = _build_chain(dw, x, [root(p), root(rotated), root(p)], target, "fallback-rotate")
        if chain:
            return chain
    for p in up_from_x:
        far = (2 * here[0] - p[0], 2 * here[1] - p[1])
        chain = _build_chain(dw, x, [root(p), root(here), root(far)], target, "fallback-reflect")
        if chain:
            return chain
    down_at_target = [p for p in candidates if dw.act(target, roots[p]).sign < 0]
    for p, q in itertools.product(up_from_x, down_at_target):
        middle = (p[0] + q[0] - here[0], p[1] + q[1] - here[1])
        chain = _build_chain(dw, x, [root(p), root(middle), root(q)], target, "fallback-triangle")
        if chain:
            return chain
    return None


def shorten_chain(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> Chain:
    """A verified chain x < z1 < z2 < x*s_gamma for an up edge that is not a cover.

    A chain from the neighbourhood search carries in `notes` why the case
    chains did not apply.
    """
    if not dw.ground.is_affine:
        raise UsageError("shorten_chain needs an affine ground datum")
    e = _require_up(dw, x, gamma)
    pp = inv_pp(dw, x, gamma)
    if len(pp) < 2:
        raise UsageError(f"{gamma} gives a cover of {x}; there is nothing to shorten")
    target = e.target
    rn = dw.to_rn(gamma)
    notes: List[str] = []

    # another root in Inv++ over a different finite root
    escapes = [g for g in sorted(pp, key=_root_key(dw)) if dw.to_rn(g).beta_fin != rn.beta_fin]
    for g in escapes:
        middle = dw.act(dw.reflection(g), gamma).root
        chain = _build_chain(dw, x, [g, middle, g], target, "distinct-root")
        if chain:
            log.debug("shortened %s along %s via %s", x, gamma, g)
            return chain
    if escapes:
        notes.append(f"none of {len(escapes)} distinct-root chains verified")

    points = frozenset(
        (p.r, p.n) for p in map(dw.to_rn, pp) if p.beta_fin == rn.beta_fin
    )
    if len(points) > 1:
        chain, note = _rank_one_chain(dw, x, rn, points, target)
        if chain is not None:
            log.debug("shortened %s along %s via %s", x, gamma, chain.route)
            return chain
        notes.append(note)

    chain = _fallback_search(dw, x, rn, points, target)
    if chain is None:
        diagnostics = {"x": repr(x), "gamma": repr(gamma), "inv_pp": sorted(map(repr, pp))}
        raise ChainError("no three-step chain found", {**diagnostics, "notes": notes})
    log.warning("%s along %s fell back to %s: %s", x, gamma, chain.route, "; ".join(notes))
    return replace(chain, notes=tuple(notes))


# -- budgeted order queries --------------------------------------------------------
@dataclass
class _Node:
    depth: int
    parent: Optional[WTElement] = None
    step: Optional[DARoot] = None


@dataclass
class Reach:
    """Elements reached from `origin` by budgeted edges, each with a longest-chain parent."""

    origin: WTElement
    budget: Budget
    upward: bool
    nodes: Dict[WTElement, _Node] = field(default_factory=dict)

    def __contains__(self, item: WTElement) -> bool:
        return item in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def elements(self) -> List[WTElement]:
        return list(self.nodes)

    def chain_to(self, y: WTElement) -> Chain:
        if y not in self.nodes:
            raise UsageError(f"{y} was not reached from {self.origin}")
        path, steps = [y], []
        node = self.nodes[y]
        while node.parent is not None:
            steps.append(node.step)
            path.append(node.parent)
            node = self.nodes[node.parent]
        if self.upward:
            path.reverse()
            steps.reverse()
        return Chain(tuple(path), tuple(steps), "up-set" if self.upward else "down-set")


def _explore(
    dw: DoubleAffineWeyl, origin: WTElement, bound: int, budget: Budget, upward: bool
) -> Reach:
    dw.require_member(origin)
    candidates = candidate_reflections(dw, budget)
    key = _root_key(dw)
    sign = 1 if upward else -1
    reach = Reach(origin, budget, upward, {origin: _Node(0)})
    counter = itertools.count()
    heap = [(sign * ell(dw, origin), next(counter), origin)]
    while heap:
        _, _, z = heapq.heappop(heap)
        depth = reach.nodes[z].depth + 1
        base = ell(dw, z)
        moves = []
        for gamma in candidates:
            e = edge(dw, z, gamma)
            if e is None or (e.direction == UP) != upward:
                continue
            size = ell(dw, e.target)
            if (upward and size > bound) or (not upward and size < bound):
                continue
            moves.append((abs(size - base), key(gamma), gamma, e.target, size))
        moves.sort(key=lambda m: (m[0], m[1]))
        for _, _, gamma, t, size in moves:
            node = reach.nodes.get(t)
            if node is None:
                reach.nodes[t] = _Node(depth, z, gamma)
                heapq.heappush(heap, (sign * size, next(counter), t))
            elif depth > node.depth:
                reach.nodes[t] = _Node(depth, z, gamma)
    return reach


def up_set(dw: DoubleAffineWeyl, x: WTElement, max_ell: int, budget: Budget) -> Reach:
    """Everything above x of length <= max_ell reachable by edges in the budget."""
    return _explore(dw, x, max_ell, budget, upward=True)


def down_set(dw: DoubleAffineWeyl, y: WTElement, min_ell: int, budget: Budget) -> Reach:
    return _explore(dw, y, min_ell, budget, upward=False)


def leq(dw: DoubleAffineWeyl, x: WTElement, y: WTElement, budget: Optional[Budget] = None) -> LeqResult:
    """Three-valued x <= y with a chain certificate when the answer is yes.

    Over a finite ground the reflections s_{beta[n]} along a chain up to y
    satisfy |n| <= ell(y) + 1, so that rectangle is exhaustive and "no" is final.
    """
    dw.require_member(x)
    dw.require_member(y)
    finite = not dw.ground.is_affine
    if finite:
        budget = Budget(0, ell(dw, y) + 1)
    else:
        budget = budget or default_budget(dw, x, y)
    if x == y:
        return LeqResult("yes", Chain((x,), (), "trivial"), budget)
    if ell(dw, y) <= ell(dw, x):
        return LeqResult("no", None, budget)
    reach = up_set(dw, x, ell(dw, y), budget)
    if y in reach:
        return LeqResult("yes", reach.chain_to(y), budget)
    if finite:
        return LeqResult("no", None, budget)
    log.warning("leq(%s, %s) inconclusive within budget %s", x, y, budget)
    return LeqResult("inconclusive", None, budget)


def deodhar_count(
    dw: DoubleAffineWeyl,
    x: WTElement,
    y: WTElement,
    z: WTElement,
    budget: Optional[Budget] = None,
) -> DeodharResult:
    """Count beta[n] in the budget with x <= y*s_{beta[n]} <= z and compare with ell(z) - ell(x)."""
    budget = budget or default_budget(dw, x, y, z)
    low, high = ell(dw, x), ell(dw, z)
    interval = set(up_set(dw, x, high, budget).nodes) & set(down_set(dw, z, low, budget).nodes)
    if y not in interval:
        raise UsageError(f"x <= y <= z is not certified within budget {budget}")
    count = 0
    for gamma in candidate_reflections(dw, budget):
        w = dw.mult(y, dw.reflection(gamma))
        if dw.is_member(w) and w in interval:
            count += 1
    bound = high - low
    verdict = "confirmed" if count >= bound else "inconclusive"
    if verdict == "inconclusive":
        log.debug("deodhar count %d below %d within budget %s", count, bound, budget)
    return DeodharResult(count, bound, verdict, budget)


def settle_deodhar(
    dw: DoubleAffineWeyl,
    x: WTElement,
    y: WTElement,
    z: WTElement,
    budget: Optional[Budget] = None,
) -> DeodharResult:
    """deodhar_count, retried once on the doubled rectangle when the count falls short."""
    result = deodhar_count(dw, x, y, z, budget)
    if result.verdict == "confirmed":
        return result
    result = deodhar_count(dw, x, y, z, result.budget.enlarged())
    if result.verdict == "inconclusive":
        log.warning(
            "deodhar count %d below %d within budget %s", result.count, result.bound, result.budget
        )
    return result


def eps_increases(dw: DoubleAffineWeyl, x: WTElement, gamma: DARoot) -> bool:
    """ell_eps strictly increases (lexicographically) along an up edge."""
    e = _require_up(dw, x, gamma)
    return ell_eps(dw, e.target) > ell_eps(dw, x)
