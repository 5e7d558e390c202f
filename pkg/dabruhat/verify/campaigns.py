"""Verification campaigns.

Each check derives both sides of an identity along independent code paths
(closed form against enumeration, or engine against oracle) and turns every
instance into one report record. Instances fan out over a process pool in
index order; every worker rebuilds the ground datum once.
"""
from __future__ import annotations

import logging
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..bruhat import (
    Budget,
    decomposition_check,
    default_budget,
    eps_increases,
    inv_pp,
    is_cover,
    length_diff_check,
    leq,
    settle_deodhar,
    shorten_chain,
    up_set,
    verify_chain,
)
from ..daweyl import DARoot, DARootRN, WTElement, sigma
from ..errors import ConfigError, DabruError, InvariantError
from ..length import (
    build_window,
    candidate_bounds,
    ell,
    ell_eps,
    ell_via_eq19,
    enlarge_window,
    height_identity_check,
    height_window,
    inv_member,
    inv_window,
    inv_window_count,
    window_conditions,
)
from ..oracle import CoxeterGroup, brute_interval, brute_inv_pp
from ..utils import format_element, format_root, load_weyl
from .report import FAIL, INCONCLUSIVE, PASS, Report, record
from .sampling import instance_rng, random_element, sample_edge, sample_triple

log = logging.getLogger(__name__)

# pairs compared by the single-affine sweep stay this far below --max-length
PAIR_SLACK = 2
DEFAULT_SWEEP = {"A1": 10, "A2": 8}


def _ground_root_text(ground, beta) -> str:
    if ground.is_affine:
        return f"[{','.join(map(str, beta.theta))}]{beta.r:+d}d"
    return f"[{','.join(map(str, beta))}]"


def _membership_agrees(dw, x: WTElement, depth: int = 1, spread: int = 3) -> bool:
    """Closed-form membership in Inv(x^-1) against the sign of x^-1 on a small box."""
    x_inv = dw.inverse(x)
    for beta in dw.ground.positive_roots_in_box(depth):
        for m in range(-spread, spread + 1):
            root = DARoot(beta, m)
            if inv_member(dw, x, root) != (dw.act(x_inv, root).sign < 0):
                return False
    return True


def _four_case_agrees(dw, *elements: WTElement) -> bool:
    return all(ell_via_eq19(dw, x) == ell(dw, x) for x in elements)


class Check:
    """One campaign: `indices()` lists the instances, `run(index)` yields a record."""

    name = ""
    anchor = ""
    ground_kind = "any"

    def __init__(self, config):
        self.config = config
        if self.ground_kind == "finite":
            finite = True
        elif self.ground_kind == "affine":
            if config.finite:
                raise ConfigError(f"verify {self.name} needs an affine ground")
            finite = False
        else:
            finite = config.finite
        self.dw = load_weyl(config.ground, finite)
        self.ground = self.dw.ground
        # --budget-r / --budget-n; None means a default rectangle per instance
        self.budget: Optional[Budget] = config.budget()

    def indices(self) -> range:
        return range(self.config.samples)

    def rng(self, index: int) -> np.random.Generator:
        return instance_rng(self.config.seed, index)

    def fmt(self, x: WTElement) -> str:
        return format_element(self.dw, x)

    def fmt_root(self, root: DARoot) -> str:
        return format_root(self.dw, root)

    def evaluate(self, index: int, inputs: Dict[str, Any]) -> Tuple[str, Dict[str, Any]]:
        raise NotImplementedError

    def run(self, index: int) -> Dict[str, Any]:
        inputs: Dict[str, Any] = {}
        try:
            status, outputs = self.evaluate(index, inputs)
        except InvariantError as err:
            log.error("%s #%d: %s", self.name, index, err)
            return record(self.name, index, self.anchor, FAIL, inputs, {}, error=str(err),
                          diagnostics=err.diagnostics)
        except DabruError as err:
            log.error("%s #%d: %s", self.name, index, err)
            return record(self.name, index, self.anchor, FAIL, inputs, {}, error=str(err))
        if status == FAIL:
            log.error("%s #%d failed: %s", self.name, index, inputs)
        return record(self.name, index, self.anchor, status, inputs, outputs)


class LengthDiffCheck(Check):
    name = "length-diff"
    anchor = "ell(x s) - ell(x) = #Inv++ along up edges"
    brute_every = 10

    def worked_instance(self) -> Dict[str, Any]:
        """x = pi^d and beta[0,1] over affine A1: five roots in Inv++."""
        dw, g = self.dw, self.ground
        x = WTElement(g.d, g.identity)
        gamma = dw.from_rn(DARootRN((1,), 0, 1))
        pp = inv_pp(dw, x, gamma)
        brute = brute_inv_pp(dw, x, gamma, 6, 6)
        y = dw.mult(x, dw.reflection(gamma))
        ok = len(pp) == 5 and brute == set(pp) and ell(dw, y) == 5
        return {"inv_pp": sorted(self.fmt_root(r) for r in pp), "ell_y": ell(dw, y), "ok": ok}

    def evaluate(self, index, inputs):
        dw = self.dw
        pair = sample_edge(dw, self.rng(index))
        if pair is None:
            return INCONCLUSIVE, {"reason": "no edge sampled"}
        x, gamma = pair
        inputs.update(x=self.fmt(x), root=self.fmt_root(gamma))
        y = dw.mult(x, dw.reflection(gamma))
        pp = inv_pp(dw, x, gamma)
        outputs = {
            "ell_x": ell(dw, x),
            "ell_y": ell(dw, y),
            "inv_pp": len(pp),
            "ell_eps_x": list(ell_eps(dw, x)),
            "ell_eps_y": list(ell_eps(dw, y)),
            "eps_increases": eps_increases(dw, x, gamma),
            "four_case": _four_case_agrees(dw, x, y),
            "membership": _membership_agrees(dw, x) and _membership_agrees(dw, y),
        }
        ok = outputs["ell_y"] - outputs["ell_x"] == len(pp) >= 1
        ok = ok and outputs["eps_increases"] and outputs["four_case"] and outputs["membership"]
        if index % self.brute_every == 0:
            depth, height = self.budget or default_budget(dw, x, y)
            need = candidate_bounds(dw, x, gamma)
            brute = brute_inv_pp(dw, x, gamma, max(depth, need[0]), max(height, need[1]))
            outputs["brute_agrees"] = brute == set(pp)
            ok = ok and outputs["brute_agrees"]
        if index == 0 and self.ground.is_affine and self.ground.label == "A1":
            outputs["worked"] = self.worked_instance()
            ok = ok and outputs["worked"]["ok"]
        return (PASS if ok else FAIL), outputs


class PhiPsiCheck(Check):
    name = "phipsi"
    anchor = "Inv_S((x s)^-1) = im(phi) disjoint-union im(psi)"

    def evaluate(self, index, inputs):
        dw = self.dw
        pair = sample_edge(dw, self.rng(index))
        if pair is None:
            return INCONCLUSIVE, {"reason": "no edge sampled"}
        x, gamma = pair
        inputs.update(x=self.fmt(x), root=self.fmt_root(gamma))
        y = dw.mult(x, dw.reflection(gamma))
        window = build_window(dw, x, gamma)
        depth = max((self.ground.depth(b) for b in window), default=0) + 1
        enlarged = enlarge_window(dw, x, gamma, window, depth)
        conditions = window_conditions(dw, x, gamma, window)
        outputs = {"window": len(window), "enlarged": len(enlarged), "conditions": conditions}
        ok = all(conditions.values())
        for label, s in (("minimal", window), ("enlarged", enlarged)):
            outputs[label + "_decomposition"] = decomposition_check(dw, x, gamma, s)
            outputs[label + "_counts"] = all(
                inv_window_count(dw, s, z) == len(inv_window(dw, s, z)) for z in (x, y)
            )
            ok = ok and outputs[label + "_decomposition"] and outputs[label + "_counts"]
        return (PASS if ok else FAIL), outputs


class HeightCheck(Check):
    name = "height"
    anchor = "2ht(beta^vee) = sum of <beta^vee, gamma> over an admissible window"
    max_depth = 3

    def __init__(self, config):
        super().__init__(config)
        g = self.ground
        self.roots = sorted(g.positive_roots_in_box(self.max_depth), key=g.sort_key)

    def indices(self):
        return range(len(self.roots))

    def evaluate(self, index, inputs):
        g = self.ground
        beta = self.roots[index]
        inputs["root"] = _ground_root_text(g, beta)
        minimal = height_window(g, beta)
        enlarged = height_window(g, beta, g.depth(beta) + 1)
        outputs = {
            "two_ht": g.two_ht(g.coroot(beta)),
            "minimal": height_identity_check(g, beta, minimal),
            "enlarged": height_identity_check(g, beta, enlarged),
            "window": len(minimal),
        }
        return (PASS if outputs["minimal"] and outputs["enlarged"] else FAIL), outputs


class RotationCheck(Check):
    """sigma, the rotation law, the (r,n) reflection formula and rn_act on a grid."""

    name = "rotation"
    anchor = "(r,n) indexing: sigma, rotation, reflection formula, x-action"
    ground_kind = "affine"
    spread = 4

    def __init__(self, config):
        super().__init__(config)
        k = self.spread
        finite = self.ground.finite
        self.grid = [(s, m) for s in range(-k, k + 1) for m in range(-k, k + 1)]
        self.centres = [DARootRN(b, r, n) for b in finite.positive_roots for r, n in self.grid]

    def indices(self):
        return range(len(self.centres))

    @staticmethod
    def _vector(value) -> Tuple[int, ...]:
        return tuple(value[0]) + (value[1], value[2])

    def evaluate(self, index, inputs):
        dw = self.dw
        finite = self.ground.finite
        centre = self.centres[index]
        x = random_element(dw, self.rng(index))
        inputs.update(centre=list(centre.beta_fin) + [centre.r, centre.n], x=self.fmt(x))
        r, n = centre.r, centre.n
        flags = {
            "sigma": (r, n) == (0, 0) or sigma(-r, -n) == -sigma(r, n),
            "rotation": True,
            "reflection": True,
            "rn_act": True,
            "monotone": True,
        }
        refl = dw.reflection(dw.from_rn(centre))
        centre_vec = self._vector(dw.rn_value(centre))
        for theta in finite.positive_roots:
            for s, m in self.grid:
                rn = DARootRN(theta, s, m)
                root = dw.from_rn(rn)
                image = dw.act(refl, root)
                if theta == centre.beta_fin:
                    flags["rotation"] &= dw.to_rn(image.root) == dw.rn_rotate(centre, rn)
                k = dw.rn_pairing(rn, centre)
                expected = tuple(a - k * b for a, b in zip(self._vector(dw.rn_value(rn)), centre_vec))
                got = tuple(image.sign * v for v in self._vector(dw.rn_value(dw.to_rn(image.root))))
                flags["reflection"] &= got == expected
                direct = dw.act(x, root)
                via = dw.rn_act(x, rn)
                flags["rn_act"] &= via.root == dw.to_rn(direct.root) and via.sign == direct.sign
                if theta == centre.beta_fin and sigma(s, m) > 0 and direct.sign > 0:
                    flags["monotone"] &= all(
                        dw.act(x, dw.from_rn(DARootRN(theta, s + i, m + j))).sign > 0
                        for i in range(3)
                        for j in range(3)
                    )
        return (PASS if all(flags.values()) else FAIL), flags


class SingleAffineCheck(Check):
    """Finite ground against the affine Weyl group as a Coxeter group."""

    name = "single-affine"
    anchor = "finite ground: ell and Bruhat order are the Coxeter ones"
    ground_kind = "finite"
    leq_pairs = 4

    def __init__(self, config):
        super().__init__(config)
        label = self.ground.label
        self.max_length = config.max_length or DEFAULT_SWEEP.get(label, 6)
        self.pair_length = max(self.max_length - PAIR_SLACK, 0)
        self.coxeter = CoxeterGroup(self.ground)
        self.points = [
            (e, length, self.coxeter.identify(self.dw, e))
            for e, length in self.coxeter.elements_up_to(self.max_length)
        ]

    def indices(self):
        return range(len(self.points))

    def evaluate(self, index, inputs):
        dw, cox = self.dw, self.coxeter
        e, length, x = self.points[index]
        inputs.update(word=str(e), x=self.fmt(x))
        outputs = {
            "cox_length": cox.cox_length(e),
            "ell": ell(dw, x),
            "four_case": _four_case_agrees(dw, x),
            "lattice": bool(np.array_equal(cox.lattice_image(dw, x), cox.matrix(e))),
        }
        ok = outputs["cox_length"] == outputs["ell"] == length and outputs["four_case"]
        ok = ok and outputs["lattice"]
        if length <= self.pair_length:
            bound = self.pair_length
            reach = up_set(dw, x, bound, Budget(0, bound + 1))
            mismatches = [
                str(b)
                for b, size, y in self.points
                if size <= bound and (y in reach) != cox.cox_leq(e, b)
            ]
            outputs["pairs_mismatched"] = mismatches
            # the public query, whose "no" is final over a finite ground
            longer = [(b, y) for b, size, y in self.points if length < size <= bound]
            leq_mismatches = []
            for b, y in longer[: self.leq_pairs]:
                expected = "yes" if cox.cox_leq(e, b) else "no"
                if leq(dw, x, y).verdict != expected:
                    leq_mismatches.append(str(b))
            outputs["leq_checked"] = min(len(longer), self.leq_pairs)
            outputs["leq_mismatched"] = leq_mismatches
            ok = ok and not mismatches and not leq_mismatches
        return (PASS if ok else FAIL), outputs


class CoversCheck(Check):
    """Every instance shortens one non-cover edge and checks the interval of one cover."""

    name = "covers"
    anchor = "covers are exactly the edges with ell-difference 1"
    ground_kind = "affine"
    max_gap = 6

    def _shorten(self, rng, inputs) -> Tuple[str, Dict[str, Any]]:
        dw = self.dw
        pair = sample_edge(dw, rng, min_gap=2, max_gap=self.max_gap)
        if pair is None:
            return INCONCLUSIVE, {"reason": "no edge with ell-difference >= 2 sampled"}
        x, gamma = pair
        inputs["chain"] = {"x": self.fmt(x), "root": self.fmt_root(gamma)}
        chain = shorten_chain(dw, x, gamma)
        verify_chain(dw, chain)
        steps_ok = all(
            length_diff_check(dw, z, step) for z, step in zip(chain.elements, chain.steps)
        )
        outputs = {
            "route": chain.route,
            "mirrored": chain.mirrored,
            "notes": list(chain.notes),
            "steps": [self.fmt_root(s) for s in chain.steps],
            "gaps": [ell(dw, b) - ell(dw, a) for a, b in zip(chain.elements, chain.elements[1:])],
            "is_cover": is_cover(dw, x, gamma),
        }
        ok = steps_ok and not outputs["is_cover"] and len(inv_pp(dw, x, gamma)) >= 2
        return (PASS if ok else FAIL), outputs

    def _cover(self, rng, inputs) -> Tuple[str, Dict[str, Any]]:
        dw = self.dw
        pair = sample_edge(dw, rng, min_gap=1, max_gap=1)
        if pair is None:
            return INCONCLUSIVE, {"reason": "no cover sampled"}
        x, gamma = pair
        inputs["cover"] = {"x": self.fmt(x), "root": self.fmt_root(gamma)}
        y = dw.mult(x, dw.reflection(gamma))
        budget = self.budget or default_budget(dw, x, y)
        interval = brute_interval(dw, x, y, budget.r, budget.n)
        pp = inv_pp(dw, x, gamma)
        outputs = {
            "is_cover": is_cover(dw, x, gamma),
            "inv_pp": len(pp),
            "interval": len(interval),
            "budget": list(budget),
        }
        ok = outputs["is_cover"] and len(pp) == 1 and interval == {x, y}
        return (PASS if ok else FAIL), outputs

    def evaluate(self, index, inputs):
        rng = self.rng(index)
        parts = {"chain": self._shorten(rng, inputs), "cover": self._cover(rng, inputs)}
        outputs = {key: part for key, (_, part) in parts.items()}
        statuses = {status for status, _ in parts.values()}
        for status in (FAIL, INCONCLUSIVE):
            if status in statuses:
                return status, outputs
        return PASS, outputs


class DeodharCheck(Check):
    """Sampled triples; a short count is retried once on the doubled rectangle."""

    name = "deodhar"
    anchor = "#{t : x <= y t <= z} >= ell(z) - ell(x)"
    max_gap = 4

    def evaluate(self, index, inputs):
        dw = self.dw
        x, y, z = sample_triple(dw, self.rng(index), self.max_gap)
        inputs.update(x=self.fmt(x), y=self.fmt(y), z=self.fmt(z))
        result = settle_deodhar(dw, x, y, z, self.budget)
        outputs = {
            "count": result.count,
            "bound": result.bound,
            "verdict": result.verdict,
            "budget": list(result.budget),
        }
        return (PASS if result.verdict == "confirmed" else INCONCLUSIVE), outputs


CHECKS = {
    cls.name: cls
    for cls in (
        LengthDiffCheck,
        PhiPsiCheck,
        HeightCheck,
        RotationCheck,
        SingleAffineCheck,
        CoversCheck,
        DeodharCheck,
    )
}

_WORKER: Optional[Check] = None


def _init_worker(name: str, config) -> None:
    global _WORKER
    _WORKER = CHECKS[name](config)


def _run_index(index: int) -> Dict[str, Any]:
    return _WORKER.run(index)


def run_check(name: str, config) -> Report:
    if name not in CHECKS:
        raise ConfigError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
    check = CHECKS[name](config)
    indices = list(check.indices())
    log.info("verify %s on %s: %d instances, %d workers", name, check.ground.label, len(indices),
             config.threads)
    progress = dict(total=len(indices), desc=f"verify {name}", disable=not config.progress)
    if config.threads <= 1 or len(indices) <= 1:
        records: List[Dict[str, Any]] = [check.run(i) for i in tqdm(indices, **progress)]
    else:
        with Pool(config.threads, initializer=_init_worker, initargs=(name, config)) as pool:
            records = list(tqdm(pool.imap(_run_index, indices, chunksize=8), **progress))
    settings = {"seed": config.seed, "samples": len(indices), "finite": not check.ground.is_affine}
    report = Report(f"verify {name}", check.ground.label, records, settings)
    log.info("verify %s: %s", name, report.summary()["line"])
    return report
