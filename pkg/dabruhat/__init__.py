"""Double-affine Bruhat order on W_T for simply-laced ground types.

Expose the high-level objects of the engine; campaigns live in `dabruhat.verify`.
"""

from .rootsys import CartanDatum, FiniteRootSystem, FiniteWeylElt, cartan_datum, load_system
from .affine import AffCoweight, AffineRootSystem, AffRealRoot, AffWeylElt, load_affine
from .daweyl import DARoot, DARootRN, DoubleAffineWeyl, WTElement, sigma
from .length import EpsLength, Window, ell, ell_eps, ell_translation, ell_via_eq19
from .bruhat import Budget, Chain, Edge, edge, inv_pp, is_cover, leq, shorten_chain
from .oracle import CoxeterElt, CoxeterGroup

__all__ = [
    "AffCoweight",
    "AffRealRoot",
    "AffWeylElt",
    "AffineRootSystem",
    "Budget",
    "CartanDatum",
    "Chain",
    "CoxeterElt",
    "CoxeterGroup",
    "DARoot",
    "DARootRN",
    "DoubleAffineWeyl",
    "Edge",
    "EpsLength",
    "FiniteRootSystem",
    "FiniteWeylElt",
    "WTElement",
    "Window",
    "cartan_datum",
    "edge",
    "ell",
    "ell_eps",
    "ell_translation",
    "ell_via_eq19",
    "inv_pp",
    "is_cover",
    "leq",
    "load_affine",
    "load_system",
    "shorten_chain",
    "sigma",
]
