import argparse
import functools
import re

from .affine import AffCoweight, AffWeylElt, load_affine
from .daweyl import DARoot, DARootRN, DoubleAffineWeyl, WTElement
from .errors import DabruError, ParseError
from .rootsys import load_system

CHECKS = ("length-diff", "phipsi", "height", "rotation", "single-affine", "covers", "deodhar")
COMMANDS = ("ell", "edge", "invpp", "cover", "chain", "leq", "deodhar")

_INT = re.compile(r"^-?\d+$")
_WORD = re.compile(r"^(e|s\d+(\*s\d+)*)$")
_AFF_ELEMENT = re.compile(
    r"^pi\{l=(-?\d+),\s*nu=\[([^\]]*)\],\s*k=(-?\d+)\}\s+t\[([^\]]*)\]\s+(\S+)$"
)
_FIN_ELEMENT = re.compile(r"^pi\{nu=\[([^\]]*)\]\}\s+(\S+)$")
_AFF_ROOT = re.compile(r"^b\[([^;\]]*);\s*r=(-?\d+);\s*n=(-?\d+)\]$")
_FIN_ROOT = re.compile(r"^b\[([^;\]]*);\s*n=(-?\d+)\]$")


def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ground", type=str, default="A1")
    common.add_argument(
        "--finite-ground",
        action="store_true",
        help="use the finite root system itself (single-affine instantiation)",
    )
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--budget-r", type=int, default=None)
    common.add_argument("--budget-n", type=int, default=None)
    common.add_argument("--output", type=str, default=None)
    common.add_argument("--csv", type=str, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    common.add_argument("--no-progress", action="store_true")
    common.add_argument("--x", type=str, default=None)
    common.add_argument("--y", type=str, default=None)
    common.add_argument("--z", type=str, default=None)
    common.add_argument("--root", type=str, default=None)
    common.add_argument("--max-length", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="dabru", description="Double-affine Bruhat order engine and checks."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    verify = sub.add_parser("verify", parents=[common])
    verify.add_argument("check", choices=CHECKS)

    args = parser.parse_args(argv)
    return args


@functools.lru_cache(maxsize=None)
def load_ground(label, finite=False):
    """The finite system itself, or its untwisted affinization (the default)."""
    return load_system(label) if finite else load_affine(label)


@functools.lru_cache(maxsize=None)
def load_weyl(label, finite=False):
    return DoubleAffineWeyl(load_ground(label, finite))


# -- element and root grammar ---------------------------------------------
def _ints(text, rank, what):
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    if len(parts) != rank or not all(_INT.match(p) for p in parts):
        raise ParseError(f"{what}: expected {rank} integers, got [{text}]")
    return tuple(int(p) for p in parts)


def _word(text, finite):
    if not _WORD.match(text):
        raise ParseError(f"bad word {text!r}; expected 'e' or s<i> factors joined by '*'")
    if text == "e":
        return finite.identity
    try:
        return finite.from_word([int(f[1:]) for f in text.split("*")])
    except DabruError as err:
        raise ParseError(str(err)) from err


def _format_word(finite, u):
    word = finite.reduced_word(u)
    return "*".join(f"s{i}" for i in word) if word else "e"


def _join(values):
    return ",".join(str(v) for v in values)


def parse_element(dw, text):
    g = dw.ground
    text = text.strip()
    if g.is_affine:
        match = _AFF_ELEMENT.match(text)
        if match is None:
            raise ParseError(f"bad element {text!r}; expected 'pi{{l=..,nu=[..],k=..}} t[..] <word>'")
        finite = g.finite
        nu = _ints(match.group(2), finite.rank, "nu")
        coroot = _ints(match.group(4), finite.rank, "t")
        lam = tuple(int(v) for v in finite.cartan @ coroot)
        mu = AffCoweight(nu, int(match.group(1)), int(match.group(3)))
        return WTElement(mu, AffWeylElt(lam, _word(match.group(5), finite)))
    match = _FIN_ELEMENT.match(text)
    if match is None:
        raise ParseError(f"bad element {text!r}; expected 'pi{{nu=[..]}} <word>'")
    nu = _ints(match.group(1), g.rank, "nu")
    return WTElement(nu, _word(match.group(2), g))


def format_element(dw, x):
    g = dw.ground
    if g.is_affine:
        finite = g.finite
        mu = x.mu
        return (
            f"pi{{l={mu.level},nu=[{_join(mu.nu)}],k={mu.central}}}"
            f" t[{_join(finite.coroot_coords(tuple(x.w.lam)))}] {_format_word(finite, x.w.u)}"
        )
    return f"pi{{nu=[{_join(x.mu)}]}} {_format_word(g, x.w)}"


def parse_root(dw, text):
    g = dw.ground
    text = text.strip()
    if g.is_affine:
        match = _AFF_ROOT.match(text)
        if match is None:
            raise ParseError(f"bad root {text!r}; expected 'b[<coords>; r=<int>; n=<int>]'")
        coords = _ints(match.group(1), g.rank, "root")
        return dw.from_rn(DARootRN(coords, int(match.group(2)), int(match.group(3))))
    match = _FIN_ROOT.match(text)
    if match is None:
        raise ParseError(f"bad root {text!r}; expected 'b[<coords>; n=<int>]'")
    coords = _ints(match.group(1), g.rank, "root")
    return dw.check_root(DARoot(coords, int(match.group(2))))


def format_root(dw, root):
    if dw.ground.is_affine:
        rn = dw.to_rn(root)
        return f"b[{_join(rn.beta_fin)}; r={rn.r}; n={rn.n}]"
    return f"b[{_join(root.beta)}; n={root.n}]"

