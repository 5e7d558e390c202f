"""Unit tests for argument parsing, loaders and the element / root grammar."""
import pytest

from dabruhat.affine import AffCoweight, AffRealRoot
from dabruhat.daweyl import DARoot, WTElement
from dabruhat.errors import ConfigError, DomainError, ParseError
from dabruhat.utils import (
    format_element,
    format_root,
    load_ground,
    load_weyl,
    parse_args,
    parse_element,
    parse_root,
)


@pytest.fixture
def dw():
    """W_P over affine A1."""
    return load_weyl("A1")


@pytest.fixture
def dw_a2():
    """W_P over finite A2."""
    return load_weyl("A2", True)


class TestParseArgs:
    """Test the command line surface."""

    def test_defaults(self):
        """Single commands default to affine A1, seed 0 and 100 samples."""
        args = parse_args(["ell", "--x", "pi{l=1,nu=[0],k=0} t[0] e"])
        assert args.command == "ell"
        assert args.ground == "A1"
        assert args.seed == 0
        assert args.samples == 100
        assert args.threads is None
        assert not args.finite_ground

    def test_verify(self):
        """verify takes the check name as a positional argument."""
        args = parse_args(["verify", "height", "--ground", "D4", "--threads", "2"])
        assert args.command == "verify"
        assert args.check == "height"
        assert args.ground == "D4"
        assert args.threads == 2

    def test_unknown_check(self):
        """Unknown checks are rejected by argparse."""
        with pytest.raises(SystemExit):
            parse_args(["verify", "nonsense"])

    def test_missing_command(self):
        """A subcommand is required."""
        with pytest.raises(SystemExit):
            parse_args([])


class TestLoaders:
    """Test ground and W_P loaders."""

    def test_affine_by_default(self):
        """Grounds are affine unless the finite flag is given."""
        assert load_ground("A2").is_affine
        assert not load_ground("A2", True).is_affine

    def test_cached(self):
        """Loaders return the same object for the same label."""
        assert load_weyl("A1") is load_weyl("A1")

    def test_bad_label(self):
        """Unsupported labels raise ConfigError."""
        with pytest.raises(ConfigError):
            load_weyl("B3")


class TestElementGrammar:
    """Test parsing and formatting of elements."""

    def test_pi_d(self, dw):
        """pi^d with trivial affine part."""
        x = parse_element(dw, "pi{l=1,nu=[0],k=0} t[0] e")
        assert x == WTElement(dw.ground.d, dw.ground.identity)
        assert format_element(dw, x) == "pi{l=1,nu=[0],k=0} t[0] e"

    def test_translation_coordinates(self, dw):
        """t[1] is the simple coroot, stored as 2 omega^vee."""
        x = parse_element(dw, "pi{l=2,nu=[-1],k=3} t[1] s1")
        assert x.mu == AffCoweight((-1,), 2, 3)
        assert x.w.lam == (2,)
        assert format_element(dw, x) == "pi{l=2,nu=[-1],k=3} t[1] s1"

    def test_finite_ground(self, dw_a2):
        """Finite-ground elements carry only nu and a word."""
        x = parse_element(dw_a2, "pi{nu=[1,-1]} s1*s2")
        assert x.mu == (1, -1)
        assert format_element(dw_a2, x) == "pi{nu=[1,-1]} s1*s2"

    def test_word_is_reduced_on_output(self, dw_a2):
        """s1*s1 prints as the identity."""
        x = parse_element(dw_a2, "pi{nu=[0,0]} s1*s1")
        assert format_element(dw_a2, x) == "pi{nu=[0,0]} e"

    @pytest.mark.parametrize(
        "text",
        [
            "garbage",
            "pi{l=1,nu=[0,0],k=0} t[0] e",
            "pi{l=1,nu=[0],k=0} t[x] e",
            "pi{l=1,nu=[0],k=0} t[0] s2",
            "pi{l=1,nu=[0],k=0} t[0] s1s1",
        ],
    )
    def test_bad_affine_elements(self, dw, text):
        """Malformed text, wrong rank and unknown generators are parse errors."""
        with pytest.raises(ParseError):
            parse_element(dw, text)

    def test_bad_finite_element(self, dw_a2):
        """Affine syntax is rejected over a finite ground."""
        with pytest.raises(ParseError):
            parse_element(dw_a2, "pi{l=1,nu=[0,0],k=0} t[0,0] e")


class TestRootGrammar:
    """Test parsing and formatting of roots."""

    def test_affine_root(self, dw):
        """b[1; r=0; n=1] is alpha_1 + pi."""
        root = parse_root(dw, "b[1; r=0; n=1]")
        assert root == DARoot(AffRealRoot((1,), 0), 1)
        assert format_root(dw, root) == "b[1; r=0; n=1]"

    def test_negative_r(self, dw):
        """beta[-1, 0] is delta - alpha at n = 0."""
        root = parse_root(dw, "b[1; r=-1; n=0]")
        assert root == DARoot(AffRealRoot((-1,), 1), 0)
        assert format_root(dw, root) == "b[1; r=-1; n=0]"

    def test_finite_root(self, dw_a2):
        """Finite-ground roots carry only n."""
        root = parse_root(dw_a2, "b[1,1; n=-2]")
        assert root == DARoot((1, 1), -2)
        assert format_root(dw_a2, root) == "b[1,1; n=-2]"

    def test_bad_root_text(self, dw):
        """Wrong rank is a parse error."""
        with pytest.raises(ParseError):
            parse_root(dw, "b[1,1; r=0; n=0]")

    def test_non_positive_root(self, dw_a2):
        """A non-positive root parses but is outside the domain."""
        with pytest.raises(DomainError):
            parse_root(dw_a2, "b[1,-1; n=0]")

