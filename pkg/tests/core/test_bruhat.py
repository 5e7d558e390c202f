"""Unit tests for edges, Inv++, chains and the budgeted order queries."""
import pytest

from dabruhat import bruhat
from dabruhat.affine import AffCoweight, AffRealRoot, load_affine
from dabruhat.bruhat import (
    _rank_one_route,
    DOWN,
    UP,
    Budget,
    Chain,
    candidate_reflections,
    covers_up,
    decompose_inversions,
    decomposition_check,
    default_budget,
    deodhar_count,
    edge,
    eps_increases,
    inv_pp,
    is_cover,
    length_diff_check,
    leq,
    phi,
    psi,
    settle_deodhar,
    shorten_chain,
    up_set,
    verify_chain,
)
from dabruhat.daweyl import DARoot, DARootRN, DoubleAffineWeyl, WTElement
from dabruhat.errors import ChainError, DomainError, UsageError
from dabruhat.length import ell
from dabruhat.rootsys import load_system
from dabruhat.utils import parse_element, parse_root
from dabruhat.verify.sampling import instance_rng, sample_edge


@pytest.fixture
def dw():
    """W_P over affine A1."""
    return DoubleAffineWeyl(load_affine("A1"))


@pytest.fixture
def fin():
    """W_P over finite A1."""
    return DoubleAffineWeyl(load_system("A1"))


@pytest.fixture
def pi_d(dw):
    """x = pi^d."""
    return WTElement(dw.ground.d, dw.ground.identity)


@pytest.fixture
def gamma(dw):
    """beta[0, 1] over alpha_1."""
    return dw.from_rn(DARootRN((1,), 0, 1))


@pytest.fixture
def top(dw, pi_d, gamma):
    """x * s_gamma."""
    return dw.mult(pi_d, dw.reflection(gamma))


@pytest.fixture
def alpha1(dw):
    """alpha_1[0]."""
    return DARoot(AffRealRoot((1,), 0), 0)


class TestEdges:
    """Test edge direction and membership."""

    def test_up_edge(self, dw, pi_d, gamma, top):
        """pi^d(beta[0,1]) > 0, so the edge points up."""
        e = edge(dw, pi_d, gamma)
        assert e.direction == UP
        assert e.target == top

    def test_down_edge(self, dw, pi_d, gamma, top):
        """The same reflection from the top end points down."""
        e = edge(dw, top, gamma)
        assert e.direction == DOWN
        assert e.target == pi_d

    def test_edge_leaving_w_t(self, dw, gamma):
        """From the identity, s_{beta[1]} leaves W_T."""
        assert edge(dw, dw.identity, gamma) is None

    def test_edge_from_outside(self, dw, gamma):
        """The source must lie in W_T."""
        with pytest.raises(DomainError):
            edge(dw, WTElement(AffCoweight((1,), 0, 0), dw.ground.identity), gamma)

    def test_edge_needs_positive_root(self, dw, pi_d):
        """beta must be a positive ground root."""
        with pytest.raises(DomainError):
            edge(dw, pi_d, DARoot(AffRealRoot((1,), -1), 0))


class TestInvPP:
    """Test Inv++ and the length difference on the fixed instance."""

    def test_size(self, dw, pi_d, gamma):
        """Inv++ has five roots and contains gamma."""
        pp = inv_pp(dw, pi_d, gamma)
        assert len(pp) == 5
        assert gamma in pp

    def test_length_difference(self, dw, pi_d, gamma, top):
        """ell(x s) - ell(x) = #Inv++."""
        assert ell(dw, top) - ell(dw, pi_d) == 5
        assert length_diff_check(dw, pi_d, gamma)
        assert length_diff_check(dw, top, gamma)

    def test_eps_increases(self, dw, pi_d, gamma):
        """ell_eps grows along the edge."""
        assert eps_increases(dw, pi_d, gamma)

    def test_down_edge_rejected(self, dw, top, gamma):
        """Inv++ is only defined for up edges."""
        with pytest.raises(UsageError):
            inv_pp(dw, top, gamma)

    def test_psi_is_the_x_action(self, dw, pi_d, gamma):
        """psi(g) = x(g)."""
        for g in inv_pp(dw, pi_d, gamma):
            assert psi(dw, pi_d, gamma, g) == dw.act(pi_d, g).root

    def test_phi_domain(self, dw, pi_d, gamma, alpha1):
        """phi is only defined on Inv(x^-1)."""
        with pytest.raises(UsageError):
            phi(dw, pi_d, gamma, alpha1)

    def test_decomposition(self, dw, pi_d, gamma):
        """im(phi) and im(psi) split the windowed inversions of the top."""
        parts = decompose_inversions(dw, pi_d, gamma)
        assert parts.injective and parts.disjoint and parts.exact
        assert len(parts.target) == len(parts.source) + 5
        assert decomposition_check(dw, pi_d, gamma)


class TestCovers:
    """Test covers and chain shortening."""

    def test_simple_reflection_is_cover(self, dw, alpha1):
        """e < s_1 is a cover with a single root in Inv++."""
        assert is_cover(dw, dw.identity, alpha1)
        assert len(inv_pp(dw, dw.identity, alpha1)) == 1

    def test_non_cover(self, dw, pi_d, gamma):
        """A gap of five is not a cover."""
        assert not is_cover(dw, pi_d, gamma)

    def test_covers_up(self, dw, pi_d, gamma):
        """Every reported cover has length gap one."""
        scan = covers_up(dw, pi_d, Budget(1, 1))
        assert scan.covers
        assert gamma not in scan.covers
        assert all(is_cover(dw, pi_d, g) for g in scan.covers)

    def test_shorten_chain(self, dw, pi_d, gamma, top):
        """The non-cover edge refines into a verified three-step chain."""
        chain = shorten_chain(dw, pi_d, gamma)
        assert chain.route == "case2"
        assert len(chain) == 3
        assert chain.start == pi_d
        assert chain.end == top
        assert verify_chain(dw, chain)
        assert all(length_diff_check(dw, z, s) for z, s in zip(chain.elements, chain.steps))

    def test_shorten_cover_refused(self, dw, alpha1):
        """There is nothing to shorten on a cover."""
        with pytest.raises(UsageError):
            shorten_chain(dw, dw.identity, alpha1)

    def test_shorten_needs_affine_ground(self, fin):
        """Chains are built over an affine ground only."""
        with pytest.raises(UsageError):
            shorten_chain(fin, fin.identity, DARoot((1,), 0))

    def test_verify_chain_rejects_mismatch(self, dw, pi_d, gamma):
        """A chain must land on its listed elements."""
        with pytest.raises(ChainError):
            verify_chain(dw, Chain((pi_d, pi_d), (gamma,)))
        with pytest.raises(ChainError):
            verify_chain(dw, Chain((pi_d,), (gamma,)))


ROUTES = [
    ("pi{l=1,nu=[0],k=0} t[0] e", "b[1; r=1; n=0]", "case1-r>0"),
    ("pi{l=1,nu=[-3],k=0} t[2] e", "b[1; r=-1; n=1]", "case1-r<0"),
    ("pi{l=1,nu=[-2],k=0} t[1] e", "b[1; r=-1; n=1]", "case1-r=-1"),
    ("pi{l=1,nu=[0],k=0} t[0] e", "b[1; r=0; n=1]", "case2"),
    ("pi{l=2,nu=[-5],k=-3} t[2] e", "b[1; r=-2; n=2]", "case2-r<0"),
    ("pi{l=1,nu=[-2],k=0} t[0] e", "b[1; r=1; n=1]", "case3"),
    ("pi{l=1,nu=[0],k=0} t[0] e", "b[1; r=-1; n=-1]", "case2-mirrored"),
]


class TestChainRoutes:
    """Test which chain each rank-one edge takes."""

    @pytest.mark.parametrize("element,root,route", ROUTES)
    def test_route(self, dw, element, root, route):
        """Each case of the rank-one split yields a verified chain."""
        x = parse_element(dw, element)
        gamma = parse_root(dw, root)
        chain = shorten_chain(dw, x, gamma)
        assert chain.route == route
        assert chain.mirrored == route.endswith("-mirrored")
        assert chain.notes == ()
        assert len(chain) == 3
        assert chain.end == dw.mult(x, dw.reflection(gamma))
        assert verify_chain(dw, chain)

    def test_case2_with_negative_r(self, dw):
        """On b[1; r=-2; n=2] the last step climbs to beta[r, 1] and every step goes up."""
        x = parse_element(dw, "pi{l=2,nu=[-5],k=-3} t[2] e")
        chain = shorten_chain(dw, x, parse_root(dw, "b[1; r=-2; n=2]"))
        assert [dw.to_rn(g)[1:] for g in chain.steps] == [(-2, 1), (-2, 0), (-2, 1)]
        lengths = [ell(dw, z) for z in chain.elements]
        assert lengths == sorted(set(lengths))

    def test_distinct_root(self):
        """Over affine A2 an Inv++ root over alpha_1 + alpha_2 shortens an alpha_1 edge."""
        dw2 = DoubleAffineWeyl(load_affine("A2"))
        x = WTElement(dw2.ground.d, dw2.ground.identity)
        gamma = dw2.from_rn(DARootRN((1, 0), 0, 1))
        chain = shorten_chain(dw2, x, gamma)
        assert chain.route == "distinct-root"
        assert not chain.mirrored
        assert verify_chain(dw2, chain)

    def test_fallback_records_notes(self, dw, pi_d, gamma, top, monkeypatch):
        """When the case split fails the neighbourhood search answers and says why."""

        def refuse(*args):
            raise ChainError("refused")

        monkeypatch.setattr(bruhat, "_rank_one_route", refuse)
        chain = shorten_chain(dw, pi_d, gamma)
        assert chain.route.startswith("fallback-")
        assert any("refused" in note for note in chain.notes)
        assert chain.end == top
        assert verify_chain(dw, chain)

    def test_case3_needs_points_on_the_line(self, dw):
        """A point off the line of slope -level is reported, not guessed around."""
        x = parse_element(dw, "pi{l=1,nu=[-2],k=0} t[0] e")
        points = frozenset({(1, 1), (2, 0), (0, 2), (5, 5)})
        with pytest.raises(ChainError):
            _rank_one_route(dw, x, DARootRN((1,), 1, 1), points)

    def test_case1_with_zero_r(self, dw, pi_d):
        """Case 1 never meets r = 0."""
        with pytest.raises(ChainError):
            _rank_one_route(dw, pi_d, DARootRN((1,), 0, 0), frozenset({(0, 0), (1, 0)}))


class TestBudgets:
    """Test candidate rectangles."""

    def test_default_budget(self, dw, pi_d, top):
        """Two plus the largest coordinate."""
        assert default_budget(dw, pi_d, top) == Budget(4, 4)

    def test_candidate_count(self, dw):
        """Depth <= 1 and |n| <= 1 over affine A1 gives 3 x 3 reflections."""
        assert len(candidate_reflections(dw, Budget(1, 1))) == 9

    def test_negative_budget(self, dw):
        """Budgets are non-negative."""
        with pytest.raises(UsageError):
            candidate_reflections(dw, Budget(-1, 0))


class TestOrderQueries:
    """Test leq, up sets and the Deodhar count."""

    def test_leq_affine(self, dw, pi_d, top):
        """x <= x*s with a verified chain certificate."""
        result = leq(dw, pi_d, top, Budget(1, 1))
        assert result.verdict == "yes"
        assert result.chain.start == pi_d
        assert result.chain.end == top
        assert verify_chain(dw, result.chain)

    def test_leq_shorter(self, dw, pi_d, top):
        """A longer element is never below a shorter one."""
        assert leq(dw, top, pi_d).verdict == "no"

    def test_leq_trivial(self, dw, pi_d):
        """x <= x."""
        result = leq(dw, pi_d, pi_d)
        assert result.verdict == "yes"
        assert len(result.chain) == 0

    def test_leq_finite(self, fin):
        """Over a finite ground the answer is final: e < s_1, and s_0, s_1 are incomparable."""
        s1 = fin.reflection(DARoot((1,), 0))
        s0 = fin.reflection(DARoot((1,), -1))
        assert leq(fin, fin.identity, s1).verdict == "yes"
        assert leq(fin, s1, fin.identity).verdict == "no"
        assert leq(fin, s0, s1).verdict == "no"

    def test_up_set(self, dw, alpha1):
        """Above the identity at length <= 1 sit e, s_0 and s_1."""
        reach = up_set(dw, dw.identity, 1, Budget(1, 1))
        s1 = dw.reflection(alpha1)
        s0 = dw.reflection(DARoot(dw.ground.alpha0, 0))
        assert set(reach.elements()) == {dw.identity, s0, s1}
        assert reach.chain_to(s1).steps == (alpha1,)

    def test_deodhar_cover(self, dw, alpha1):
        """[e, s_1] holds exactly one reflection of y = s_1."""
        s1 = dw.reflection(alpha1)
        result = deodhar_count(dw, dw.identity, s1, s1)
        assert result.bound == 1
        assert result.count >= 1
        assert result.verdict == "confirmed"

    def test_deodhar_outside_interval(self, dw, pi_d, top):
        """y must lie in [x, z]."""
        with pytest.raises(UsageError):
            deodhar_count(dw, top, pi_d, top, Budget(1, 1))

    def test_deodhar_gap_two(self, dw):
        """The second reflection of y shows up only on the larger rectangle."""
        x = parse_element(dw, "pi{l=1,nu=[2],k=0} t[1] s1")
        z = parse_element(dw, "pi{l=1,nu=[2],k=0} t[2] s1")
        short = deodhar_count(dw, x, x, z, Budget(4, 4))
        assert short.count == 1
        assert short.verdict == "inconclusive"
        wide = deodhar_count(dw, x, x, z, Budget(8, 8))
        assert wide.count >= wide.bound == 2
        assert wide.verdict == "confirmed"

    def test_settle_deodhar_enlarges(self, dw):
        """An inconclusive count is retried on the doubled rectangle."""
        x = parse_element(dw, "pi{l=1,nu=[2],k=0} t[1] s1")
        z = parse_element(dw, "pi{l=1,nu=[2],k=0} t[2] s1")
        result = settle_deodhar(dw, x, x, z, Budget(4, 4))
        assert result.verdict == "confirmed"
        assert result.budget == Budget(8, 8)

    def test_settle_deodhar_keeps_confirmed(self, dw, alpha1):
        """A confirmed count is returned at the budget it was asked for."""
        s1 = dw.reflection(alpha1)
        result = settle_deodhar(dw, dw.identity, s1, s1, Budget(1, 1))
        assert result.verdict == "confirmed"
        assert result.budget == Budget(1, 1)


class TestSampledEdges:
    """Laws checked over seeded random edges."""

    @pytest.mark.parametrize("label", ["A1", "A2"])
    def test_gap_is_odd_and_iota_is_an_involution(self, label):
        """ell(x*s) - ell(x) = |Inv++| is odd, and iota pairs Inv++ with itself."""
        dw = DoubleAffineWeyl(load_affine(label))
        seen = 0
        for i in range(12):
            pair = sample_edge(dw, instance_rng(8, i), max_gap=7)
            if pair is None:
                continue
            x, gamma = pair
            pp = inv_pp(dw, x, gamma)
            gap = ell(dw, dw.mult(x, dw.reflection(gamma))) - ell(dw, x)
            assert gap == len(pp)
            assert gap % 2 == 1
            for g in pp:
                image = dw.iota(gamma, g)
                assert image in pp
                assert dw.iota(gamma, image) == g
            seen += 1
        assert seen > 0
