from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given, settings, strategies as st

from hilbgw import spectrum as S
from hilbgw.combinatorics import partitions
from hilbgw.hilb import build_md
from hilbgw.kernel import TruncSeries


def test_specialization_sequence_starts():
    seq = list(islice(S.specialization_sequence(), 4))
    assert seq[:3] == [(1, 5), (2, 7), (3, 11)]
    assert seq[3] == (4, 13)


def test_box_content_pairs():
    # (2,1): boxes (0,0),(1,0),(0,1) -> contents sum a*t1 + b*t2 with a = b = 1
    assert S.box_content_pair((2, 1)) == (1, 1)
    assert S.box_content_pair((3,)) == (3, 0)
    assert S.box_content_pair((1, 1, 1)) == (0, 3)


def test_structural_clusters():
    assert S.structural_clusters(6) == [[(4, 1, 1), (3, 3)], [(3, 1, 1, 1), (2, 2, 2)]]
    assert all(S.structural_clusters(n) == [] for n in range(1, 6))
    assert S.structural_clusters(7) == []
    assert S.structural_clusters(8) == [[(4, 2, 1, 1), (3, 3, 2)]]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_initial_eigenvalues_are_charpoly_roots_at_q0(n):
    spec = (1, 5)
    values, sign = S.initial_eigenvalues(n, spec)
    assert sign == -1
    assert sorted(values) == sorted(-S.box_content_sum(lam, 1, 5) for lam in partitions(n))
    cp = S.charpoly(build_md(n, spec))
    for v in values:
        total = sum(c.subs({"q": 0}).const_value() * v ** (len(cp) - 1 - k) for k, c in enumerate(cp))
        assert total == 0


def test_collision_errors():
    with pytest.raises(S.SpecializationCollision):
        S.initial_eigenvalues(6, (1, 5), allow_clusters=True)
    with pytest.raises(S.StructuralDegeneracy):
        S.initial_eigenvalues(6, (2, 7))
    spec, log = S.resolve_specialization(6)
    assert spec == (2, 7) and len(log) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_charpoly_routes(n):
    # Berkowitz over the specialized integer ring against the symbolic route, specialized afterwards
    a = S.charpoly(build_md(n, (2, 7)))
    b = [c.subs({"t1": 2, "t2": 7}) for c in S.charpoly(build_md(n))]
    assert a == b


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_vieta_and_residual(n):
    assert S.vieta_check(n, (1, 5), 12).passed
    assert S.residual_check(n, (1, 5), 12).passed


def test_hensel_clusters_at_n6():
    spec = (2, 7)
    eig = S.lift_eigenvalues(6, spec, 10)
    assert len(eig) == 11
    assert S.vieta_check(6, spec, 10, eig).passed
    assert S.residual_check(6, spec, 10, eig).passed


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bordered_lift_agrees_with_newton(n):
    spec = (1, 5)
    newton = {e.label: e.series for e in S.newton_lift(n, spec, 8)}
    for pair in S.eigenpair_lift(n, spec, 8):
        assert pair.value == newton[pair.label]


def test_delta_values():
    assert [d[0] for d in S.delta_i(2, (1, 5), 4)] == [40, -200]
    # n = 1: Delta = 1/<1,1> = t1 t2
    assert S.delta_i(1, (1, 5), 3)[0] == TruncSeries([5], 3, "q")


@pytest.mark.parametrize("n", [2, 3])
def test_orthogonality(n):
    assert S.orthogonality_check(n, (1, 5), 6, products=True).passed


def _series(cs, order=8):
    return TruncSeries([Fraction(c) for c in cs], order, "q")


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=5), min_size=2, max_size=3))
@settings(max_examples=40, deadline=None)
def test_wronskian_recursion_against_leibniz(rows):
    fs = [_series(r) for r in rows]
    direct = S.wronskian_direct(fs)
    rec = S.wronskian_series(fs)
    if direct.is_zero():
        assert rec is None or rec[1].is_zero()
        return
    v = direct.valuation()
    assert rec is not None
    offset, s = rec
    assert offset <= v
    assert s[v - offset] == direct[v]


def test_wronskian_of_monomials():
    # W(1, q, q^2) with theta = q d/dq: det [[1,q,q^2],[0,q,2q^2],[0,q,4q^2]] = 2 q^3
    fs = [_series([1]), _series([0, 1]), _series([0, 0, 1])]
    w = S.wronskian_direct(fs)
    assert w.valuation() == 3 and w[3] == 2
    assert S.wronskian_leading(fs) == 2


@pytest.mark.parametrize("n,index,coeff", [(2, 1, 30), (3, 3, 16320)])
def test_certificates_small(n, index, coeff):
    cert = S.wronskian_certificate(n)
    assert cert.verdict == "pass"
    assert cert.first_nonzero_index == index
    assert cert.coefficient == coeff
    assert cert.leading_route_agrees


@pytest.mark.parametrize("n", [4, 5])
def test_certificate_index_is_triangular(n):
    cert = S.wronskian_certificate(n)
    size = len(partitions(n))
    assert cert.verdict == "pass"
    assert cert.first_nonzero_index == size * (size - 1) // 2


def test_certificate_json_round_trip():
    import json

    cert = S.wronskian_certificate(2)
    doc = json.loads(json.dumps(cert.to_json()))
    assert doc["verdict"] == "pass" and doc["coefficient"] == "30"
