from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import companion_real_roots
from rarefaction_lab import sturm
from rarefaction_lab.poly import make_basis, rng_stream, sample_gaussian
from rarefaction_lab.topology import count_real_roots


def product_of_roots(roots):
    p = [1]
    for r in roots:
        # multiply by (t - r) with r = num/den, scaled by den
        f = Fraction(r)
        a, b = -f.numerator, f.denominator
        q = [0] * (len(p) + 1)
        for i, c in enumerate(p):
            q[i] += a * c
            q[i + 1] += b * c
        p = q
    return p


def test_from_floats_is_exact():
    p = sturm.from_floats([0.5, -0.25, 1.0])
    assert p == [2, -1, 4]
    assert sturm.from_floats([0.0, 0.0]) == []


def test_chain_of_square_is_not_squarefree():
    p = product_of_roots([1, 1, 2])
    assert not sturm.is_squarefree(sturm.sturm_chain(p))
    assert sturm.is_squarefree(sturm.sturm_chain(product_of_roots([1, 2])))


def test_half_open_interval_convention():
    chain = sturm.sturm_chain(product_of_roots([-1, 0, 1]))
    assert sturm.count_in_half_open(chain, -1, 1) == 2
    assert sturm.count_in_half_open(chain, -2, 1) == 3
    assert sturm.count_in_half_open(chain, Fraction(-1, 2), Fraction(1, 2)) == 1


@given(st.lists(st.fractions(-5, 5, max_denominator=50), min_size=1, max_size=9, unique=True),
       st.lists(st.fractions(-5, 5, max_denominator=50), max_size=3))
@settings(max_examples=60, deadline=None)
def test_counts_known_roots(roots, repeats):
    p = product_of_roots(list(roots) + [r for r in repeats if r in roots])
    chain = sturm.sturm_chain(p)
    lo, hi = Fraction(-6), Fraction(6)
    assert sturm.count_in_half_open(chain, lo, hi) == len(roots)
    mid = Fraction(1, 3)
    assert sturm.count_in_half_open(chain, lo, mid) == sum(r <= mid for r in roots)


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=8))
@settings(max_examples=40, deadline=None)
def test_irreducible_quadratic_factor_adds_nothing(roots):
    p = product_of_roots(sorted(set(roots)))
    # multiply by t^2 + 1
    q = [0] * (len(p) + 2)
    for i, c in enumerate(p):
        q[i] += c
        q[i + 2] += c
    assert sturm.count_in_half_open(sturm.sturm_chain(q), -100, 100) == len(set(roots))


def test_value_sign():
    p = product_of_roots([Fraction(1, 3)])
    assert sturm.value_sign(p, Fraction(1, 3)) == 0
    assert sturm.value_sign(p, 1) == 1
    assert sturm.value_sign(p, 0.0) == -1


@pytest.mark.parametrize("d,samples", [(5, 1000), (3, 200), (11, 200), (18, 200)])
def test_binary_root_count_matches_companion_oracle(d, samples):
    b = make_basis(1, d)
    for i in range(samples):
        s = sample_gaussian(b, rng_stream(5, d, i))
        rc = count_real_roots(s)
        assert rc.certified
        assert rc.real_roots == companion_real_roots(b.alphas, s.monomial_coeffs())


def test_root_count_parity():
    for d in range(1, 12):
        b = make_basis(1, d)
        for i in range(20):
            rc = count_real_roots(sample_gaussian(b, rng_stream(1, d, i)))
            assert rc.real_roots % 2 == d % 2 and rc.real_roots <= d


def test_numpy_roots_agree_on_wide_spread():
    # roots at very different scales stress the chart split at |t| = 1
    roots = [Fraction(1, 1000), Fraction(-3, 2), 50, Fraction(-1, 1)]
    p = product_of_roots(roots)
    chain = sturm.sturm_chain(p)
    assert sturm.count_in_half_open(chain, -100, 100) == 4
    assert len(np.roots(p[::-1])) == 4
