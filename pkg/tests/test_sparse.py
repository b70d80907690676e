import random

import numpy as np
import pytest

from covertower.errors import ParameterError
from covertower.fpcore import SparseMatModP, rank_dense_mod_p, sparse_rank_mod_p


def test_identity_rank():
    m = SparseMatModP(3, 3, 31991, [(i, i, 1) for i in range(3)])
    assert sparse_rank_mod_p(m) == 3


def test_zero_matrix():
    assert sparse_rank_mod_p(SparseMatModP(4, 5, 31991, [])) == 0


def test_value_vanishing_mod_p():
    m = SparseMatModP(1, 1, 31991, [(0, 0, 31991 * 7)])
    assert m.entries == {}
    assert sparse_rank_mod_p(m) == 0


def test_duplicate_triples_sum():
    m = SparseMatModP(1, 1, 5, [(0, 0, 3), (0, 0, 2)])
    assert m.entries == {}
    m2 = SparseMatModP(1, 1, 5, [(0, 0, 3), (0, 0, 3)])
    assert m2.entries == {(0, 0): 1}


def test_bad_construction():
    with pytest.raises(ParameterError):
        SparseMatModP(2, 2, 6, [])
    with pytest.raises(ParameterError):
        SparseMatModP(2, 2, 5, [(2, 0, 1)])


@pytest.mark.parametrize("p", [2, 5, 31991])
def test_random_ranks_match_numpy_reference(p):
    rng = random.Random(p)
    for _ in range(25):
        m = rng.randint(1, 12)
        n = rng.randint(1, 12)
        triples = []
        for _ in range(rng.randint(0, 3 * max(m, n))):
            triples.append((rng.randrange(m), rng.randrange(n), rng.randint(-20, 20)))
        mat = SparseMatModP(m, n, p, triples)
        want = _reference_rank(mat.to_dense(), p)
        assert sparse_rank_mod_p(mat) == want
        assert rank_dense_mod_p(mat.to_dense(), p) == want


def _reference_rank(a, p):
    """Rank over GF(p) via sympy's DomainMatrix, independent of the library."""
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    if a.size == 0:
        return 0
    K = GF(p)
    dm = DomainMatrix(
        [[K(int(x)) for x in row] for row in a.tolist()], a.shape, K
    )
    return dm.rank()


def test_reference_rank_is_sane():
    a = np.array([[1, 2], [2, 4]])
    assert _reference_rank(a, 5) == 1
