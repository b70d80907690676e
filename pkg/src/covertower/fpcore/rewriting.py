"""Abelianized Reidemeister-Schreier rewriting of finite-index subgroups.

Given a presentation and a permutation action of its generators, the point
stabilizer of a transitive action is a finite-index subgroup.  Only the
exponent vectors of the rewritten relators are produced (one row per
relator per coset), which is all the first-homology rank needs; full
subgroup relator words are never materialized.

The Schreier transversal is fixed as BFS first-discovery with generators
tried in index order, positive before negative, so matrices are
reproducible bit for bit.
"""

from ..errors import InternalInvariantError, ParameterError
from .perms import orbit_and_transversal
from .sparse import SparseMatModP, sparse_rank_mod_p
from .words import Presentation


def schreier_data(pres: Presentation, images, point: int):
    """Cosets, tree edges and Schreier-generator numbering for the stabilizer
    of `point`.  If the action is not transitive it is restricted to the
    orbit of `point`.

    Returns (cosets, coset_index, tree_edges, schreier_cols) where
    tree_edges is the set of (coset position, generator index) pairs
    identified with the identity, and schreier_cols maps the remaining
    pairs to column numbers.
    """
    if len(images) != pres.ngens:
        raise ParameterError("need one permutation per generator")
    degree = images[0].degree
    if not 0 <= point < degree:
        raise ParameterError(f"point {point} outside degree {degree}")
    orbit, tree = orbit_and_transversal(images, point)
    coset_index = {pt: i for i, pt in enumerate(orbit)}
    # A +1 tree edge (parent --g--> child) kills the Schreier generator at
    # (parent, g); a -1 edge (parent --g^-1--> child) kills the one at
    # (child, g).
    tree_edges = set()
    for child, (parent, gi, sign) in tree.items():
        if sign > 0:
            tree_edges.add((coset_index[parent], gi))
        else:
            tree_edges.add((coset_index[child], gi))
    schreier_cols = {}
    for ci in range(len(orbit)):
        for gi in range(pres.ngens):
            if (ci, gi) not in tree_edges:
                schreier_cols[(ci, gi)] = len(schreier_cols)
    return orbit, coset_index, tree_edges, schreier_cols


def abelianized_rewriting_matrix(pres: Presentation, images, point: int, P: int):
    """Exponent-sum matrix of the Reidemeister-Schreier rewrite, mod P.

    Row r*n + c is relator r rewritten starting at coset c; column g is the
    g-th Schreier generator (tree-edge generators are identified with the
    identity and have no column).  Also returns the Schreier generator
    count n*(ngens-1)+1.
    """
    orbit, coset_index, _tree, cols = schreier_data(pres, images, point)
    n = len(orbit)
    ngens_schreier = n * (pres.ngens - 1) + 1
    if len(cols) != ngens_schreier:
        raise InternalInvariantError("Schreier index formula violated")
    inv_images = [g.inverse() for g in images]
    triples = []
    for r, rel in enumerate(pres.relators):
        for c, start in enumerate(orbit):
            row = {}
            pt = start
            for letter in rel:
                gi = abs(letter) - 1
                if letter > 0:
                    key = (coset_index[pt], gi)
                    if key in cols:
                        row[cols[key]] = row.get(cols[key], 0) + 1
                    pt = images[gi](pt)
                else:
                    prev = inv_images[gi](pt)
                    key = (coset_index[prev], gi)
                    if key in cols:
                        row[cols[key]] = row.get(cols[key], 0) - 1
                    pt = prev
            if pt != start:
                raise InternalInvariantError("relator does not stabilize the coset")
            for col, v in row.items():
                triples.append((r * n + c, col, v))
    mat = SparseMatModP(len(pres.relators) * n, ngens_schreier, P, triples)
    return mat, ngens_schreier


def betti_proxy_cover(pres: Presentation, images, point: int, P: int) -> int:
    """dim H_1(stabilizer subgroup; F_P) — the cover's first-Betti proxy.

    Over a prime missing all torsion this equals the rational Betti number;
    false positives are possible, false negatives are not.
    """
    mat, ngens_schreier = abelianized_rewriting_matrix(pres, images, point, P)
    return ngens_schreier - sparse_rank_mod_p(mat)
