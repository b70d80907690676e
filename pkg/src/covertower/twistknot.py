"""Congruence-style covers of twist-knot orbifolds via epimorphism search.

Pipeline: enumerate surjections of the two-generator orbifold group onto
PSL2(F_q) in standard triangular/lower-triangular shape, deduplicate by the
automorphism group of the target, realize each class on the projective
line, cut out the Borel preimage as a point stabilizer, and measure its
first homology over a large prime field.

Surjectivity is decided by exact permutation-group order, not by a
classification of subgroups.  No trace-variety component filtering is done;
classes whose meridian image has the wrong projective order for a reduction
of the geometric representation are flagged `non_canonical` instead.
"""

from dataclasses import dataclass
from math import gcd

from .arith import divisors, is_prime, prime_power_split
from .errors import InternalInvariantError, ParameterError
from .fpcore.perms import group_order_equals, orbit_and_transversal
from .fpcore.rewriting import betti_proxy_cover
from .fpcore.words import Presentation, cyclic_reduce, invert_word, word_power
from .finfield import (
    commutator_trace,
    fq_context,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_neg,
    mat_projective_order,
    mat_trace,
    order_k_traces,
    p1_action,
    psl2_order,
    quadratic_extension,
)

# Twist parameters examined in the source survey: |n| <= 4, 3 <= k <= 7,
# minus the non-hyperbolic cases (n = 0, n = 1, and (n,k) = (-1,3)).
HYPERBOLIC_SPECS = frozenset(
    (n, k)
    for n in (-4, -3, -2, -1, 2, 3, 4)
    for k in (3, 4, 5, 6, 7)
    if (n, k) != (-1, 3)
)

W_WORD = (2, -1, -2, 1)  # w = b a^-1 b^-1 a


@dataclass(frozen=True)
class OrbifoldSpec:
    """Hyperbolic twist-knot orbifold: twist parameter n, cone order k."""

    n: int
    k: int

    def __post_init__(self):
        if (self.n, self.k) not in HYPERBOLIC_SPECS:
            raise ParameterError(
                f"T({self.n},{self.k}) is not in the hyperbolic survey range"
            )


def twist_relators(n: int, k: int):
    """Relators a^k, b^k, w^n a w^-n b^-1 (cyclically reduced) with
    w = b a^-1 b^-1 a; pure word construction, no hyperbolicity screen."""
    third = word_power(W_WORD, n) + (1,) + word_power(W_WORD, -n) + (-2,)
    return ((1,) * k, (2,) * k, cyclic_reduce(third))


def twist_presentation(spec: OrbifoldSpec) -> Presentation:
    """<a, b | a^k, b^k, w^n a w^-n b^-1> with w = b a^-1 b^-1 a."""
    return Presentation(2, twist_relators(spec.n, spec.k))


def canonical_meridian_order(k: int, p: int) -> int:
    """Projective order of the meridian image in reductions of the geometric
    representation at residue characteristic p: k with its p-part removed,
    degenerating to a unipotent of order p when nothing else is left."""
    kk = k
    while kk % p == 0:
        kk //= p
    return kk if kk > 1 else p


@dataclass(frozen=True)
class RepCandidate:
    """A trace-parameter candidate before surjectivity testing.

    Matrices live over F_{q^2}; x, y, t are base-field values and y is
    always recomputed from the matrices."""

    ctx2: object
    x: tuple
    t: tuple
    y: tuple
    korder: int
    semisimple: bool
    A: tuple
    B: tuple


@dataclass(frozen=True)
class EpiClass:
    """A surjection onto PSL2(F_q) up to Aut(PSL2(F_q))."""

    q: int
    n: int
    k: int
    canonical_key: tuple
    x: tuple
    y: tuple
    t: tuple
    korder: int
    semisimple: bool
    non_canonical: bool
    A0: tuple
    B0: tuple
    order_verified: bool


@dataclass(frozen=True)
class CoverRecord:
    q: int
    canonical_key: tuple
    betti_proxy: int
    proxy_prime: int
    second_proxy: int = None
    second_prime: int = None

    def positive(self) -> bool:
        if self.betti_proxy <= 0:
            return False
        if self.second_prime is not None:
            return self.second_proxy > 0
        return True


def _relator_matrix(ctx, A, B, n):
    """Image of w^n a w^-n b^-1."""
    W = mat_mul(ctx, mat_mul(ctx, B, mat_inv(ctx, A)), mat_mul(ctx, mat_inv(ctx, B), A))
    Wn = mat_identity(ctx)
    base = W
    e = abs(n)
    while e:
        if e & 1:
            Wn = mat_mul(ctx, Wn, base)
        base = mat_mul(ctx, base, base)
        e >>= 1
    if n < 0:
        Wn = mat_inv(ctx, Wn)
    return mat_mul(
        ctx, mat_mul(ctx, Wn, A), mat_mul(ctx, mat_inv(ctx, Wn), mat_inv(ctx, B))
    )


def _is_pm_identity(ctx, M):
    return M == mat_identity(ctx) or M == mat_neg(ctx, mat_identity(ctx))


def _find_s(ctx, ctx2, emb, x):
    """Root of z^2 - x z + 1 in F_{q^2}, located inside mu_{q-1} U mu_{q+1}."""
    xe = emb[x]
    q = ctx.q
    gamma = ctx2.multiplicative_generator()
    for step, count in ((q + 1, q - 1), (q - 1, q + 1)):
        base = ctx2.pow(gamma, step)
        base_inv = ctx2.inv(base)
        s, s_inv = ctx2.one, ctx2.one
        for e in range(count):
            if e:
                s = ctx2.mul(s, base)
                s_inv = ctx2.mul(s_inv, base_inv)
            if ctx2.add(s, s_inv) == xe:
                return s
    raise InternalInvariantError("trace has no eigenvalue in the mu subgroups")


def build_rep(spec: OrbifoldSpec, ctx, x, t, korder=None):
    """Standard-shape candidate for given meridian trace x and parameter t.

    Semisimple branch: A = [[s,1],[0,1/s]], B = [[s,0],[t,1/s]] with s a
    root of z^2 - xz + 1 in F_{q^2}; unipotent branch (x = +-2 in odd
    characteristic, 0 in characteristic 2): the same shapes with s = +-1.
    Returns a RepCandidate, or a string reason for rejection.
    """
    ctx2, emb = quadratic_extension(ctx)
    two = ctx.from_int(2)
    minus_two = ctx.from_int(-2)
    unipotent = x in (two, minus_two)
    if t == ctx.zero:
        return "reducible: t = 0"
    xx = ctx.mul(x, x)
    t_bad = ctx.sub(ctx.from_int(4), xx)
    if t == t_bad:
        return "reducible: t = 4 - x^2"
    if unipotent:
        s = ctx2.one if (ctx.p == 2 or x == two) else ctx2.neg(ctx2.one)
        s_inv = s
    else:
        s = _find_s(ctx, ctx2, emb, x)
        s_inv = ctx2.inv(s)
    te = emb[t]
    A = (s, ctx2.one, ctx2.zero, s_inv)
    B = (s, ctx2.zero, te, s_inv)
    if mat_det(ctx2, A) != ctx2.one or mat_det(ctx2, B) != ctx2.one:
        raise InternalInvariantError("candidate matrices must have determinant 1")
    if commutator_trace(ctx2, A, B) == ctx2.from_int(2):
        return "reducible: commutator trace 2"
    R = _relator_matrix(ctx2, A, B, spec.n)
    if not _is_pm_identity(ctx2, R):
        return "relator not satisfied"
    emb_inv = {v: kk for kk, v in emb.items()}
    y2 = mat_trace(ctx2, mat_mul(ctx2, A, B))
    y = emb_inv.get(y2)
    if y is None:
        raise InternalInvariantError("tr(AB) left the base field")
    if korder is None:
        korder = mat_projective_order(ctx2, A, bound=2 * ctx.q + 2)
    return RepCandidate(ctx2, x, t, y, korder, not unipotent, A, B)


def conjugate_to_base_field(cand: RepCandidate, ctx):
    """Base-field pair with the same trace triple (x, x, y) and relators.

    A0 is the companion matrix [[x,-1],[1,0]]; B0 is solved from
    tr B0 = x, det B0 = 1, tr(A0 B0) = y by scanning its upper-left entry
    (at most q trials; each is a quadratic in the lower-left entry).
    """
    x, y = cand.x, cand.y
    one, zero = ctx.one, ctx.zero
    A0 = (x, ctx.neg(one), one, zero)
    p = ctx.p
    for ci in range(ctx.q):
        c = ctx.elem(ci)
        # B0 = [[c, b],[g, x - c]]: b - g = y - x c, det = 1 gives a
        # quadratic g^2 + (y - xc) g + (1 - c(x - c)) = 0
        beta = ctx.sub(y, ctx.mul(x, c))
        const = ctx.sub(one, ctx.mul(c, ctx.sub(x, c)))
        g = _solve_quadratic(ctx, beta, const)
        if g is None:
            continue
        b = ctx.add(g, beta)
        B0 = (c, b, g, ctx.sub(x, c))
        if mat_det(ctx, B0) != one:
            raise InternalInvariantError("B0 determinant drifted")
        if mat_trace(ctx, mat_mul(ctx, A0, B0)) != y:
            raise InternalInvariantError("tr(A0 B0) drifted")
        return A0, B0
    raise InternalInvariantError(
        "no base-field conjugate found for an irreducible candidate"
    )


def _solve_quadratic(ctx, beta, const):
    """Least root of g^2 + beta g + const = 0 over F_q, or None."""
    if ctx.p == 2:
        for gi in range(ctx.q):
            g = ctx.elem(gi)
            if ctx.add(ctx.add(ctx.mul(g, g), ctx.mul(beta, g)), const) == ctx.zero:
                return g
        return None
    disc = ctx.sub(ctx.mul(beta, beta), ctx.mul(ctx.from_int(4), const))
    r = ctx.sqrt(disc)
    if r is None:
        return None
    inv2 = ctx.inv(ctx.from_int(2))
    roots = sorted(
        (ctx.index(ctx.mul(inv2, ctx.sub(s, beta))) for s in (r, ctx.neg(r))),
    )
    return ctx.elem(roots[0])


def _frobenius_orbit_key(ctx, x, y):
    """Minimum over Frobenius twists and allowed lift re-signings of the
    encoded trace pair.  The simultaneous flip (x, y) -> (-x, y) is always
    an equivalence; when x = 0 the single-lift flip (0, y) -> (0, -y) is
    one as well."""
    cands = []
    cx, cy = x, y
    for _ in range(ctx.m):
        for sx in (cx, ctx.neg(cx)):
            cands.append((sx, cy))
            if sx == ctx.zero:
                cands.append((sx, ctx.neg(cy)))
        cx, cy = ctx.frobenius(cx), ctx.frobenius(cy)
    return min(cands)


def enumerate_epimorphisms(spec: OrbifoldSpec, q: int, exact_k: bool = False):
    """All surjections onto PSL2(F_q) up to Aut(PSL2(F_q)), as EpiClass list.

    Meridian traces run over projective orders k' dividing k (k' >= 2), or
    exactly k when exact_k is set; the free parameter t runs over F_q.
    Candidates must satisfy the relators projectively, be absolutely
    irreducible, and generate the full group (exact permutation order on
    the projective line).
    """
    pm = prime_power_split(q)
    if pm is None:
        raise ParameterError(f"{q} is not a prime power")
    ctx = fq_context(*pm)
    p = ctx.p
    target = psl2_order(q)
    canon_order = canonical_meridian_order(spec.k, p)
    ks = [spec.k] if exact_k else [d for d in divisors(spec.k) if d >= 2]
    classes = {}
    seen_keys = set()
    for korder in ks:
        traces = sorted(order_k_traces(ctx, korder, exact=True))
        for x, semisimple in traces:
            for ti in range(1, ctx.q):
                t = ctx.elem(ti)
                cand = build_rep(spec, ctx, x, t, korder=korder)
                if isinstance(cand, str):
                    continue
                key = _frobenius_orbit_key(ctx, cand.x, cand.y)
                if key in seen_keys:
                    continue
                seen_keys.add(key)
                A0, B0 = conjugate_to_base_field(cand, ctx)
                R0 = _relator_matrix(ctx, A0, B0, spec.n)
                if not _is_pm_identity(ctx, R0):
                    raise InternalInvariantError(
                        "relator lost under base-field conjugation"
                    )
                pa, pb = p1_action(ctx, A0), p1_action(ctx, B0)
                orbit, _ = orbit_and_transversal([pa, pb], ctx.q)
                if len(orbit) != ctx.q + 1:
                    continue
                if not group_order_equals([pa, pb], target):
                    continue
                classes[key] = EpiClass(
                    q=q,
                    n=spec.n,
                    k=spec.k,
                    canonical_key=key,
                    x=cand.x,
                    y=cand.y,
                    t=cand.t,
                    korder=korder,
                    semisimple=semisimple,
                    non_canonical=(korder != canon_order),
                    A0=A0,
                    B0=B0,
                    order_verified=True,
                )
    return [classes[k] for k in sorted(classes)]


def cover_betti(epi: EpiClass, P: int, second_prime: int = None) -> CoverRecord:
    """Borel-preimage cover homology proxy for one epimorphism class.

    The cover subgroup is the stabilizer of the point (1:0) (index q+1);
    its mod-P first homology rank is computed by abelianized rewriting.
    """
    if not is_prime(P):
        raise ParameterError(f"proxy prime {P} is not prime")
    pm = prime_power_split(epi.q)
    ctx = fq_context(*pm)
    pres = twist_presentation(OrbifoldSpec(epi.n, epi.k))
    images = [p1_action(ctx, epi.A0), p1_action(ctx, epi.B0)]
    value = betti_proxy_cover(pres, images, ctx.q, P)
    second = None
    if second_prime is not None:
        if not is_prime(second_prime):
            raise ParameterError(f"second prime {second_prime} is not prime")
        second = betti_proxy_cover(pres, images, ctx.q, second_prime)
    return CoverRecord(
        q=epi.q,
        canonical_key=epi.canonical_key,
        betti_proxy=value,
        proxy_prime=P,
        second_proxy=second,
        second_prime=second_prime,
    )


def prime_powers_up_to(q_max: int, max_m: int = 8):
    """Prime powers 2 <= p^m <= q_max with m capped by the field-degree
    guard (covers every norm in the survey range)."""
    out = []
    for q in range(2, q_max + 1):
        pm = prime_power_split(q)
        if pm and pm[1] <= max_m:
            out.append(q)
    return out


@dataclass
class SurveyReport:
    n: int
    k: int
    q_max: int
    proxy_prime: int
    second_prime: int
    exact_k: bool
    records: list  # (EpiClass-lite dict, CoverRecord) per class, sorted
    classes_total: int
    classes_positive: int
    percent: float
    exceptional_norms: list  # positive norms from canonical-order classes
    flagged_positive_norms: list  # positive norms seen only with the flag

    def csv_row(self):
        norms = ",".join(str(q) for q in self.exceptional_norms)
        return (
            f"{self.n},{self.k},{self.q_max},{self.classes_total},"
            f"{self.classes_positive},{self.percent:.4f},\"{norms}\""
        )

    @staticmethod
    def csv_header():
        return "n,k,q_max,classes_total,classes_positive,percent,exceptional_norms"


def compute_q_records(spec_n, spec_k, q, proxy_prime=31991, second_prime=None, exact_k=False):
    """All class records for one (spec, q); importable for worker pools."""
    spec = OrbifoldSpec(spec_n, spec_k)
    out = []
    for epi in enumerate_epimorphisms(spec, q, exact_k=exact_k):
        rec = cover_betti(epi, proxy_prime, second_prime)
        out.append(record_dict(epi, rec))
    return out


def record_dict(epi: EpiClass, rec: CoverRecord) -> dict:
    pm = prime_power_split(epi.q)
    return {
        "n": epi.n,
        "k": epi.k,
        "q": epi.q,
        "p": pm[0],
        "m": pm[1],
        "x": list(epi.x),
        "y": list(epi.y),
        "t": list(epi.t),
        "semisimple": epi.semisimple,
        "korder": epi.korder,
        "non_canonical": epi.non_canonical,
        "canonical_key": [list(epi.canonical_key[0]), list(epi.canonical_key[1])],
        "betti_proxy": rec.betti_proxy,
        "proxy_prime": rec.proxy_prime,
        "second_proxy": rec.second_proxy,
        "second_prime": rec.second_prime,
    }


def _record_positive(r: dict) -> bool:
    if r["betti_proxy"] is None or r["betti_proxy"] <= 0:
        return False
    if r["second_prime"] is not None:
        return r["second_proxy"] > 0
    return True


def aggregate_records(n, k, q_max, records, proxy_prime, second_prime, exact_k):
    """Deterministic survey report from per-class record dicts."""
    records = sorted(
        (r for r in records if r["q"] <= q_max),
        key=lambda r: (r["q"], r["canonical_key"]),
    )
    total = len(records)
    positive = [r for r in records if _record_positive(r)]
    canonical_norms = sorted({r["q"] for r in positive if not r["non_canonical"]})
    flagged_only = sorted(
        {r["q"] for r in positive if r["non_canonical"]} - set(canonical_norms)
    )
    percent = 100.0 * len(positive) / total if total else 0.0
    return SurveyReport(
        n=n,
        k=k,
        q_max=q_max,
        proxy_prime=proxy_prime,
        second_prime=second_prime,
        exact_k=exact_k,
        records=records,
        classes_total=total,
        classes_positive=len(positive),
        percent=percent,
        exceptional_norms=canonical_norms,
        flagged_positive_norms=flagged_only,
    )


def survey(
    spec: OrbifoldSpec,
    q_max: int,
    proxy_prime: int = 31991,
    second_prime: int = None,
    exact_k: bool = False,
    tasks: int = 1,
    progress=None,
) -> SurveyReport:
    """Run the full desk-scale survey for one orbifold (no caching here;
    the CLI layers caching and resume on top)."""
    if q_max < 2:
        raise ParameterError("q_max must be at least 2")
    qs = prime_powers_up_to(q_max)
    records = []
    if tasks > 1:
        import multiprocessing as mp

        with mp.Pool(tasks) as pool:
            argss = [
                (spec.n, spec.k, q, proxy_prime, second_prime, exact_k) for q in qs
            ]
            for part in pool.starmap(compute_q_records, argss):
                records.extend(part)
    else:
        for q in qs:
            records.extend(
                compute_q_records(spec.n, spec.k, q, proxy_prime, second_prime, exact_k)
            )
            if progress:
                progress(q)
    return aggregate_records(
        spec.n, spec.k, q_max, records, proxy_prime, second_prime, exact_k
    )
