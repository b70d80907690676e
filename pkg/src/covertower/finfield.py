"""Arithmetic in F_{p^m}, 2x2 matrices, and the projective-line action.

Field elements are coefficient tuples of length m, low degree first, with
entries in 0..p-1.  Each context owns a deterministic modulus: the monic
irreducible of degree m whose coefficient vector, read as base-p digits
(low degree least significant), is smallest.  No Conway-polynomial tables;
where F_q inside F_{q^2} is needed, the embedding is computed once per
context pair by root-finding.
"""

from functools import lru_cache

from .arith import divisors, factorize, is_prime, prime_power_split
from .errors import DomainError, ParameterError
from .fpcore.perms import Permutation


def _poly_mul_mod(a, b, p, red):
    """Product of coefficient tuples mod p, reduced by the table `red`
    (red[j] = coeffs of z^(m+j))."""
    m = len(red[0]) if red else 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for j, rj in enumerate(red[d - m]):
                prod[j] = (prod[j] + c * rj) % p
    out = prod[:m]
    out += [0] * (m - len(out))
    return tuple(out)


def _poly_is_irreducible(coeffs, p):
    """Monic polynomial z^m + sum coeffs[i] z^i irreducible over F_p?

    Checks gcd(f, z^(p^d) - z) = 1 for d <= m/2 (no factor of degree <= m/2).
    """
    m = len(coeffs)
    if m == 1:
        return True
    f = list(coeffs) + [1]

    def polymod(a, g):
        a = list(a)
        while len(a) >= len(g):
            c = a[-1]
            if c:
                shift = len(a) - len(g)
                for i, gi in enumerate(g):
                    a[shift + i] = (a[shift + i] - c * gi) % p
            a.pop()
        while a and a[-1] == 0:
            a.pop()
        return a

    def polmulmod(a, b):
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        return polymod(prod, f)

    def polpow_p(a):
        result = [1]
        base = list(a)
        e = p
        while e:
            if e & 1:
                result = polmulmod(result, base)
            base = polmulmod(base, base)
            e >>= 1
        return result

    def monicize(a):
        if not a:
            return a
        lead = a[-1]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            a = [(x * inv) % p for x in a]
        return a

    cur = polpow_p([0, 1])  # z^p mod f
    for _ in range(m // 2):
        h = list(cur) + [0, 0]
        h[1] = (h[1] - 1) % p
        while h and h[-1] == 0:
            h.pop()
        a, b = list(f), monicize(h)
        while b:
            a, b = b, monicize(polymod(a, b))
        if len(a) != 1:
            return False
        cur = polpow_p(cur)
    return True


class FqCtx:
    """Immutable finite-field context; shareable across tasks."""

    def __init__(self, p, m, _wide_ok=False):
        if not is_prime(p):
            raise ParameterError(f"{p} is not prime")
        limit = 16 if _wide_ok else 8
        if not 1 <= m <= limit:
            raise ParameterError(f"extension degree {m} outside 1..{limit}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = self._find_modulus(p, m)
        # reduction table: z^(m+j) for j = 0..m-2 expressed in degrees < m
        red = []
        if m > 1:
            base = tuple((-c) % p for c in self.modulus[:m])
            red.append(base)
            for _ in range(m - 2):
                prev = red[-1]
                shifted = [0] + list(prev)
                carry = shifted[m] if len(shifted) > m else 0
                shifted = shifted[:m]
                if carry:
                    shifted = [(x + carry * b) % p for x, b in zip(shifted, base)]
                red.append(tuple(shifted))
        self._red = red
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)
        self._gen_cache = None
        self._sqrt_cache = None

    @staticmethod
    def _find_modulus(p, m):
        if m == 1:
            return (0, 1)  # the polynomial z
        for v in range(p**m):
            coeffs = []
            x = v
            for _ in range(m):
                coeffs.append(x % p)
                x //= p
            if _poly_is_irreducible(coeffs, p):
                return tuple(coeffs) + (1,)
        raise ParameterError(f"no irreducible of degree {m} over F_{p}")  # unreachable

    # --- element plumbing -------------------------------------------------
    def elem(self, i: int):
        """i-th element: base-p digits of i, little-endian."""
        if not 0 <= i < self.q:
            raise ParameterError(f"element index {i} outside 0..{self.q - 1}")
        coeffs = []
        for _ in range(self.m):
            coeffs.append(i % self.p)
            i //= self.p
        return tuple(coeffs)

    def index(self, a) -> int:
        i = 0
        for c in reversed(a):
            i = i * self.p + c
        return i

    def from_int(self, n: int):
        return (n % self.p,) + (0,) * (self.m - 1)

    def elements(self):
        return (self.elem(i) for i in range(self.q))

    # --- field arithmetic -------------------------------------------------
    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.m == 1:
            return ((a[0] * b[0]) % self.p,)
        return _poly_mul_mod(a, b, self.p, self._red)

    def square(self, a):
        return self.mul(a, a)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise DomainError("inverse of zero")
        if self.m == 1:
            return (pow(a[0], self.p - 2, self.p),)
        return self.pow(a, self.q - 2)

    def frobenius(self, a):
        """a -> a^p."""
        return self.pow(a, self.p)

    def sqrt(self, a):
        """A square root in this field, or None.  Table-based; cached."""
        if self._sqrt_cache is None:
            table = {}
            for i in range(self.q):
                e = self.elem(i)
                s = self.mul(e, e)
                if s not in table:
                    table[s] = e
            self._sqrt_cache = table
        return self._sqrt_cache.get(a)

    def multiplicative_generator(self):
        """Least-index generator of the multiplicative group."""
        if self._gen_cache is None:
            fac = factorize(self.q - 1) if self.q > 2 else {}
            for i in range(1, self.q):
                g = self.elem(i)
                if all(self.pow(g, (self.q - 1) // ell) != self.one for ell in fac):
                    self._gen_cache = g
                    break
        return self._gen_cache

    def __eq__(self, other):
        return (
            isinstance(other, FqCtx) and self.p == other.p and self.m == other.m
        )

    def __hash__(self):
        return hash((self.p, self.m))

    def __repr__(self):
        return f"FqCtx(p={self.p}, m={self.m})"


@lru_cache(maxsize=None)
def fq_context(p: int, m: int) -> FqCtx:
    """Public context constructor (degrees 1..8)."""
    return FqCtx(p, m)


@lru_cache(maxsize=None)
def _wide_context(p: int, m: int) -> FqCtx:
    return FqCtx(p, m, _wide_ok=True)


@lru_cache(maxsize=None)
def quadratic_extension(ctx: FqCtx):
    """(F_{q^2} context, embedding dict F_q elem -> F_{q^2} elem).

    The embedding sends the class of z to the least root (in enumeration
    order) of ctx's modulus inside the big field; deterministic.
    """
    ctx2 = _wide_context(ctx.p, 2 * ctx.m)
    # find the least root of ctx.modulus in ctx2
    root = None
    for i in range(ctx2.q):
        cand = ctx2.elem(i)
        acc = ctx2.zero
        power = ctx2.one
        for c in ctx.modulus:
            if c:
                acc = ctx2.add(acc, ctx2.mul(ctx2.from_int(c), power))
            power = ctx2.mul(power, cand)
        if acc == ctx2.zero:
            root = cand
            break
    if root is None:
        raise DomainError("modulus has no root in the quadratic extension")
    emb = {}
    for i in range(ctx.q):
        a = ctx.elem(i)
        acc = ctx2.zero
        power = ctx2.one
        for c in a:
            if c:
                acc = ctx2.add(acc, ctx2.mul(ctx2.from_int(c), power))
            power = ctx2.mul(power, root)
        emb[a] = acc
    return ctx2, emb


def element_order(ctx: FqCtx, e) -> int:
    """Multiplicative order, via the factorization of q-1."""
    if e == ctx.zero:
        raise DomainError("order of zero is undefined")
    order = ctx.q - 1
    for ell in factorize(order):
        while order % ell == 0 and ctx.pow(e, order // ell) == ctx.one:
            order //= ell
    return order


def order_k_traces(ctx: FqCtx, k: int, exact: bool = True):
    """Traces of 2x2 determinant-1 matrices of prescribed projective order.

    With `exact`, all x in F_q such that some det-1 matrix of trace x has
    image of order exactly k in PSL2(F_q).  Semisimple points are
    x = z + 1/z for z in mu_{q-1} or mu_{q+1} inside F_{q^2} with
    ord(z^2) = k; if p divides k the unipotent traces +-2 join the set,
    flagged non-semisimple.  Without `exact`, the union over divisors
    k' >= 2 of k.

    Returns a set of (x, semisimple) pairs.
    """
    if k < 2:
        raise ParameterError("projective order must be at least 2")
    ks = [k] if exact else [d for d in divisors(k) if d >= 2]
    out = set()
    ctx2, emb = quadratic_extension(ctx)
    inv_emb = {v: a for a, v in emb.items()}
    q = ctx.q
    qq = ctx2.q - 1  # order of the big multiplicative group
    gamma = ctx2.multiplicative_generator()
    from math import gcd

    for subgroup_order, step in ((q - 1, q + 1), (q + 1, q - 1)):
        if subgroup_order <= 0:
            continue
        base = ctx2.pow(gamma, step)
        base_inv = ctx2.inv(base)
        zeta, zeta_inv = ctx2.one, ctx2.one
        for e in range(subgroup_order):
            if e:
                zeta = ctx2.mul(zeta, base)
                zeta_inv = ctx2.mul(zeta_inv, base_inv)
            # ord(zeta^2) from exponent arithmetic: zeta = gamma^(step*e)
            expo = (2 * step * e) % qq
            o = qq // gcd(qq, expo) if expo else 1
            if o in ks:
                x2 = ctx2.add(zeta, zeta_inv)
                x = inv_emb.get(x2)
                if x is None:
                    raise DomainError("trace outside the base field")  # unreachable
                out.add((x, True))
    p = ctx.p
    include_unipotent = (k == p) if exact else (k % p == 0)
    if include_unipotent:
        out.add((ctx.from_int(2), False))
        out.add((ctx.from_int(-2), False))
    return out


# --- 2x2 matrices ---------------------------------------------------------
# A matrix is a 4-tuple (a11, a12, a21, a22) of field elements.


def mat_identity(ctx):
    return (ctx.one, ctx.zero, ctx.zero, ctx.one)


def mat_mul(ctx, A, B):
    a, b, c, d = A
    e, f, g, h = B
    return (
        ctx.add(ctx.mul(a, e), ctx.mul(b, g)),
        ctx.add(ctx.mul(a, f), ctx.mul(b, h)),
        ctx.add(ctx.mul(c, e), ctx.mul(d, g)),
        ctx.add(ctx.mul(c, f), ctx.mul(d, h)),
    )


def mat_det(ctx, A):
    a, b, c, d = A
    return ctx.sub(ctx.mul(a, d), ctx.mul(b, c))


def mat_trace(ctx, A):
    return ctx.add(A[0], A[3])


def mat_neg(ctx, A):
    return tuple(ctx.neg(x) for x in A)


def mat_inv(ctx, A):
    """Inverse; for det 1 this is the adjugate (fast path)."""
    a, b, c, d = A
    det = mat_det(ctx, A)
    if det == ctx.zero:
        raise DomainError("matrix is singular")
    adj = (d, ctx.neg(b), ctx.neg(c), a)
    if det == ctx.one:
        return adj
    di = ctx.inv(det)
    return tuple(ctx.mul(di, x) for x in adj)


def mat_pow(ctx, A, e: int):
    if e < 0:
        return mat_pow(ctx, mat_inv(ctx, A), -e)
    result = mat_identity(ctx)
    base = A
    while e:
        if e & 1:
            result = mat_mul(ctx, result, base)
        base = mat_mul(ctx, base, base)
        e >>= 1
    return result


def commutator_trace(ctx, A, B):
    """tr(A B A^-1 B^-1); equals 2 exactly when the pair is reducible
    (for an irreducible det-1 pair the test is two-sided)."""
    C = mat_mul(ctx, mat_mul(ctx, A, B), mat_mul(ctx, mat_inv(ctx, A), mat_inv(ctx, B)))
    return mat_trace(ctx, C)


def mat_projective_order(ctx, A, bound=None):
    """Order of A in PGL2; walks powers until +-identity."""
    ident = mat_identity(ctx)
    neg_ident = mat_neg(ctx, ident)
    cur = A
    n = 1
    limit = bound or (ctx.q + 1)
    while n <= limit:
        if cur == ident or cur == neg_ident:
            return n
        cur = mat_mul(ctx, cur, A)
        n += 1
    raise DomainError("projective order exceeds bound")


class Mat2Algebra:
    """Operation suite over one context (spec surface for the matrix ops)."""

    def __init__(self, ctx):
        self.ctx = ctx

    def mul(self, A, B):
        return mat_mul(self.ctx, A, B)

    def inverse(self, A):
        return mat_inv(self.ctx, A)

    def det(self, A):
        return mat_det(self.ctx, A)

    def trace(self, A):
        return mat_trace(self.ctx, A)

    def power(self, A, e):
        return mat_pow(self.ctx, A, e)

    def commutator_trace(self, A, B):
        return commutator_trace(self.ctx, A, B)

    def identity(self):
        return mat_identity(self.ctx)


def mat2_algebra(ctx) -> Mat2Algebra:
    return Mat2Algebra(ctx)


def p1_action(ctx, M):
    """Permutation of P^1(F_q) induced by a nonsingular matrix.

    Point i < q is (elem(i) : 1); point q is (1 : 0).  The action is by
    Moebius transformation on projective columns.
    """
    if mat_det(ctx, M) == ctx.zero:
        raise DomainError("singular matrix does not act on P^1")
    a, b, c, d = M
    q = ctx.q
    images = []
    for i in range(q):
        z = ctx.elem(i)
        num = ctx.add(ctx.mul(a, z), b)
        den = ctx.add(ctx.mul(c, z), d)
        if den == ctx.zero:
            images.append(q)
        else:
            images.append(ctx.index(ctx.mul(num, ctx.inv(den))))
    # (1 : 0) -> (a : c)
    if c == ctx.zero:
        images.append(q)
    else:
        images.append(ctx.index(ctx.mul(a, ctx.inv(c))))
    return Permutation(images)


def psl2_order(q: int) -> int:
    return q * (q * q - 1) // (2 if q % 2 else 1)


def fq_context_for(q: int) -> FqCtx:
    """Context for a prime power given multiplicatively."""
    pm = prime_power_split(q)
    if pm is None:
        raise ParameterError(f"{q} is not a prime power")
    return fq_context(*pm)
