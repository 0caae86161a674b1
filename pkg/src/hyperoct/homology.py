"""Exact homology of truncated complexes.

Field coefficients go through sparse column echelon (rank-nullity); integer
coefficients go through Smith normal form with smallest-pivot selection to
restrain entry growth.  Also hosts the is-a-boundary solver used by the
chain-homotopy verification and the universal-coefficient dimension check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .matrices import SparseMatrix
from .rings import QQ, ZZ, GF


class HomologyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# field elimination
# ---------------------------------------------------------------------------

def _int_columns_rank(cols, normalize_every: int = 1) -> int:
    """Echelon rank of integer columns with gcd-normalized pivot rows."""
    pivots: dict = {}
    rank = 0
    for col in cols:
        vec = {k: v for k, v in col.items() if v}
        while vec:
            r = min(vec)
            piv = pivots.get(r)
            if piv is None:
                g = 0
                for v in vec.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    vec = {k: v // g for k, v in vec.items()}
                pivots[r] = vec
                rank += 1
                break
            a = piv[r]
            b = vec[r]
            new = {k: a * v for k, v in vec.items()}
            for k, v in piv.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            new.pop(r, None)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {k: v // g for k, v in new.items()}
            vec = new
    return rank


def _modp_columns_rank(cols, p: int) -> int:
    pivots: dict = {}
    rank = 0
    for col in cols:
        vec = {k: v % p for k, v in col.items() if v % p}
        while vec:
            r = min(vec)
            piv = pivots.get(r)
            if piv is None:
                inv = pow(vec[r], p - 2, p)
                pivots[r] = {k: (inv * v) % p for k, v in vec.items()}
                rank += 1
                break
            b = vec[r]
            for k, v in piv.items():
                w = (vec.get(k, 0) - b * v) % p
                if w:
                    vec[k] = w
                else:
                    vec.pop(k, None)
        # loop exits when vec reduces to zero or a pivot is recorded
    return rank


def field_rank(M: SparseMatrix) -> int:
    """Exact rank over a field.

    The elimination is oriented so the row space is the small side: fill-in
    and pivot count stay bounded by the number of rows while the many columns
    stream through once.  Rational matrices are column-scaled to integers and
    eliminated fraction-free."""
    ring = M.ring
    if not ring.is_field:
        raise HomologyError("field_rank needs a field")
    if M.nrows > M.ncols:
        M = M.transpose()
    if ring == QQ:
        def int_cols():
            for col in M.cols:
                if not col:
                    yield col
                    continue
                denom = 1
                for v in col.values():
                    denom = denom * v.denominator // gcd(denom, v.denominator)
                yield {k: int(v * denom) for k, v in col.items()}
        return _int_columns_rank(int_cols())
    if ring.characteristic > 0:
        return _modp_columns_rank(M.cols, ring.characteristic)
    raise HomologyError(f"no rank routine for {ring.name}")


def integer_rank(M: SparseMatrix) -> int:
    """Rank of an integer matrix (= its rank over the rationals)."""
    if M.nrows > M.ncols:
        M = M.transpose()
    return _int_columns_rank(M.cols)


def matrix_rank(M: SparseMatrix) -> int:
    return field_rank(M) if M.ring.is_field else integer_rank(M)


def field_solve(A: SparseMatrix, b: dict):
    """Solve ``A x = b`` over a field.

    Returns a sparse solution dict or None when the system is inconsistent
    (callers certify refusals with the rank criterion)."""
    ring = A.ring
    pivots: dict = {}
    exprs: dict = {}
    for j, col in enumerate(A.cols):
        vec = dict(col)
        expr = {j: ring.one()}
        while vec:
            r = min(vec)
            piv = pivots.get(r)
            if piv is None:
                inv = ring.div(ring.one(), vec[r])
                pivots[r] = {rr: ring.mul(inv, vv) for rr, vv in vec.items()}
                exprs[r] = {jj: ring.mul(inv, cc) for jj, cc in expr.items()}
                break
            c = vec[r]
            for rr, vv in piv.items():
                cur = vec.get(rr)
                s = ring.sub(cur if cur is not None else ring.zero(), ring.mul(c, vv))
                if ring.is_zero(s):
                    vec.pop(rr, None)
                else:
                    vec[rr] = s
            for jj, cc in exprs[r].items():
                cur = expr.get(jj)
                s = ring.sub(cur if cur is not None else ring.zero(), ring.mul(c, cc))
                if ring.is_zero(s):
                    expr.pop(jj, None)
                else:
                    expr[jj] = s
    # reduce b, collecting the combination of pivot expressions
    vec = dict(b)
    combo: dict = {}
    while vec:
        r = min(vec)
        piv = pivots.get(r)
        if piv is None:
            return None
        c = vec[r]
        for rr, vv in piv.items():
            cur = vec.get(rr)
            s = ring.sub(cur if cur is not None else ring.zero(), ring.mul(c, vv))
            if ring.is_zero(s):
                vec.pop(rr, None)
            else:
                vec[rr] = s
        for jj, cc in exprs[r].items():
            cur = combo.get(jj)
            s = ring.add(cur if cur is not None else ring.zero(), ring.mul(c, cc))
            if ring.is_zero(s):
                combo.pop(jj, None)
            else:
                combo[jj] = s
    return combo


def field_kernel_sample(complex_, degree: int, limit: int = 10):
    """Up to ``limit`` cycles in the given degree, as sparse vectors.

    Every degree-zero chain is a cycle; in higher degrees kernel vectors of
    the boundary are collected from the columns that reduce to zero during
    expression-tracked elimination."""
    ring = complex_.ring
    if degree == 0:
        dim = complex_.dimension(0)
        return [{i: ring.one()} for i in range(min(limit, dim))]
    A = complex_.boundary(degree)
    pivots: dict = {}
    exprs: dict = {}
    out = []
    for j in range(A.ncols):
        vec = dict(A.cols[j])
        expr = {j: ring.one()}
        while vec:
            r = min(vec)
            piv = pivots.get(r)
            if piv is None:
                inv = ring.div(ring.one(), vec[r])
                pivots[r] = {k: ring.mul(inv, v) for k, v in vec.items()}
                exprs[r] = {k: ring.mul(inv, v) for k, v in expr.items()}
                break
            c = vec[r]
            for k, v in piv.items():
                cur = vec.get(k)
                s = ring.sub(cur if cur is not None else ring.zero(),
                             ring.mul(c, v))
                if ring.is_zero(s):
                    vec.pop(k, None)
                else:
                    vec[k] = s
            for k, v in exprs[r].items():
                cur = expr.get(k)
                s = ring.sub(cur if cur is not None else ring.zero(),
                             ring.mul(c, v))
                if ring.is_zero(s):
                    expr.pop(k, None)
                else:
                    expr[k] = s
        if not vec and expr:
            out.append(expr)
            if len(out) >= limit:
                break
    return out


# ---------------------------------------------------------------------------
# Smith normal form (dense, arbitrary-precision integers)
# ---------------------------------------------------------------------------

def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def diagonalize_integer_matrix(M: SparseMatrix, transforms: bool = False):
    """Diagonalize by unimodular row/column operations: D = S A T.

    Returns (diag entries, S, T); S and T are dense row-lists or None.
    Divisibility of the diagonal is not enforced here."""
    if M.ring != ZZ:
        raise HomologyError("integer diagonalization needs the integer ring")
    m, n = M.nrows, M.ncols
    D = [[0] * n for _ in range(m)]
    for j, col in enumerate(M.cols):
        for r, v in col.items():
            D[r][j] = v
    S = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transforms else None
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if transforms else None

    def row_op(i1, i2, a, b, c, d):
        # (row i1, row i2) <- (a*r1 + b*r2, c*r1 + d*r2)
        for arr in (D, S) if transforms else (D,):
            if arr is None:
                continue
            r1, r2 = arr[i1], arr[i2]
            for k in range(len(r1)):
                x, y = r1[k], r2[k]
                r1[k] = a * x + b * y
                r2[k] = c * x + d * y

    def col_op(j1, j2, a, b, c, d):
        for arr in (D,):
            for row in arr:
                x, y = row[j1], row[j2]
                row[j1] = a * x + b * y
                row[j2] = c * x + d * y
        if transforms:
            for row in T:
                x, y = row[j1], row[j2]
                row[j1] = a * x + b * y
                row[j2] = c * x + d * y

    k = 0
    while k < min(m, n):
        # smallest nonzero pivot in the remaining block
        best = None
        for i in range(k, m):
            rowi = D[i]
            for j in range(k, n):
                v = rowi[j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            row_op(k, pi, 0, 1, 1, 0)
        if pj != k:
            col_op(k, pj, 0, 1, 1, 0)
        while True:
            for i in range(k + 1, m):
                v = D[i][k]
                if v == 0:
                    continue
                p = D[k][k]
                if v % p == 0:
                    row_op(k, i, 1, 0, -(v // p), 1)
                else:
                    x, y, g = _xgcd(p, v)
                    row_op(k, i, x, y, -(v // g), p // g)
            if all(D[i][k] == 0 for i in range(k + 1, m)):
                pass
            else:
                continue
            for j in range(k + 1, n):
                v = D[k][j]
                if v == 0:
                    continue
                p = D[k][k]
                if v % p == 0:
                    col_op(k, j, 1, 0, -(v // p), 1)
                else:
                    x, y, g = _xgcd(p, v)
                    col_op(k, j, x, y, -(v // g), p // g)
            if all(D[i][k] == 0 for i in range(k + 1, m)) and \
                    all(D[k][j] == 0 for j in range(k + 1, n)):
                break
        k += 1
    diag = [D[i][i] for i in range(min(m, n))]
    return diag, S, T


def invariant_factors(M: SparseMatrix):
    """Nontrivial invariant factors (each dividing the next, all > 1)."""
    diag = [abs(d) for d in diagonalize_integer_matrix(M)[0] if d != 0]
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i] != 0:
                    g = gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
                    changed = True
    diag.sort()
    return [d for d in diag if d != 1]


def integer_solve(A: SparseMatrix, b: dict):
    """Integral solution of ``A x = b`` or None."""
    diag, S, T = diagonalize_integer_matrix(A, transforms=True)
    m, n = A.nrows, A.ncols
    y = [0] * m
    for r in range(m):
        acc = 0
        for rr, v in b.items():
            acc += S[r][rr] * v
        y[r] = acc
    x_diag = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if i < n and d != 0:
            if y[i] % d != 0:
                return None
            x_diag[i] = y[i] // d
        elif y[i] != 0:
            return None
    sol = {}
    for r in range(n):
        acc = 0
        for i in range(n):
            if x_diag[i]:
                acc += T[r][i] * x_diag[i]
        if acc:
            sol[r] = acc
    return sol


# ---------------------------------------------------------------------------
# homology of truncated complexes
# ---------------------------------------------------------------------------

@dataclass
class HomologyResult:
    """Per-degree Betti numbers, with invariant factors over the integers."""

    ring_name: str
    betti: list
    torsion: list = field(default_factory=list)

    def __post_init__(self):
        if any(b < 0 for b in self.betti):
            raise HomologyError("negative Betti number")
        for factors in self.torsion:
            for a, b in zip(factors, factors[1:]):
                if b % a != 0:
                    raise HomologyError("invariant factors must divide in turn")

    @property
    def degrees(self):
        return range(len(self.betti))


def homology_over_field(complex_, up_to: int | None = None) -> HomologyResult:
    """Betti numbers via rank-nullity; needs the boundary one degree above
    the last reported degree.  ``up_to`` caps the reported degrees (and the
    ranks computed) below the policy's maximum."""
    ring = complex_.ring
    if not ring.is_field:
        raise HomologyError("homology_over_field needs a field")
    D = complex_.policy.max_degree
    if up_to is not None:
        D = min(D, up_to)
    ranks = {}
    for n in range(1, D + 2):
        ranks[n] = field_rank(complex_.boundary(n))
    betti = []
    for n in range(D + 1):
        b = complex_.dimension(n) - ranks.get(n, 0) - ranks[n + 1]
        betti.append(b)
    return HomologyResult(ring.name, betti)


def homology_over_Z(complex_, up_to: int | None = None) -> HomologyResult:
    """Free rank and invariant factors per degree via Smith normal form.

    The kernel of an integer matrix is a direct summand, so the torsion of
    degree n is read off the normal form of the boundary from degree n+1."""
    if complex_.ring != ZZ:
        raise HomologyError("homology_over_Z needs the integer ring")
    D = complex_.policy.max_degree
    if up_to is not None:
        D = min(D, up_to)
    ranks = {}
    torsions = {}
    for n in range(1, D + 2):
        M = complex_.boundary(n)
        ranks[n] = integer_rank(M)
        torsions[n] = invariant_factors(M)
    betti = []
    torsion = []
    for n in range(D + 1):
        betti.append(complex_.dimension(n) - ranks.get(n, 0) - ranks[n + 1])
        torsion.append(torsions[n + 1])
    return HomologyResult("Z", betti, torsion)


def compute_homology(complex_, up_to: int | None = None) -> HomologyResult:
    return homology_over_Z(complex_, up_to) if complex_.ring == ZZ \
        else homology_over_field(complex_, up_to)


@dataclass
class BoundaryWitness:
    degree: int
    witness: dict | None
    rank_matrix: int | None = None
    rank_augmented: int | None = None

    @property
    def is_boundary(self) -> bool:
        return self.witness is not None


def solve_is_boundary(complex_, degree: int, z: dict) -> BoundaryWitness:
    """Witness ``z = d w`` with ``w`` one degree up, or a certified refusal.

    ``z`` must be a cycle; refusals come with the rank certificate
    rank(A) < rank(A | z)."""
    ring = complex_.ring
    if degree >= 1:
        bz = complex_.boundary(degree).apply(z)
        if bz:
            raise HomologyError("input vector is not a cycle")
    A = complex_.boundary(degree + 1)
    if ring.is_field:
        sol = field_solve(A, z)
    else:
        sol = integer_solve(A, z)
    if sol is not None:
        check = A.apply(sol)
        if check != {r: v for r, v in z.items() if not ring.is_zero(v)}:
            raise HomologyError("solver produced an invalid witness")
        return BoundaryWitness(degree, sol)
    # refusal certificate
    aug = SparseMatrix(ring, A.nrows, A.ncols + 1,
                       [dict(c) for c in A.cols] + [dict(z)])
    return BoundaryWitness(degree, None,
                           rank_matrix=matrix_rank(A),
                           rank_augmented=matrix_rank(aug))


# ---------------------------------------------------------------------------
# universal coefficients
# ---------------------------------------------------------------------------

def uct_check(complex_, p: int) -> dict:
    """Dimension count of the coefficient short exact sequence at the prime p.

    For every degree n the residue-field dimension of homology with Z/p
    coefficients must equal dim(H_n (x) Z/p) + dim Tor_1(H_{n-1}, Z/p),
    both read off the integral Smith data."""
    if complex_.ring != ZZ:
        raise HomologyError("the coefficient check starts from an integer complex")
    field = GF(p)
    integral = homology_over_Z(complex_)
    from .complexes import tensor_with_coefficients, CoefficientModule
    reduced = tensor_with_coefficients(complex_, CoefficientModule(0, (p,)))
    modp = homology_over_field(reduced.components[0][1])
    report = {"prime": p, "degrees": [], "ok": True}
    for n in integral.degrees:
        tensor_dim = integral.betti[n] + sum(
            1 for t in integral.torsion[n] if t % p == 0)
        tor_dim = 0 if n == 0 else sum(
            1 for t in integral.torsion[n - 1] if t % p == 0)
        middle = modp.betti[n]
        ok = middle == tensor_dim + tor_dim
        report["degrees"].append({
            "degree": n, "middle": middle,
            "tensor": tensor_dim, "tor": tor_dim, "ok": ok})
        report["ok"] = report["ok"] and ok
    return report
