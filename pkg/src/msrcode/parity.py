"""The structured parity-check system H = J0 + c0*E, GF linear algebra,
and the exhaustive search for an MDS-realizing coefficient c0.

The code on an alpha x n array is cut out by q^(t+1) linear constraints,
one per (delta, anchor-row) pair:

  delta = 0   row-parity: the n symbols of the anchor row, weighted by row
              `0` of a q x n Vandermonde matrix (all ones).
  delta != 0  delta-parity: the same n in-row symbols weighted by row
              `delta` of the Vandermonde matrix, plus t "shifted" symbols
              C(..., x_j - delta, ...; (j, x_j)), one per class, all
              weighted by the single scalar c0.

Flattened node-by-node this is exactly J0 + c0*E with J0 the Kronecker
product of the Vandermonde matrix with an alpha x alpha identity.  The MDS
property is equivalent to every q-thick-column submatrix having full rank
q^(t+1); find_c0 scans nonzero candidates in ascending order and returns
the first one passing every subset rank check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .gf import GF2M, ring_sub
from .params import CodeParams, Node, Row, make_params

# Exhaustive-check ceiling: refuse (rather than silently sample) when the
# number of size-q node subsets exceeds this.
MAX_SUBSET_CHECKS = 10**6


class Term(NamedTuple):
    """One summand coeff * C(row; node) of a parity-check constraint."""

    row: Row
    node: Node
    coeff: int


@dataclass(frozen=True)
class Constraint:
    """One parity-check equation: sum of terms equals zero.

    delta = 0 constraints hold n in-row terms; delta != 0 constraints hold
    those plus t shifted terms (rows off the anchor).
    """

    delta: int
    anchor: Row
    terms: tuple[Term, ...]


class ParityCheckSystem:
    """All q^(t+1) constraints of one code instance, delta-major then
    anchor-row ordinal, together with the Vandermonde coefficient matrix.

    Immutable once built (the lazily filled inverse caches are
    confined to single-threaded use)."""

    def __init__(self, params: CodeParams, hmds: list[list[int]], c0: int,
                 constraints: list[Constraint]):
        self.params = params
        self.hmds = hmds
        self.c0 = c0
        self.constraints = constraints
        self._inverse_cache: dict[tuple[Node, ...], list[list[int]]] = {}
        self._map_cache: dict[tuple[Node, ...], list[list[int]]] = {}

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def constraint(self, delta: int, anchor: Row) -> Constraint:
        p = self.params
        return self.constraints[delta * p.alpha + p.row_ordinal(anchor)]

    def flat_column(self, row: Row, node: Node) -> int:
        """Column of symbol (row, node) in the flattened (vectorized) matrix."""
        p = self.params
        return p.node_ordinal(node) * p.alpha + p.row_ordinal(row)

    def flatten(self) -> list[list[int]]:
        """Dense q^(t+1) x n*alpha matrix over the symbol field.

        Asserts the support-disjointness invariant: within one constraint no
        two terms may land on the same flattened column (in-row entries and
        shifted entries always differ in row, classes differ in node).
        """
        p = self.params
        width = p.n * p.alpha
        mat = []
        for con in self.constraints:
            dense = [0] * width
            for term in con.terms:
                col = self.flat_column(term.row, term.node)
                assert dense[col] == 0, "J0/E supports must not collide"
                dense[col] = term.coeff
            mat.append(dense)
        return mat

    def thick_submatrix(self, nodes: Iterable[Node]) -> list[list[int]]:
        """Columns of the flattened matrix belonging to `nodes`, node-major
        in ascending node-ordinal order."""
        p = self.params
        chosen = sorted(set(nodes), key=p.node_ordinal)
        if not chosen:
            raise ValueError("empty node set")
        col_base = {node: i * p.alpha for i, node in enumerate(chosen)}
        width = len(chosen) * p.alpha
        mat = []
        for con in self.constraints:
            dense = [0] * width
            for term in con.terms:
                base = col_base.get(term.node)
                if base is not None:
                    dense[base + p.row_ordinal(term.row)] = term.coeff
            mat.append(dense)
        return mat

    def inverse_for(self, missing: Iterable[Node]) -> list[list[int]]:
        """Cached inverse of the square thick submatrix over `missing`
        (|missing| = q); the kernel of encode and of any-k decode."""
        p = self.params
        key = tuple(sorted(set(missing), key=p.node_ordinal))
        if len(key) != p.q:
            raise ValueError(f"need exactly {p.q} missing nodes, got {len(key)}")
        inv = self._inverse_cache.get(key)
        if inv is None:
            inv = gf_inv_matrix(self.thick_submatrix(key), p.gf)
            self._inverse_cache[key] = inv
        return inv

    def completion_map(self, missing: Iterable[Node]) -> list[list[int]]:
        """Cached dense map M with  missing_vec = M . known_vec  over the
        field, known columns node-major ascending.  Fuses the submatrix
        inverse with the known-side coefficients so bulk paths can apply a
        single matrix."""
        p = self.params
        key = tuple(sorted(set(missing), key=p.node_ordinal))
        mapped = self._map_cache.get(key)
        if mapped is None:
            known = [nd for nd in p.nodes() if nd not in set(key)]
            mapped = gf_matmul(self.inverse_for(key), self.thick_submatrix(known), p.gf)
            self._map_cache[key] = mapped
        return mapped


def build_hmds(params: CodeParams) -> list[list[int]]:
    """The q x n Vandermonde coefficient matrix: entry (r, j) is a_j^r with
    a_j the (j+1)-th power of the field generator.  Row 0 is all ones; the
    a_j are distinct and nonzero, so any q columns are independent (the
    parity-check of an [n, k] MDS code)."""
    gf = params.gf
    span = gf.order - 1
    return [
        [gf.exp(((j + 1) * r) % span) for j in range(params.n)]
        for r in range(params.q)
    ]


def build_system(params: CodeParams, c0: int) -> ParityCheckSystem:
    """Assemble all constraints for the given shifted-entry coefficient.

    c0 = 0 is permitted only for diagnostics (it yields exactly the
    Kronecker block matrix without the shifted entries); encoders reject it.
    """
    gf = params.gf
    gf.validate(c0)
    hmds = build_hmds(params)
    node_list = list(params.nodes())
    node_ord = {nd: o for o, nd in enumerate(node_list)}
    constraints = []
    for delta in range(params.q):
        coeff_row = hmds[delta]
        for anchor in params.rows():
            terms = [
                Term(anchor, nd, coeff_row[node_ord[nd]]) for nd in node_list
            ]
            if delta != 0 and c0 != 0:
                for j in range(1, params.t + 1):
                    xj = anchor[j - 1]
                    shifted = list(anchor)
                    shifted[j - 1] = ring_sub(xj, delta, params.q)
                    terms.append(Term(tuple(shifted), (j, xj), c0))
            constraints.append(Constraint(delta, anchor, tuple(terms)))
    return ParityCheckSystem(params, hmds, c0, constraints)


# -- dense linear algebra over the symbol field ------------------------------


def gf_rank(mat: Sequence[Sequence[int]], gf: GF2M) -> int:
    """Row rank by Gaussian elimination; deterministic pivoting (first
    nonzero row in column order)."""
    rows = [list(r) for r in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        pinv = gf.inv(prow[col])
        for r in range(rank + 1, len(rows)):
            f = rows[r][col]
            if f:
                scale = gf.mul(f, pinv)
                row = rows[r]
                for c in range(col, ncols):
                    if prow[c]:
                        row[c] ^= gf.mul(scale, prow[c])
        rank += 1
        if rank == len(rows):
            break
    return rank


def gf_inv_matrix(mat: Sequence[Sequence[int]], gf: GF2M) -> list[list[int]]:
    """Inverse of a square matrix by Gauss-Jordan elimination."""
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise ValueError("matrix is not square")
    a = [list(r) for r in mat]
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise ValueError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        pinv = gf.inv(a[col][col])
        a[col] = [gf.mul(pinv, v) for v in a[col]]
        inv[col] = [gf.mul(pinv, v) for v in inv[col]]
        acol, icol = a[col], inv[col]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f:
                arow, irow = a[r], inv[r]
                for c in range(n):
                    if acol[c]:
                        arow[c] ^= gf.mul(f, acol[c])
                    if icol[c]:
                        irow[c] ^= gf.mul(f, icol[c])
    return inv


def gf_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]],
              gf: GF2M) -> list[list[int]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        arow, orow = a[i], out[i]
        for j in range(inner):
            f = arow[j]
            if f:
                brow = b[j]
                for c in range(cols):
                    if brow[c]:
                        orow[c] ^= gf.mul(f, brow[c])
    return out


def gf_matvec(mat: Sequence[Sequence[int]], vec: Sequence[int], gf: GF2M) -> list[int]:
    out = []
    for row in mat:
        acc = 0
        for coeff, v in zip(row, vec):
            if coeff and v:
                acc ^= gf.mul(coeff, v)
        out.append(acc)
    return out


def solve_linear(mat: Sequence[Sequence[int]], rhs: Sequence[int], gf: GF2M) -> list[int]:
    """Unique solution of a full-rank square system M.x = rhs."""
    if len(rhs) != len(mat):
        raise ValueError("rhs length does not match matrix")
    return gf_matvec(gf_inv_matrix(mat, gf), rhs, gf)


# -- MDS verification and the c0 search ---------------------------------------


def node_subsets(params: CodeParams, size: int,
                 max_subsets: int = MAX_SUBSET_CHECKS) -> Iterable[tuple[Node, ...]]:
    total = math.comb(params.n, size)
    if total > max_subsets:
        raise ValueError(
            f"{total} subsets exceed the exhaustive-check cap {max_subsets}; "
            "refusing to sample"
        )
    return itertools.combinations(params.nodes(), size)


def check_mds_ranks(system: ParityCheckSystem,
                    max_subsets: int = MAX_SUBSET_CHECKS) -> list[tuple[Node, ...]]:
    """Rank-check every size-q thick-column submatrix; returns the subsets
    that are NOT full rank (empty list = MDS certificate)."""
    p = system.params
    full = p.q * p.alpha
    bad = []
    for subset in node_subsets(p, p.q, max_subsets):
        if gf_rank(system.thick_submatrix(subset), p.gf) != full:
            bad.append(subset)
    return bad


def sufficient_field_size(params: CodeParams) -> int:
    """Field size above which a valid c0 is guaranteed to exist: one more
    than the degree bound comb(n, k) * q^t * (q-1) of the subset-determinant
    product polynomial."""
    p = params
    return math.comb(p.n, p.k) * p.alpha * (p.q - 1) + 1


def find_c0(params: CodeParams, max_subsets: int = MAX_SUBSET_CHECKS) -> int:
    """Smallest nonzero coefficient making every size-q thick submatrix full
    rank.  Ascending scan gives a canonical, reproducible choice; exhaustion
    means the field is too small (guaranteed not to happen once the field
    size exceeds sufficient_field_size)."""
    for c in range(1, params.gf.order):
        if not check_mds_ranks(build_system(params, c), max_subsets):
            return c
    raise ValueError(
        f"no valid c0 in GF(2^{params.gf.m}); retry with a larger field "
        f"(size > {sufficient_field_size(params)} always suffices)"
    )


def find_code(q: int, t: int, m: int | None = None,
              max_subsets: int = MAX_SUBSET_CHECKS) -> CodeParams:
    """Parameter search entry point: fix the smallest workable field (or the
    one given) and the canonical c0.  With m omitted, starts at the smallest
    m whose field holds n evaluation points and escalates on search failure.
    """
    if m is not None:
        params = make_params(q, t, m)
        return params.with_c0(find_c0(params, max_subsets))
    n = t * q
    start = next(mm for mm in range(1, 17) if (1 << mm) - 1 >= n)
    last_err: Exception | None = None
    for mm in range(start, 17):
        params = make_params(q, t, mm)
        try:
            return params.with_c0(find_c0(params, max_subsets))
        except ValueError as err:
            last_err = err
    raise ValueError(f"no valid c0 up to GF(2^16): {last_err}")
