"""Code parameters and the row/node index spaces of the codeword array.

A code instance is determined by the index-ring modulus q, the rate
parameter t (rate (t-1)/t), and the symbol field.  Everything else is
derived: n = t*q nodes each storing alpha = q^t symbols, dimension
k = (t-1)*q, and single-node repair from d = n-1 helpers pulling
beta = q^(t-1) symbols each.

Rows of the alpha x n codeword array are indexed by t-tuples over [0, q);
nodes by a pair (i, theta) with class i in 1..t and theta in [0, q).  Both
spaces get fixed bijections to flat ordinals so matrices and shard files
have one canonical layout: rows lexicographic with the first coordinate
most significant, nodes class-major.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

from .gf import GF2M

Row = tuple[int, ...]
Node = tuple[int, int]


@dataclass(frozen=True)
class CodeParams:
    """Parameter set of one code instance; the single source of truth for
    all dimensions.  c0 (the shifted-entry coefficient) starts unset and is
    filled in by the MDS coefficient search."""

    q: int
    t: int
    gf: GF2M
    c0: int | None = None

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be >= 2 (q=1 leaves no nonzero shifts, so no delta-parities)")
        if self.t < 2:
            raise ValueError("t must be >= 2 (rate (t-1)/t needs t >= 2)")
        if self.gf.order - 1 < self.n:
            raise ValueError(
                f"field GF(2^{self.gf.m}) has only {self.gf.order - 1} nonzero elements; "
                f"need at least n={self.n} distinct evaluation points"
            )
        if self.c0 is not None:
            if not 0 < self.c0 < self.gf.order:
                raise ValueError(f"c0={self.c0} must be a nonzero element of GF(2^{self.gf.m})")

    # -- derived dimensions ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.t * self.q

    @property
    def k(self) -> int:
        return (self.t - 1) * self.q

    @property
    def d(self) -> int:
        return self.n - 1

    @property
    def alpha(self) -> int:
        """Sub-packetization: symbols stored per node."""
        return self.q**self.t

    @property
    def beta(self) -> int:
        """Symbols downloaded per helper during repair."""
        return self.q ** (self.t - 1)

    @property
    def message_len(self) -> int:
        """Symbols per stripe (the file size B = k * alpha)."""
        return self.k * self.alpha

    @property
    def rate(self) -> Fraction:
        return Fraction(self.t - 1, self.t)

    def with_c0(self, c0: int) -> "CodeParams":
        if c0 == 0:
            raise ValueError("c0 must be nonzero")
        return replace(self, c0=c0)

    # -- index bijections -------------------------------------------------------

    def row_ordinal(self, row: Row) -> int:
        """Lexicographic ordinal of a row tuple, first coordinate most significant."""
        if len(row) != self.t:
            raise ValueError(f"row {row} does not have {self.t} coordinates")
        o = 0
        for x in row:
            if not 0 <= x < self.q:
                raise ValueError(f"row coordinate {x} out of [0, {self.q})")
            o = o * self.q + x
        return o

    def row_at(self, ordinal: int) -> Row:
        if not 0 <= ordinal < self.alpha:
            raise ValueError(f"row ordinal {ordinal} out of [0, {self.alpha})")
        coords = []
        for _ in range(self.t):
            coords.append(ordinal % self.q)
            ordinal //= self.q
        return tuple(reversed(coords))

    def node_ordinal(self, node: Node) -> int:
        """Class-major ordinal (i-1)*q + theta, matching the block layout of H."""
        i, theta = node
        if not (1 <= i <= self.t and 0 <= theta < self.q):
            raise ValueError(f"node {node} out of range for (q={self.q}, t={self.t})")
        return (i - 1) * self.q + theta

    def node_at(self, ordinal: int) -> Node:
        if not 0 <= ordinal < self.n:
            raise ValueError(f"node ordinal {ordinal} out of [0, {self.n})")
        return ordinal // self.q + 1, ordinal % self.q

    def rows(self) -> Iterator[Row]:
        """All rows in ascending ordinal order."""
        return itertools.product(range(self.q), repeat=self.t)

    def nodes(self) -> Iterator[Node]:
        """All nodes in ascending ordinal order."""
        return ((i, theta) for i in range(1, self.t + 1) for theta in range(self.q))

    def systematic_nodes(self) -> tuple[Node, ...]:
        """The first k node ordinals: every class except the last."""
        return tuple((i, theta) for i in range(1, self.t) for theta in range(self.q))

    def parity_nodes(self) -> tuple[Node, ...]:
        return tuple((self.t, theta) for theta in range(self.q))

    # -- repair geometry --------------------------------------------------------

    def gamma_rows(self, failed: Node) -> list[Row]:
        """Helper rows for repairing `failed`: the q^(t-1) rows whose
        coordinate i0 is pinned to theta0, ascending ordinal order."""
        i0, theta0 = failed
        self.node_ordinal(failed)  # validate
        rows = []
        for free in itertools.product(range(self.q), repeat=self.t - 1):
            rows.append(free[: i0 - 1] + (theta0,) + free[i0 - 1 :])
        return rows

    def __repr__(self) -> str:
        c = f", c0={self.c0}" if self.c0 is not None else ""
        return f"CodeParams(q={self.q}, t={self.t}, gf={self.gf!r}{c})"


def make_params(q: int, t: int, m: int, poly: int | None = None) -> CodeParams:
    """Build a parameter set over GF(2^m) with the default (or given)
    reduction polynomial.  c0 is left unset."""
    return CodeParams(q=q, t=t, gf=GF2M(m, poly))
