"""Help-by-transfer exact repair of a single failed node from all d = n-1
survivors.

Each helper ships, verbatim, its beta = q^(t-1) symbols on the rows whose
coordinate i0 equals theta0 (the failed node's class coordinate pinned to
its theta).  Repair then runs in two mandatory phases:

  1. every row-parity anchored on such a row has exactly one unknown, the
     failed node's symbol on that row;
  2. every delta-parity anchored there then has exactly one unknown left,
     the failed node's symbol on the row shifted by delta in coordinate i0.

The q-1 shifts of each of the q^(t-1) anchor rows cover the remaining
alpha - beta symbols exactly once, so the failed column is rebuilt in full
from d*beta downloaded symbols -- the minimum-storage optimum
beta = alpha/(d-k+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .params import CodeParams, Node, Row
from .parity import Constraint, ParityCheckSystem


@dataclass(frozen=True)
class HelperPacket:
    """What one helper sends: its stored symbols on the failed node's helper
    rows, copied verbatim (helpers never compute), ascending row ordinal."""

    helper: Node
    entries: tuple[tuple[Row, int], ...]


@dataclass
class RepairResult:
    node: Node
    symbols: list[int]  # row-ordinal order
    downloaded_total: int


@dataclass(frozen=True)
class BandwidthReport:
    """Repair traffic for one parameter set versus naive full decode."""

    per_helper: int     # beta
    helpers: int        # d
    total: int          # d * beta
    naive: int          # B = k * alpha, the any-k download
    ratio: float        # total / naive

    def __str__(self) -> str:
        return (
            f"per-helper symbols : {self.per_helper}\n"
            f"helpers            : {self.helpers}\n"
            f"repair download    : {self.total}\n"
            f"naive download (B) : {self.naive}\n"
            f"ratio              : {self.ratio:.4f}"
        )


def helper_extract(content: Sequence[int], helper: Node, failed: Node,
                   params: CodeParams) -> HelperPacket:
    """Cut the helper's packet out of its stored column (alpha symbols in
    row-ordinal order).  Pure copying; this is the help-by-transfer step."""
    if helper == failed:
        raise ValueError("a failed node cannot help repair itself")
    params.node_ordinal(helper)
    if len(content) != params.alpha:
        raise ValueError(f"node content must hold alpha={params.alpha} symbols")
    entries = tuple(
        (row, content[params.row_ordinal(row)]) for row in params.gamma_rows(failed)
    )
    return HelperPacket(helper, entries)


def _single_unknown_solve(con: Constraint, known: dict[tuple[Row, Node], int],
                          sys: ParityCheckSystem) -> tuple[tuple[Row, Node], int]:
    """Solve a constraint in which exactly one symbol is not yet known."""
    gf = sys.params.gf
    unknown = None
    acc = 0
    for term in con.terms:
        addr = (term.row, term.node)
        v = known.get(addr)
        if v is None:
            if unknown is not None:
                raise ValueError(f"constraint (delta={con.delta}, anchor={con.anchor}) "
                                 "has more than one unknown symbol")
            unknown = (addr, term.coeff)
        elif v:
            acc ^= gf.mul(term.coeff, v)
    if unknown is None:
        raise ValueError("constraint has no unknown symbol to solve for")
    addr, coeff = unknown
    return addr, gf.mul(gf.inv(coeff), acc)


def repair_node(failed: Node, packets: Sequence[HelperPacket],
                sys: ParityCheckSystem) -> RepairResult:
    """Rebuild the failed column from d helper packets.

    Validates the protocol strictly before solving: exactly d distinct
    helpers, each shipping exactly the helper-row set.  The two phases are
    asserted, not assumed: every constraint consumed must be down to a
    single unknown at the time it is used, and the union of solved
    addresses must cover each of the alpha rows exactly once.
    """
    p = sys.params
    if not sys.c0:
        raise ValueError("parity-check system has no valid c0")
    p.node_ordinal(failed)
    if len(packets) != p.d:
        raise ValueError(f"need exactly d={p.d} helper packets, got {len(packets)}")
    helpers = {pk.helper for pk in packets}
    if len(helpers) != p.d:
        raise ValueError("duplicate helper packets")
    if failed in helpers:
        raise ValueError("failed node cannot appear among helpers")
    gamma = p.gamma_rows(failed)
    expected_rows = tuple(gamma)
    known: dict[tuple[Row, Node], int] = {}
    downloaded = 0
    for pk in packets:
        if tuple(r for r, _ in pk.entries) != expected_rows:
            raise ValueError(f"packet of helper {pk.helper} does not carry the helper-row set")
        downloaded += len(pk.entries)
        for row, sym in pk.entries:
            known[(row, pk.helper)] = sym

    column = [None] * p.alpha  # type: list[int | None]

    def write(row: Row, value: int) -> None:
        o = p.row_ordinal(row)
        if column[o] is not None:
            raise ValueError(f"row {row} repaired twice")
        column[o] = value

    # phase 1: row-parities on the helper rows
    for row in gamma:
        addr, value = _single_unknown_solve(sys.constraint(0, row), known, sys)
        if addr != (row, failed):
            raise ValueError("row-parity solved an unexpected symbol")
        known[addr] = value
        write(row, value)
    # phase 2: delta-parities anchored on the helper rows
    i0, theta0 = failed
    for row in gamma:
        for delta in range(1, p.q):
            addr, value = _single_unknown_solve(sys.constraint(delta, row), known, sys)
            target = list(row)
            target[i0 - 1] = (theta0 - delta) % p.q
            if addr != (tuple(target), failed):
                raise ValueError("delta-parity solved an unexpected symbol")
            known[addr] = value
            write(tuple(target), value)

    if any(v is None for v in column):
        raise ValueError("repair did not cover every row")
    return RepairResult(failed, column, downloaded)


def repair_batch(failed: Node, gamma_columns: Mapping[Node, np.ndarray],
                 sys: ParityCheckSystem) -> np.ndarray:
    """Batch repair across stripes: `gamma_columns` maps each helper to an
    (s, beta) uint16 array of its helper-row symbols (ascending row
    ordinal); returns the failed node's (s, alpha) column stack."""
    p = sys.params
    gf = p.gf
    if not sys.c0:
        raise ValueError("parity-check system has no valid c0")
    if len(gamma_columns) != p.d or failed in gamma_columns:
        raise ValueError(f"need the {p.d} helpers other than {failed}")
    gamma = p.gamma_rows(failed)
    stripes = next(iter(gamma_columns.values())).shape[0]
    known: dict[tuple[Row, Node], np.ndarray] = {}
    for helper, cols in gamma_columns.items():
        if cols.shape != (stripes, p.beta):
            raise ValueError(f"helper {helper} columns must be (stripes, beta)")
        for g, row in enumerate(gamma):
            known[(row, helper)] = cols[:, g]
    out = np.zeros((stripes, p.alpha), dtype=np.uint16)

    def solve(con: Constraint) -> tuple[tuple[Row, Node], np.ndarray]:
        unknown = None
        acc = np.zeros(stripes, dtype=np.uint16)
        for term in con.terms:
            addr = (term.row, term.node)
            vec = known.get(addr)
            if vec is None:
                assert unknown is None, "more than one unknown in batch repair"
                unknown = (addr, term.coeff)
            else:
                acc ^= gf.mul_vec(term.coeff, vec)
        assert unknown is not None
        addr, coeff = unknown
        return addr, gf.mul_vec(gf.inv(coeff), acc)

    i0, theta0 = failed
    for row in gamma:
        addr, vec = solve(sys.constraint(0, row))
        assert addr == (row, failed)
        known[addr] = vec
        out[:, p.row_ordinal(row)] = vec
    for row in gamma:
        for delta in range(1, p.q):
            addr, vec = solve(sys.constraint(delta, row))
            target = list(row)
            target[i0 - 1] = (theta0 - delta) % p.q
            assert addr == (tuple(target), failed)
            out[:, p.row_ordinal(tuple(target))] = vec
    return out


def bandwidth_report(params: CodeParams) -> BandwidthReport:
    """Repair bandwidth versus the naive any-k download, in symbols."""
    total = params.d * params.beta
    naive = params.message_len
    return BandwidthReport(
        per_helper=params.beta,
        helpers=params.d,
        total=total,
        naive=naive,
        ratio=total / naive,
    )
