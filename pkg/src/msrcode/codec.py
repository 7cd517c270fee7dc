"""Systematic encoding, any-k decoding, and the exhaustive MDS round-trip
verifier.

A stripe of k*alpha message symbols is placed verbatim into the first k
thick columns (node-major, then row-ordinal); the remaining q parity
columns are the unique solution of the parity-check constraints, obtained
through the cached inverse of the parity thick submatrix.  Decoding from
any k nodes solves the same kind of square system for whichever q columns
are missing.

Scalar functions operate on one codeword array; the *_batch variants run
the identical linear maps across whole stacks of stripes as numpy uint16
arrays (the shape the CLI uses for files).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .params import CodeParams, Node, Row
from .parity import ParityCheckSystem, gf_matvec, node_subsets


@dataclass
class CodewordArray:
    """The alpha x n symbol grid, one thick column per node; addressed by
    (row tuple, node tuple) or directly by ordinals via `symbols`."""

    params: CodeParams
    symbols: list[list[int]]  # [row_ordinal][node_ordinal]

    @classmethod
    def zeros(cls, params: CodeParams) -> "CodewordArray":
        return cls(params, [[0] * params.n for _ in range(params.alpha)])

    def get(self, row: Row, node: Node) -> int:
        return self.symbols[self.params.row_ordinal(row)][self.params.node_ordinal(node)]

    def set(self, row: Row, node: Node, value: int) -> None:
        self.symbols[self.params.row_ordinal(row)][self.params.node_ordinal(node)] = value

    def column(self, node: Node) -> list[int]:
        o = self.params.node_ordinal(node)
        return [r[o] for r in self.symbols]

    def set_column(self, node: Node, values: Sequence[int]) -> None:
        if len(values) != self.params.alpha:
            raise ValueError("column length must be alpha")
        o = self.params.node_ordinal(node)
        for r, v in zip(self.symbols, values):
            r[o] = v


def _require_valid_c0(sys: ParityCheckSystem) -> None:
    if not sys.c0:
        raise ValueError("parity-check system has no valid c0 (run the coefficient search)")


def _complete_columns(sys: ParityCheckSystem, known: Mapping[Node, Sequence[int]],
                      missing: Sequence[Node]) -> dict[Node, list[int]]:
    """Solve the constraints for exactly q missing thick columns given all
    others.  Returns the missing columns in row-ordinal order."""
    p = sys.params
    rhs = []
    for con in sys.constraints:
        acc = 0
        for term in con.terms:
            col = known.get(term.node)
            if col is not None:
                v = col[p.row_ordinal(term.row)]
                if v:
                    acc ^= p.gf.mul(term.coeff, v)
        rhs.append(acc)
    solution = gf_matvec(sys.inverse_for(missing), rhs, p.gf)
    ordered = sorted(missing, key=p.node_ordinal)
    return {
        node: solution[i * p.alpha : (i + 1) * p.alpha]
        for i, node in enumerate(ordered)
    }


def encode(message: Sequence[int], sys: ParityCheckSystem) -> CodewordArray:
    """Systematic encode of k*alpha symbols into an alpha x n array."""
    p = sys.params
    _require_valid_c0(sys)
    if len(message) != p.message_len:
        raise ValueError(f"message must hold {p.message_len} symbols, got {len(message)}")
    for v in message:
        p.gf.validate(v)
    arr = CodewordArray.zeros(p)
    known: dict[Node, Sequence[int]] = {}
    for o, node in enumerate(p.systematic_nodes()):
        col = list(message[o * p.alpha : (o + 1) * p.alpha])
        known[node] = col
        arr.set_column(node, col)
    for node, col in _complete_columns(sys, known, p.parity_nodes()).items():
        arr.set_column(node, col)
    return arr


def check_codeword(arr: CodewordArray, sys: ParityCheckSystem) -> bool:
    """True iff every parity-check constraint sums to zero."""
    p = sys.params
    if arr.params != p:
        raise ValueError("codeword array belongs to different parameters")
    gf = p.gf
    grid = arr.symbols
    for con in sys.constraints:
        acc = 0
        for term in con.terms:
            v = grid[p.row_ordinal(term.row)][p.node_ordinal(term.node)]
            if v:
                acc ^= gf.mul(term.coeff, v)
        if acc:
            return False
    return True


def decode_from_k(available: Mapping[Node, Sequence[int]],
                  sys: ParityCheckSystem) -> list[int]:
    """Recover the message from exactly k distinct node columns."""
    p = sys.params
    _require_valid_c0(sys)
    if len(available) != p.k:
        raise ValueError(f"need exactly k={p.k} nodes, got {len(available)}")
    for node, col in available.items():
        p.node_ordinal(node)  # validate node
        if len(col) != p.alpha:
            raise ValueError(f"column of node {node} must hold alpha={p.alpha} symbols")
        for v in col:
            p.gf.validate(v)
    missing = [nd for nd in p.nodes() if nd not in available]
    systematic = p.systematic_nodes()
    if all(nd in available for nd in systematic):
        solved: Mapping[Node, Sequence[int]] = {}
    else:
        solved = _complete_columns(sys, available, missing)
    message = []
    for node in systematic:
        col = available.get(node)
        if col is None:
            col = solved[node]
        message.extend(col)
    return message


@dataclass
class MdsReport:
    """Outcome of the exhaustive decode round-trip check."""

    subset_count: int
    trials: int
    failures: list[tuple[tuple[Node, ...], int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_mds(sys: ParityCheckSystem, trials: int, seed: int = 0) -> MdsReport:
    """Encode `trials` random messages and decode each from every k-subset
    of nodes; any mismatch or singular solve is recorded as a failure."""
    p = sys.params
    rng = random.Random(seed)
    subsets = list(node_subsets(p, p.k))
    report = MdsReport(subset_count=len(subsets), trials=trials)
    messages = [
        [rng.randrange(p.gf.order) for _ in range(p.message_len)]
        for _ in range(trials)
    ]
    arrays = [encode(m, sys) for m in messages]
    for subset in subsets:
        for idx, (msg, arr) in enumerate(zip(messages, arrays)):
            picked = {nd: arr.column(nd) for nd in subset}
            try:
                if decode_from_k(picked, sys) != msg:
                    report.failures.append((subset, idx))
            except ValueError:
                report.failures.append((subset, idx))
    return report


# -- batched (multi-stripe) paths ---------------------------------------------


def complete_columns_batch(sys: ParityCheckSystem,
                           known: Mapping[Node, np.ndarray],
                           missing: Sequence[Node]) -> dict[Node, np.ndarray]:
    """Batch variant of the missing-column solve: every value of `known`
    is an (s, alpha) uint16 array of s stripes; returns the same shape per
    missing node.  Applies the fused completion map column by column."""
    p = sys.params
    gf = p.gf
    ordered_missing = sorted(missing, key=p.node_ordinal)
    ordered_known = [nd for nd in p.nodes() if nd not in set(ordered_missing)]
    if set(ordered_known) != set(known):
        raise ValueError("known columns must be exactly the non-missing nodes")
    mapping = sys.completion_map(ordered_missing)
    stripes = next(iter(known.values())).shape[0]
    stacked = np.empty((stripes, len(ordered_known) * p.alpha), dtype=np.uint16)
    for i, nd in enumerate(ordered_known):
        stacked[:, i * p.alpha : (i + 1) * p.alpha] = known[nd]
    out = np.zeros((stripes, len(ordered_missing) * p.alpha), dtype=np.uint16)
    for r, row in enumerate(mapping):
        acc = out[:, r]
        for c, coeff in enumerate(row):
            if coeff:
                acc ^= gf.mul_vec(coeff, stacked[:, c])
        out[:, r] = acc
    return {
        node: out[:, i * p.alpha : (i + 1) * p.alpha]
        for i, node in enumerate(ordered_missing)
    }


def encode_batch(messages: np.ndarray, sys: ParityCheckSystem) -> dict[Node, np.ndarray]:
    """Encode an (s, k*alpha) stack of stripes; returns one (s, alpha)
    column stack per node (systematic views plus solved parity)."""
    p = sys.params
    _require_valid_c0(sys)
    if messages.ndim != 2 or messages.shape[1] != p.message_len:
        raise ValueError(f"messages must be (stripes, {p.message_len})")
    messages = np.ascontiguousarray(messages, dtype=np.uint16)
    columns: dict[Node, np.ndarray] = {}
    for o, node in enumerate(p.systematic_nodes()):
        columns[node] = messages[:, o * p.alpha : (o + 1) * p.alpha]
    columns.update(complete_columns_batch(sys, columns, p.parity_nodes()))
    return columns


def decode_batch(available: Mapping[Node, np.ndarray],
                 sys: ParityCheckSystem) -> np.ndarray:
    """Recover (s, k*alpha) message stripes from k node column stacks."""
    p = sys.params
    _require_valid_c0(sys)
    if len(available) != p.k:
        raise ValueError(f"need exactly k={p.k} nodes, got {len(available)}")
    systematic = p.systematic_nodes()
    missing = [nd for nd in p.nodes() if nd not in available]
    if all(nd in available for nd in systematic):
        solved: Mapping[Node, np.ndarray] = {}
    else:
        solved = complete_columns_batch(sys, available, missing)
    stripes = next(iter(available.values())).shape[0]
    out = np.empty((stripes, p.message_len), dtype=np.uint16)
    for o, node in enumerate(systematic):
        col = available.get(node)
        if col is None:
            col = solved[node]
        out[:, o * p.alpha : (o + 1) * p.alpha] = col
    return out
