"""Annotated undirected contact graphs: construction, file I/O, queries.

Graphs are simple (no self-loops, no parallel edges) and stored in CSR form:
``indptr``/``indices`` arrays with each neighbor row sorted ascending. Node
ids are dense integers in ``[0, n)``; the original external labels are kept
in ``labels`` so saved files remain traceable to the input data.

Instances are immutable after construction and safe to share read-only
across concurrent simulation workers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from .errors import AnnotationError, DataError, GraphFormatError

log = logging.getLogger(__name__)

_MAX_REPORTED_OFFENDERS = 20


class Opinion(IntEnum):
    """Vaccine stance attached to every node of an annotated graph.

    Integer values double as indices into 2x2 mixing matrices
    (0 = anti, 1 = pro).
    """

    ANTI = 0
    PRO = 1

    @classmethod
    def parse(cls, text: str) -> "Opinion":
        t = text.strip().lower()
        if t == "pro":
            return cls.PRO
        if t == "anti":
            return cls.ANTI
        raise ValueError(f"opinion must be 'pro' or 'anti', got {text!r}")

    def __str__(self) -> str:
        return "pro" if self is Opinion.PRO else "anti"


@dataclass(eq=False)
class AnnotatedGraph:
    """Immutable simple undirected graph with one opinion per node."""

    n: int
    indptr: np.ndarray  # int64, shape (n+1,)
    indices: np.ndarray  # int64, shape (2*edge_count,), sorted per row
    opinions: np.ndarray  # uint8 of Opinion values, shape (n,)
    edge_count: int
    labels: np.ndarray = field(default=None)  # external node labels, shape (n,)

    def __post_init__(self):
        if self.labels is None:
            self.labels = np.arange(self.n, dtype=np.int64)
        for arr in (self.indptr, self.indices, self.opinions, self.labels):
            arr.setflags(write=False)

    # -- queries ---------------------------------------------------------

    def degree(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"node id {i} out of range [0, {self.n})")
        return int(self.indptr[i + 1] - self.indptr[i])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        if not 0 <= i < self.n:
            raise IndexError(f"node id {i} out of range [0, {self.n})")
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        pos = np.searchsorted(row, j)
        return pos < row.size and row[pos] == j

    def edges(self) -> np.ndarray:
        """All edges as an (edge_count, 2) array with src < dst."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def structurally_equal(self, other: "AnnotatedGraph") -> bool:
        return (
            self.n == other.n
            and self.edge_count == other.edge_count
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.opinions, other.opinions)
        )

    # -- construction ----------------------------------------------------

    @classmethod
    def from_edge_array(
        cls,
        n: int,
        edges: np.ndarray,
        opinions: np.ndarray | None = None,
        labels: np.ndarray | None = None,
    ) -> "AnnotatedGraph":
        """Build a validated graph from an (k, 2) array of node-id pairs.

        Duplicate pairs (in either orientation) collapse to a single edge.
        Self-loops are rejected; callers that ingest dirty data must strip
        them first.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise DataError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise DataError("self-loops are not allowed")
        if opinions is None:
            opinions = np.full(n, Opinion.PRO, dtype=np.uint8)
        else:
            opinions = np.asarray(opinions, dtype=np.uint8)
            if opinions.shape != (n,):
                raise DataError("opinions array must have one entry per node")

        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        keys = np.unique(lo * np.int64(n) + hi)
        lo, hi = keys // n, keys % n

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indices = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        g = cls(
            n=n,
            indptr=indptr,
            indices=indices,
            opinions=opinions,
            edge_count=int(keys.size),
            labels=labels if labels is None else np.asarray(labels, dtype=np.int64),
        )
        g.validate()
        return g

    def validate(self) -> None:
        """Full-scan structural check: simple, symmetric, consistent counts."""
        if self.indptr.shape != (self.n + 1,) or self.indptr[0] != 0:
            raise DataError("malformed indptr")
        if int(self.indptr[-1]) != self.indices.size:
            raise DataError("indptr does not cover indices")
        if self.indices.size != 2 * self.edge_count:
            raise DataError("edge_count inconsistent with adjacency size")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= self.n:
                raise DataError("neighbor id out of range")
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        if np.any(src == self.indices):
            raise DataError("self-loop present")
        # strictly increasing rows <=> sorted and duplicate-free
        if self.indices.size > 1:
            same_row = src[1:] == src[:-1]
            if np.any(same_row & (np.diff(self.indices) <= 0)):
                raise DataError("adjacency rows must be strictly increasing")
        # symmetry: the reversed arc set must equal the arc set
        fwd = src * np.int64(self.n) + self.indices
        rev = self.indices * np.int64(self.n) + src
        if not np.array_equal(np.sort(fwd), np.sort(rev)):
            raise DataError("adjacency is not symmetric")


def gather_rows(indptr: np.ndarray, indices: np.ndarray, rows: np.ndarray):
    """Concatenate CSR rows without a Python-level loop.

    Returns ``(values, lengths)`` where ``values`` is the concatenation of
    ``indices[indptr[r]:indptr[r+1]]`` for each r in ``rows`` (order kept).
    """
    rows = np.asarray(rows, dtype=np.int64)
    starts = indptr[rows]
    lengths = indptr[rows + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype), lengths
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(lengths)[:-1])), lengths)
    return indices[offsets + np.arange(total, dtype=np.int64)], lengths


def subgraph_by_opinion(g: AnnotatedGraph, opinion: Opinion) -> AnnotatedGraph:
    """Induced subgraph on the nodes holding ``opinion``, ids re-densified."""
    keep = np.flatnonzero(g.opinions == int(opinion))
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    e = g.edges()
    if e.size:
        mask = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
        e = remap[e[mask]]
    else:
        e = e.reshape(0, 2)
    return AnnotatedGraph.from_edge_array(
        n=int(keep.size),
        edges=e,
        opinions=np.full(keep.size, int(opinion), dtype=np.uint8),
        labels=g.labels[keep],
    )


# -- file formats ---------------------------------------------------------
#
# Edge file: UTF-8 CSV, one `src,dst` pair of integer labels per line.
# Attribute file: `node,opinion` with opinion in {pro, anti}, case-insensitive.
# An optional header is detected by a non-numeric first field.


def _is_int(text: str) -> bool:
    try:
        int(text)
        return True
    except ValueError:
        return False


def _parse_csv_pairs(path, n_fields: int, n_int_fields: int):
    """Yield (line_number, fields) for each data line of a 2-column CSV.

    The first ``n_int_fields`` fields of every data row must be integers;
    a non-numeric first field on the first row is treated as a header.
    """
    first = True
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != n_fields:
                raise GraphFormatError(
                    f"expected {n_fields} comma-separated fields, got {len(fields)}",
                    line=lineno,
                )
            if first:
                first = False
                if not _is_int(fields[0]):  # header row
                    continue
            for f in fields[:n_int_fields]:
                if not _is_int(f):
                    raise GraphFormatError(f"non-integer node label {f!r}", line=lineno)
            yield lineno, fields


def load_edge_list(path, attr_path) -> AnnotatedGraph:
    """Load and validate an annotated graph from an edge + attribute file.

    External labels are remapped to dense ids (ascending label order).
    Duplicate edges collapse silently; self-loops are dropped and counted in
    a log warning. Nodes present only in the attribute file are kept as
    isolated nodes. Every node appearing in an edge must be annotated.
    """
    raw_edges = []
    self_loops = 0
    for lineno, (a, b) in _parse_csv_pairs(path, 2, n_int_fields=2):
        u, v = int(a), int(b)
        if u == v:
            self_loops += 1
            continue
        raw_edges.append((u, v))
    if self_loops:
        log.warning("dropped %d self-loop(s) while loading %s", self_loops, path)

    opinion_of: dict[int, int] = {}
    for lineno, (a, b) in _parse_csv_pairs(attr_path, 2, n_int_fields=1):
        node = int(a)
        try:
            op = int(Opinion.parse(b))
        except ValueError as exc:
            raise GraphFormatError(str(exc), line=lineno) from None
        if node in opinion_of and opinion_of[node] != op:
            raise AnnotationError(
                f"conflicting opinions for node {node}", offenders=[node]
            )
        opinion_of[node] = op

    edge_arr = np.array(raw_edges, dtype=np.int64).reshape(-1, 2)
    edge_labels = np.unique(edge_arr) if edge_arr.size else np.empty(0, dtype=np.int64)
    missing = sorted(set(edge_labels.tolist()) - set(opinion_of))
    if missing:
        shown = ", ".join(str(m) for m in missing[:_MAX_REPORTED_OFFENDERS])
        more = "" if len(missing) <= _MAX_REPORTED_OFFENDERS else f" (+{len(missing) - _MAX_REPORTED_OFFENDERS} more)"
        raise AnnotationError(
            f"{len(missing)} node(s) in edges lack an opinion: {shown}{more}",
            offenders=missing,
        )

    labels = np.array(sorted(set(edge_labels.tolist()) | set(opinion_of)), dtype=np.int64)
    dense = {int(lab): i for i, lab in enumerate(labels)}
    opinions = np.array([opinion_of[int(lab)] for lab in labels], dtype=np.uint8)
    if edge_arr.size:
        remap = np.vectorize(dense.__getitem__, otypes=[np.int64])
        edge_arr = remap(edge_arr)
    return AnnotatedGraph.from_edge_array(
        n=labels.size, edges=edge_arr, opinions=opinions, labels=labels
    )


def save_edge_list(g: AnnotatedGraph, path, attr_path) -> None:
    """Write a graph back out in the load format (external labels)."""
    path, attr_path = Path(path), Path(attr_path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("src,dst\n")
        for u, v in g.edges():
            fh.write(f"{g.labels[u]},{g.labels[v]}\n")
    with open(attr_path, "w", encoding="utf-8") as fh:
        fh.write("node,opinion\n")
        for i in range(g.n):
            fh.write(f"{g.labels[i]},{Opinion(g.opinions[i])}\n")
