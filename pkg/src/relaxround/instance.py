"""Bipartite coverage instances: construction, validation and file formats.

A :class:`CoverageInstance` stores the bipartite graph ``(L, R, E)`` twice in
compressed form: ``right_indptr/right_indices`` lists ``N(j)`` for each right
node ``j`` and ``left_indptr/left_indices`` lists the right nodes containing
each left node ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

WEIGHT_SUM_TOL = 1e-9


class InstanceError(ValueError):
    """Raised when an instance violates a structural invariant."""


class ParseError(InstanceError):
    """Raised for malformed input files."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CoverageInstance:
    n: int
    r: int
    right_indptr: np.ndarray
    right_indices: np.ndarray
    weights: np.ndarray
    left_indptr: np.ndarray = field(repr=False)
    left_indices: np.ndarray = field(repr=False)

    @classmethod
    def from_adjacency(cls, n, right_adj, weights=None, normalize=True):
        """Build from a list of neighbour lists, one per right node.

        ``weights`` defaults to uniform ``1/r``. With ``normalize`` the
        weights are rescaled to sum to one (they must still be nonnegative).
        """
        r = len(right_adj)
        if r == 0:
            raise InstanceError("instance has no right nodes")
        indptr = np.zeros(r + 1, dtype=np.int64)
        for j, nbrs in enumerate(right_adj):
            indptr[j + 1] = indptr[j] + len(nbrs)
        indices = np.fromiter(
            (i for nbrs in right_adj for i in nbrs), dtype=np.int64, count=int(indptr[-1])
        )
        return cls.from_csr(n, indptr, indices, weights, normalize=normalize)

    @classmethod
    def from_edges(cls, n, r, edges, weights=None, normalize=True):
        """Build from ``(i, j)`` pairs (left ``i``, right ``j``); pairs are sorted per ``j``."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges) and (edges.min(axis=0) < 0).any():
            raise InstanceError("negative node index")
        if len(edges) and (edges[:, 0].max() >= n or edges[:, 1].max() >= r):
            bad = edges[(edges[:, 0] >= n) | (edges[:, 1] >= r)][0]
            raise InstanceError(f"edge ({bad[0]}, {bad[1]}) out of range for n={n}, r={r}")
        order = np.lexsort((edges[:, 0], edges[:, 1]))
        edges = edges[order]
        indptr = np.zeros(r + 1, dtype=np.int64)
        np.cumsum(np.bincount(edges[:, 1], minlength=r), out=indptr[1:])
        return cls.from_csr(n, indptr, edges[:, 0], weights, normalize=normalize)

    @classmethod
    def from_csr(cls, n, indptr, indices, weights=None, normalize=True):
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        r = len(indptr) - 1
        if weights is None:
            weights = np.full(r, 1.0 / r) if r > 0 else np.zeros(0)
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (r,):
            raise InstanceError(f"expected {r} weights, got {weights.size}")
        if normalize:
            _check_weight_values(weights)
            total = weights.sum()
            if abs(total - 1.0) > WEIGHT_SUM_TOL:
                weights = weights / total
        left_indptr, left_indices = _transpose(n, indptr, indices)
        inst = cls(
            n=int(n),
            r=int(r),
            right_indptr=_frozen(indptr, np.int64),
            right_indices=_frozen(indices, np.int64),
            weights=_frozen(weights, np.float64),
            left_indptr=_frozen(left_indptr, np.int64),
            left_indices=_frozen(left_indices, np.int64),
        )
        inst.validate()
        return inst

    @property
    def m(self):
        return int(self.right_indptr[-1])

    @property
    def degrees(self):
        """``deg(j)`` for every right node."""
        return np.diff(self.right_indptr)

    @property
    def left_degrees(self):
        return np.diff(self.left_indptr)

    def neighbors(self, j):
        return self.right_indices[self.right_indptr[j] : self.right_indptr[j + 1]]

    def covered_by(self, i):
        return self.left_indices[self.left_indptr[i] : self.left_indptr[i + 1]]

    def edges(self):
        """All ``(i, j)`` pairs as an ``(m, 2)`` array ordered by ``j`` then ``i``."""
        js = np.repeat(np.arange(self.r, dtype=np.int64), self.degrees)
        return np.column_stack([self.right_indices, js])

    def incidence(self):
        """Dense ``n x r`` 0/1 matrix; for small instances only."""
        a = np.zeros((self.n, self.r), dtype=np.int64)
        js = np.repeat(np.arange(self.r), self.degrees)
        a[self.right_indices, js] = 1
        return a

    def validate(self):
        if self.n < 0 or self.r < 1:
            raise InstanceError(f"invalid sizes n={self.n}, r={self.r}")
        ip, idx = self.right_indptr, self.right_indices
        if ip.shape != (self.r + 1,) or ip[0] != 0 or (np.diff(ip) < 0).any():
            raise InstanceError("malformed right offsets")
        if idx.shape != (ip[-1],):
            raise InstanceError("right index array does not match offsets")
        deg = np.diff(ip)
        if (deg == 0).any():
            j = int(np.flatnonzero(deg == 0)[0])
            raise InstanceError(f"right node {j} has no neighbors")
        if idx.size and (idx.min() < 0 or idx.max() >= self.n):
            pos = int(np.flatnonzero((idx < 0) | (idx >= self.n))[0])
            j = int(np.searchsorted(ip, pos, side="right") - 1)
            raise InstanceError(f"right node {j} has dangling left index {int(idx[pos])}")
        # strictly increasing inside each segment
        steps = np.diff(idx)
        seg_start = np.zeros(idx.size, dtype=bool)
        seg_start[ip[:-1]] = True
        bad = (steps <= 0) & ~seg_start[1:]
        if bad.any():
            pos = int(np.flatnonzero(bad)[0]) + 1
            j = int(np.searchsorted(ip, pos, side="right") - 1)
            raise InstanceError(f"right node {j} has unsorted or duplicate neighbors")
        _check_weight_values(self.weights)
        if self.weights.shape != (self.r,):
            raise InstanceError(f"expected {self.r} weights, got {self.weights.size}")
        total = float(self.weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InstanceError(f"weights sum to {total!r}, expected 1")
        lp, li = _transpose(self.n, ip, idx)
        if not (np.array_equal(lp, self.left_indptr) and np.array_equal(li, self.left_indices)):
            raise InstanceError("left and right adjacency disagree")

    def __eq__(self, other):
        if not isinstance(other, CoverageInstance):
            return NotImplemented
        return (
            self.n == other.n
            and self.r == other.r
            and np.array_equal(self.right_indptr, other.right_indptr)
            and np.array_equal(self.right_indices, other.right_indices)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def _check_weight_values(weights):
    if not np.isfinite(weights).all():
        raise InstanceError("weights must be finite")
    if (weights < 0).any():
        j = int(np.flatnonzero(weights < 0)[0])
        raise InstanceError(f"right node {j} has negative weight {weights[j]!r}")
    if weights.size and weights.sum() <= 0:
        raise InstanceError("weights are all zero")


def _transpose(n, indptr, indices):
    """Left adjacency from right adjacency; each left list is ascending in ``j``."""
    r = len(indptr) - 1
    js = np.repeat(np.arange(r, dtype=np.int64), np.diff(indptr))
    if indices.size and (indices.min() < 0 or indices.max() >= n):
        # caller reports the dangling index
        return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    order = np.argsort(indices, kind="stable")
    left_indices = js[order]
    left_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(indices, minlength=n), out=left_indptr[1:])
    return left_indptr, left_indices


def normalize_weights(inst):
    """Return a copy of ``inst`` whose weights sum to one."""
    w = np.asarray(inst.weights, dtype=np.float64)
    _check_weight_values(w)
    return CoverageInstance.from_csr(
        inst.n, inst.right_indptr, inst.right_indices, w / w.sum(), normalize=False
    )


# -- SNAP graphs ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    """Simple undirected graph on ``0..num_nodes-1`` with edges ``u < v``."""

    num_nodes: int
    edges: np.ndarray
    original_ids: np.ndarray

    @property
    def num_edges(self):
        return len(self.edges)

    def degrees(self):
        return np.bincount(self.edges.ravel(), minlength=self.num_nodes)


def load_snap_edgelist(path):
    """Read a SNAP edge list (whitespace-separated id pairs, ``#`` comments).

    Node ids are remapped to ``0..V-1`` by ascending original id. Self-loops
    are dropped and duplicate or reversed edges collapse to one.
    """
    us, vs = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) < 2:
                raise ParseError(f"expected two node ids, got {s!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer token in {s!r}", lineno) from None
            us.append(u)
            vs.append(v)
    if not us:
        raise ParseError(f"{path}: empty graph")
    raw = np.column_stack([np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)])
    ids, inverse = np.unique(raw.ravel(), return_inverse=True)
    pairs = inverse.reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.sort(pairs, axis=1)
    pairs = np.unique(pairs, axis=0) if len(pairs) else pairs.reshape(0, 2)
    return UndirectedGraph(len(ids), _frozen(pairs, np.int64), _frozen(ids, np.int64))


def build_symmetric_bipartite(g):
    """Two copies of ``V``; right copy ``j'`` is covered by ``j`` and its neighbours.

    The result has ``m = V + 2E`` and uniform weights ``1/V``.
    """
    V = g.num_nodes
    if V < 1:
        raise InstanceError("graph has no nodes")
    e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    if len(e) and (e[:, 0] == e[:, 1]).any():
        raise InstanceError("graph has self-loops")
    diag = np.arange(V, dtype=np.int64)
    left = np.concatenate([diag, e[:, 0], e[:, 1]])
    right = np.concatenate([diag, e[:, 1], e[:, 0]])
    return CoverageInstance.from_edges(V, V, np.column_stack([left, right]))


# -- native text format ----------------------------------------------------------


def save_native(inst, path):
    """Write ``n r`` / weights / ``m`` / ``i j`` lines; floats keep full precision."""
    edges = inst.edges()
    with open(path, "w") as fh:
        fh.write(f"{inst.n} {inst.r}\n")
        fh.write(" ".join(repr(float(w)) for w in inst.weights) + "\n")
        fh.write(f"{inst.m}\n")
        np.savetxt(fh, edges, fmt="%d")


def load_native(path):
    path = Path(path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    if len(lines) < 3:
        raise ParseError(f"{path}: truncated header")
    try:
        n, r = (int(t) for t in lines[0].split())
    except ValueError:
        raise ParseError("expected 'n r'", 1) from None
    wtoks = lines[1].split()
    if wtoks:
        try:
            weights = np.array([float(t) for t in wtoks])
        except ValueError:
            raise ParseError("non-numeric weight", 2) from None
        if len(weights) != r:
            raise InstanceError(f"weight count {len(weights)} does not match r={r}")
    else:
        weights = None
    try:
        m = int(lines[2])
    except ValueError:
        raise ParseError("expected edge count", 3) from None
    body = [ln for ln in lines[3:] if ln.strip()]
    if len(body) != m:
        raise ParseError(f"{path}: header says {m} edges, found {len(body)}")
    edges = np.empty((m, 2), dtype=np.int64)
    for k, ln in enumerate(body):
        parts = ln.split()
        try:
            edges[k] = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise ParseError(f"malformed edge {ln!r}", k + 4) from None
    out = (edges[:, 1] < 0) | (edges[:, 1] >= r)
    if out.any():
        bad = int(edges[out][0, 1])
        raise InstanceError(f"right index {bad} out of range [0, {r})")
    if len(edges) and ((edges[:, 0] < 0) | (edges[:, 0] >= n)).any():
        row = edges[(edges[:, 0] < 0) | (edges[:, 0] >= n)][0]
        raise InstanceError(f"right node {int(row[1])} has dangling left index {int(row[0])}")
    if weights is not None:
        _check_weight_values(weights)
    return CoverageInstance.from_edges(n, r, edges, weights)


def describe(inst):
    d = inst.degrees
    return {
        "n": inst.n,
        "r": inst.r,
        "m": inst.m,
        "max_degree": int(d.max()),
        "effective_degree": float(np.dot(inst.weights, d)),
        "log_effective_degree": math.log(float(np.dot(inst.weights, d))),
    }
