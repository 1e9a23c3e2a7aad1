"""Complete subalgebra lattices of a LieAlgebra.

The builder sweeps every subspace of GF(p)^n in the canonical
enumeration order and keeps the bracket-closed ones, so the node list
is exactly the set of subalgebras, deterministically ordered by
(dimension, pivot pattern, free entries).  The sweep is vectorised per
pivot-pattern shard; the worst fixture in range (GF(3)^7, about 2.05
million candidate subspaces) takes well under a minute.

Small and medium lattices additionally expose dense containment, join,
meet and cover tables (`tables()`), which is what makes whole-lattice
predicate scans cheap.  Large lattices fall back to lazy queries backed
by membership bitsets and a per-line containment index.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lie import LieAlgebra
from .linalg import (
    ResourceError,
    Subspace,
    UsageError,
    count_subspaces,
    batch_subspaces,
    subspace_shards,
)

CACHE_VERSION = 1
DEFAULT_SUBSPACE_BUDGET = 4_000_000
TABLE_NODE_LIMIT = 4096
_BATCH = 1 << 16


class CacheError(RuntimeError):
    """A lattice cache that cannot be used (wrong version or algebra)."""


def _closed_mask(tensor: np.ndarray, p: int, mats: np.ndarray, pattern) -> np.ndarray:
    """Which candidates (RREF bases sharing one pivot pattern) are
    bracket-closed; checks all basis pairs r < s."""
    m, k, n = mats.shape
    if k < 2:
        return np.ones(m, dtype=bool)
    b = mats.astype(np.int64)
    c = tensor.astype(np.int64)
    # e[m, r, j, l] = sum_i b[m,r,i] c[i,j,l]
    e = np.einsum("mri,ijl->mrjl", b, c)
    iu, il = np.triu_indices(k, 1)
    # t[m, q, l] = [b_r, b_s]_l for the q-th pair (r, s)
    t = np.einsum("mqjl,mqj->mql", e[:, iu], b[:, il]) % p
    coef = t[:, :, list(pattern)]
    recon = np.einsum("mqt,mtn->mqn", coef, b) % p
    return (t == recon).reshape(m, -1).all(axis=1)


def _sweep_shard(tensor, p, n, kk, pattern, count):
    kept = []
    for start in range(0, count, _BATCH):
        stop = min(start + _BATCH, count)
        mats = batch_subspaces(n, p, pattern, start, stop)
        ok = _closed_mask(tensor, p, mats, pattern)
        if ok.any():
            kept.append(mats[ok])
    if not kept:
        return np.zeros((0, kk, n), dtype=np.uint8)
    return np.concatenate(kept)


class SubalgebraLattice:
    """All bracket-closed subspaces of a LieAlgebra, with lattice services."""

    def __init__(self, algebra: LieAlgebra, nodes: list[Subspace]):
        self.algebra = algebra
        self.nodes = nodes
        self.dims = np.array([s.dim for s in nodes], dtype=np.int64)
        self.index = {s.key: i for i, s in enumerate(nodes)}
        self.bits_index = {s.bits(): i for i, s in enumerate(nodes)}
        self.zero_id = 0
        self.top_id = len(nodes) - 1
        self._tables: LatticeTables | None = None
        self._join_memo: dict = {}
        self._containers: dict[int, np.ndarray] | None = None
        self._stacks: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] | None = None
        top = nodes[self.top_id]
        if nodes[0].dim != 0 or top.dim != algebra.dim:
            raise UsageError("lattice must contain the zero subspace and the algebra")

    # -- construction -------------------------------------------------------

    @classmethod
    def build(
        cls,
        algebra: LieAlgebra,
        budget: int = DEFAULT_SUBSPACE_BUDGET,
        threads: int | None = None,
        node_limit: int | None = None,
    ) -> "SubalgebraLattice":
        n, p = algebra.dim, algebra.p
        total = count_subspaces(n, p)
        if total > budget:
            raise ResourceError(
                f"subspace sweep for dim {n} over GF({p}) needs {total} candidates, "
                f"over budget {budget}"
            )
        shards = list(subspace_shards(n, p))
        if threads and threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                blocks = list(
                    pool.map(
                        lambda sh: _sweep_shard(algebra.tensor, p, n, *sh), shards
                    )
                )
        else:
            blocks = [_sweep_shard(algebra.tensor, p, n, *sh) for sh in shards]
        nodes: list[Subspace] = []
        for (kk, pattern, _), block in zip(shards, blocks):
            for i in range(block.shape[0]):
                nodes.append(Subspace.from_rref(block[i], n, p))
            if node_limit is not None and len(nodes) > node_limit:
                raise ResourceError(
                    f"lattice exceeds node limit {node_limit}"
                )
        return cls(algebra, nodes)

    def __len__(self):
        return len(self.nodes)

    def counts_by_dim(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.dims:
            out[int(d)] = out.get(int(d), 0) + 1
        return out

    # -- node lookup ---------------------------------------------------------

    def node_id(self, s) -> int:
        if isinstance(s, (int, np.integer)):
            i = int(s)
            if not 0 <= i < len(self.nodes):
                raise UsageError(f"node id {i} out of range")
            return i
        if not isinstance(s, Subspace):
            s = Subspace.from_vectors(list(s), self.algebra.dim, self.algebra.p)
        got = self.index.get(s.key)
        if got is None:
            raise UsageError("subspace is not a node of this lattice")
        return got

    def node(self, i: int) -> Subspace:
        return self.nodes[self.node_id(i)]

    def _le(self, a: int, b: int) -> bool:
        ba, bb = self.nodes[a].bits(), self.nodes[b].bits()
        return ba & bb == ba

    # -- join and meet ---------------------------------------------------------

    def meet(self, a, b) -> int:
        ia, ib = self.node_id(a), self.node_id(b)
        got = self.bits_index.get(self.nodes[ia].bits() & self.nodes[ib].bits())
        if got is None:
            raise RuntimeError("meet of two nodes is missing from the lattice")
        return got

    def join(self, a, b) -> int:
        ia, ib = self.node_id(a), self.node_id(b)
        if ia == ib:
            return ia
        key = (ia, ib) if ia < ib else (ib, ia)
        got = self._join_memo.get(key)
        if got is not None:
            return got
        if self._le(ia, ib):
            result = ib
        elif self._le(ib, ia):
            result = ia
        else:
            gen = self.algebra.generated_subalgebra(
                self.nodes[ia].sum(self.nodes[ib])
            )
            result = self.index.get(gen.key)
            if result is None:
                raise RuntimeError("join of two nodes is missing from the lattice")
        if len(self._join_memo) > 1 << 21:
            self._join_memo.clear()
        self._join_memo[key] = result
        return result

    # -- covering relation -------------------------------------------------------

    def _line_containers(self) -> dict[int, np.ndarray]:
        """node id of each line -> ids of all nodes containing that line."""
        if self._containers is None:
            buckets: dict[int, list[int]] = {}
            for i, s in enumerate(self.nodes):
                if s.dim == 0:
                    continue
                for rep in s.line_reps():
                    line = Subspace.from_vectors([rep], s.n, s.p)
                    buckets.setdefault(self.index[line.key], []).append(i)
            self._containers = {
                k: np.array(v, dtype=np.int64) for k, v in buckets.items()
            }
        return self._containers

    def _first_line_id(self, i: int) -> int:
        s = self.nodes[i]
        rep = next(iter(s.line_reps()))
        return self.index[Subspace.from_vectors([rep], s.n, s.p).key]

    def is_maximal_in(self, a, b) -> bool:
        """a is a maximal proper subalgebra of b (no node strictly between)."""
        ia, ib = self.node_id(a), self.node_id(b)
        if ia == ib or not self._le(ia, ib):
            raise UsageError("is_maximal_in expects nodes a strictly below b")
        da, db = int(self.dims[ia]), int(self.dims[ib])
        if db == da + 1:
            return True
        if self._tables is not None:
            return bool(self._tables.maximal[ia, ib])
        if da == 0:
            return db == 1  # every line is a node, so anything bigger has one
        bb = self.nodes[ib].bits()
        ba = self.nodes[ia].bits()
        for w in self._line_containers()[self._first_line_id(ia)]:
            dw = int(self.dims[w])
            if not da < dw < db:
                continue
            bw = self.nodes[w].bits()
            if ba & bw == ba and bw & bb == bw:
                return False
        return True

    def covers(self, a, b) -> bool:
        """b covers a: same relation as is_maximal_in(a, b)."""
        return self.is_maximal_in(a, b)

    def maximal_subalgebras(self) -> list[int]:
        top = self.top_id
        if self._tables is not None:
            return [int(i) for i in np.nonzero(self._tables.maximal[:, top])[0]]
        out = []
        n = int(self.dims[top])
        for i in range(len(self.nodes)):
            if i == top:
                continue
            d = int(self.dims[i])
            if d == 0:
                if n == 1:
                    out.append(i)
                continue
            bi = self.nodes[i].bits()
            blocked = False
            for w in self._line_containers()[self._first_line_id(i)]:
                dw = int(self.dims[w])
                if d < dw < n and bi & self.nodes[w].bits() == bi:
                    blocked = True
                    break
            if not blocked:
                out.append(i)
        return out

    def frattini(self) -> int:
        maxima = self.maximal_subalgebras()
        if not maxima:
            raise UsageError("frattini is undefined without maximal subalgebras")
        bits = self.nodes[maxima[0]].bits()
        for m in maxima[1:]:
            bits &= self.nodes[m].bits()
        return self.bits_index[bits]

    def induced_ids(self, v) -> np.ndarray:
        """ids of all nodes contained in the node v (the lattice of the
        subalgebra v)."""
        iv = self.node_id(v)
        if self._tables is not None:
            return np.nonzero(self._tables.contain[:, iv])[0]
        bv = self.nodes[iv].bits()
        return np.array(
            [i for i, s in enumerate(self.nodes) if s.bits() & bv == s.bits()],
            dtype=np.int64,
        )

    # -- dense tables -----------------------------------------------------------

    def stacks(self) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """Per-dimension (ids, stacked bases, stacked pivots)."""
        if self._stacks is None:
            out = {}
            for k in sorted(set(int(d) for d in self.dims)):
                ids = np.nonzero(self.dims == k)[0]
                rows = np.stack([self.nodes[i].rows for i in ids]) if k else np.zeros(
                    (len(ids), 0, self.algebra.dim), dtype=np.uint8
                )
                pivs = np.array([self.nodes[i].pivots for i in ids], dtype=np.int64)
                if k == 0:
                    pivs = pivs.reshape(len(ids), 0)
                out[k] = (ids, rows, pivs)
            self._stacks = out
        return self._stacks

    def has_tables(self, limit: int = TABLE_NODE_LIMIT) -> bool:
        return len(self.nodes) <= limit

    def tables(self, limit: int = TABLE_NODE_LIMIT) -> "LatticeTables":
        if self._tables is None:
            if not self.has_tables(limit):
                raise ResourceError(
                    f"{len(self.nodes)} nodes exceed the dense-table limit {limit}"
                )
            self._tables = LatticeTables.build(self)
        return self._tables


@dataclass
class LatticeTables:
    """Dense id-level lattice relations: containment, join, meet, covers."""

    contain: np.ndarray   # bool, contain[a, b] = a <= b
    join: np.ndarray      # int32 node ids
    meet: np.ndarray      # int32 node ids
    maximal: np.ndarray   # bool, maximal[a, b] = a maximal in b

    @classmethod
    def build(cls, lat: SubalgebraLattice) -> "LatticeTables":
        n_nodes = len(lat.nodes)
        p = lat.algebra.p
        contain = np.zeros((n_nodes, n_nodes), dtype=bool)
        np.fill_diagonal(contain, True)
        stacks = lat.stacks()
        ks = sorted(stacks)
        for ka in ks:
            ids_a, rows_a, _ = stacks[ka]
            for kb in ks:
                if kb <= ka:
                    continue
                ids_b, rows_b, piv_b = stacks[kb]
                if ka == 0:
                    contain[np.ix_(ids_a, ids_b)] = True
                    continue
                sub = _stack_membership(rows_a, rows_b, piv_b, p)
                contain[np.ix_(ids_a, ids_b)] = sub
        join, meet = _join_meet_tables(contain, lat.dims)
        strict = contain & ~np.eye(n_nodes, dtype=bool)
        between = (strict.astype(np.float32) @ strict.astype(np.float32)) > 0.5
        maximal = strict & ~between
        return cls(contain, join, meet, maximal)


def _stack_membership(rows_a, rows_b, piv_b, p, chunk: int = 256) -> np.ndarray:
    """sub[a, b] = every row of basis a lies in span(basis b).

    All bases b share dimension kb and carry their pivot columns, so
    membership is the RREF reconstruction test v == v[pivots] @ basis.
    """
    na = rows_a.shape[0]
    nb = rows_b.shape[0]
    out = np.zeros((na, nb), dtype=bool)
    b64 = rows_b.astype(np.int64)
    for start in range(0, na, chunk):
        stop = min(start + chunk, na)
        a64 = rows_a[start:stop].astype(np.int64)      # (m, ka, n)
        coef = a64[:, :, piv_b]                         # (m, ka, nb, kb)
        recon = np.einsum("arbt,btn->arbn", coef, b64) % p
        ok = (recon == a64[:, :, None, :]).all(axis=(1, 3))
        out[start:stop] = ok
    return out


def _msb_positions(words: np.ndarray) -> np.ndarray:
    """floor(log2(word)) per element via binary reduction; exact for uint64."""
    m = words.copy()
    r = np.zeros(words.shape, dtype=np.int64)
    for s in (32, 16, 8, 4, 2, 1):
        t = m >> np.uint64(s)
        mask = t != 0
        r[mask] += s
        m = np.where(mask, t, m)
    return r


def _join_meet_tables(contain: np.ndarray, dims: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Join and meet id tables from the containment matrix.

    Node ids ascend with dimension, so among the common upper bounds of
    (a, b) the unique minimal one (the join) is the lowest set bit of
    the AND of packed upper-bound rows; dually for meets.
    """
    n = contain.shape[0]
    words = ((n + 63) // 64) * 8
    uppers = np.zeros((n, words), dtype=np.uint8)
    packed = np.packbits(contain, axis=1, bitorder="little")
    uppers[:, : packed.shape[1]] = packed
    uppers = uppers.view(np.uint64)
    lowers = np.zeros((n, words), dtype=np.uint8)
    packed_t = np.packbits(contain.T, axis=1, bitorder="little")
    lowers[:, : packed_t.shape[1]] = packed_t
    lowers = lowers.view(np.uint64)

    join = np.zeros((n, n), dtype=np.int32)
    meet = np.zeros((n, n), dtype=np.int32)
    for a in range(n):
        ua = uppers[a] & uppers               # (n, W)
        nz = ua != 0
        widx = nz.argmax(axis=1)
        word = ua[np.arange(n), widx]
        low = word & (~word + np.uint64(1))
        join[a] = widx * 64 + _msb_positions(low)
        la = lowers[a] & lowers
        nz = la != 0
        widx = (la.shape[1] - 1) - nz[:, ::-1].argmax(axis=1)
        word = la[np.arange(n), widx]
        meet[a] = widx * 64 + _msb_positions(word)
    return join, meet


# ---------------------------------------------------------------------------
# Disk cache
# ---------------------------------------------------------------------------

def save_cache(lat: SubalgebraLattice, path: str) -> None:
    doc = {
        "version": CACHE_VERSION,
        "algebra_sha256": lat.algebra.sha256(),
        "nodes": [s.to_digit_rows() for s in lat.nodes],
    }
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
    os.replace(tmp, path)


def load_cache(path: str, algebra: LieAlgebra) -> SubalgebraLattice:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise CacheError(f"unreadable cache {path}: {err}") from err
    if doc.get("version") != CACHE_VERSION:
        raise CacheError(f"cache version {doc.get('version')} != {CACHE_VERSION}")
    if doc.get("algebra_sha256") != algebra.sha256():
        raise CacheError("cache was built for a different algebra")
    n, p = algebra.dim, algebra.p
    nodes = []
    try:
        for rows in doc["nodes"]:
            arr = np.array(rows, dtype=np.int64).reshape(len(rows), n)
            if rows and ((arr < 0) | (arr >= p)).any():
                raise CacheError("cache rows are not reduced mod p")
            nodes.append(Subspace.from_rref(arr.astype(np.uint8), n, p))
    except (ValueError, TypeError) as err:
        raise CacheError(f"malformed cache node data: {err}") from err
    return SubalgebraLattice(algebra, nodes)


def build_lattice(
    algebra: LieAlgebra,
    budget: int = DEFAULT_SUBSPACE_BUDGET,
    threads: int | None = None,
    cache_path: str | None = None,
    node_limit: int | None = None,
) -> SubalgebraLattice:
    """Build the lattice, consulting and refreshing a cache file if given."""
    if cache_path and os.path.exists(cache_path):
        try:
            return load_cache(cache_path, algebra)
        except CacheError:
            pass  # stale cache: rebuild below
    lat = SubalgebraLattice.build(algebra, budget, threads, node_limit)
    if cache_path:
        save_cache(lat, cache_path)
    return lat
