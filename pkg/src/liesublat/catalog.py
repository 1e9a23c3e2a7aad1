"""Named algebra fixtures, a seeded random solvable generator, and
exhaustive enumeration of all structure-constant tensors in tiny
dimensions.

Every builder returns a validated LieAlgebra and is bit-reproducible
for fixed parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .lie import LieAlgebra, derivation_space, semidirect_extend
from .linalg import ResourceError, UsageError, _check_prime


def _set_bracket(tensor: np.ndarray, p: int, i: int, j: int, vec) -> None:
    v = np.asarray(vec, dtype=np.int64) % p
    tensor[i, j] = v
    tensor[j, i] = (-v) % p


def _unit(n: int, k: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[k] = 1
    return v


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def abelian(dim: int, p: int) -> LieAlgebra:
    """All brackets zero."""
    if not 1 <= dim <= 8:
        raise UsageError("abelian: dim must be in 1..8")
    tensor = np.zeros((dim, dim, dim), dtype=np.int64)
    return LieAlgebra(p, tensor, name=f"abelian({dim},{p})")


def heisenberg(p: int) -> LieAlgebra:
    """Three-dimensional nilpotent algebra with [x, y] = z."""
    t = np.zeros((3, 3, 3), dtype=np.int64)
    _set_bracket(t, p, 0, 1, _unit(3, 2))
    return LieAlgebra(p, t, ("x", "y", "z"), name=f"heisenberg({p})")


def nonabelian2(p: int) -> LieAlgebra:
    """The two-dimensional nonabelian algebra [x, y] = y."""
    t = np.zeros((2, 2, 2), dtype=np.int64)
    _set_bracket(t, p, 0, 1, _unit(2, 1))
    return LieAlgebra(p, t, ("x", "y"), name=f"nonabelian2({p})")


def almost_abelian(dim: int, p: int) -> LieAlgebra:
    """Abelian ideal of codimension one with the extra generator acting
    as the identity on it."""
    if dim < 2:
        raise UsageError("almost_abelian: dim must be at least 2")
    n = dim
    t = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n - 1):
        # [x, b_i] = b_i with x the last basis vector
        _set_bracket(t, p, i, n - 1, -_unit(n, i))
    names = tuple(f"b{i}" for i in range(n - 1)) + ("x",)
    return LieAlgebra(p, t, names, name=f"almost_abelian({dim},{p})")


def sl2(p: int) -> LieAlgebra:
    """sl2 with basis (e, h, f): [e,f] = h, [h,e] = 2e, [h,f] = -2f."""
    if p < 3:
        raise UsageError("sl2 degenerates over GF(2); use p >= 3")
    t = np.zeros((3, 3, 3), dtype=np.int64)
    _set_bracket(t, p, 0, 2, _unit(3, 1))          # [e, f] = h
    _set_bracket(t, p, 1, 0, 2 * _unit(3, 0))      # [h, e] = 2e
    _set_bracket(t, p, 1, 2, -2 * _unit(3, 2))     # [h, f] = -2f
    return LieAlgebra(p, t, ("e", "h", "f"), name=f"sl2({p})")


def simple3_char2() -> LieAlgebra:
    """The three-dimensional simple algebra over GF(2):
    [a,b] = c, [b,c] = b, [a,c] = a."""
    t = np.zeros((3, 3, 3), dtype=np.int64)
    _set_bracket(t, 2, 0, 1, _unit(3, 2))
    _set_bracket(t, 2, 1, 2, _unit(3, 1))
    _set_bracket(t, 2, 0, 2, _unit(3, 0))
    return LieAlgebra(2, t, ("a", "b", "c"), name="K")


# index map for the signed basis of psl3: slot = signed index + 3
_PSL3_CYCLES = [(1, 2, 3), (2, 3, 1), (3, 1, 2), (-3, -2, -1), (-2, -1, -3), (-1, -3, -2)]


def psl3_char3() -> LieAlgebra:
    """psl3 over GF(3) in the signed graded basis e_-3 .. e_3."""
    p, n = 3, 7
    t = np.zeros((n, n, n), dtype=np.int64)

    def slot(s):
        return s + 3

    for i in range(1, 4):
        _set_bracket(t, p, slot(0), slot(i), _unit(n, slot(i)))
        _set_bracket(t, p, slot(0), slot(-i), -_unit(n, slot(-i)))
        _set_bracket(t, p, slot(-i), slot(i), _unit(n, slot(0)))
    for i, j, k in _PSL3_CYCLES:
        _set_bracket(t, p, slot(i), slot(j), _unit(n, slot(-k)))
    names = tuple(f"e{s}" for s in range(-3, 4))
    return LieAlgebra(p, t, names, name="psl3_char3")


def witt(p: int) -> LieAlgebra:
    """The p-dimensional graded algebra with [e_i, e_j] = (j - i) e_{i+j},
    indices running from -1 to p - 2."""
    if p < 5:
        raise UsageError("witt requires p >= 5")
    n = p
    t = np.zeros((n, n, n), dtype=np.int64)
    for i in range(-1, p - 1):
        for j in range(i + 1, p - 1):
            if -1 <= i + j <= p - 2:
                _set_bracket(t, p, i + 1, j + 1, (j - i) * _unit(n, i + j + 1))
    names = tuple(f"e{s}" for s in range(-1, p - 1))
    return LieAlgebra(p, t, names, name=f"witt({p})")


def _matrix_unit_algebra(pairs: list[tuple[int, int]], size: int, p: int, name: str) -> LieAlgebra:
    n = len(pairs)
    index = {ab: k for k, ab in enumerate(pairs)}
    t = np.zeros((n, n, n), dtype=np.int64)
    for u, (a, b) in enumerate(pairs):
        for v, (c, d) in enumerate(pairs):
            if u >= v:
                continue
            vec = np.zeros(n, dtype=np.int64)
            if b == c and (a, d) in index:
                vec[index[(a, d)]] += 1
            if d == a and (c, b) in index:
                vec[index[(c, b)]] -= 1
            if vec.any():
                _set_bracket(t, p, u, v, vec)
    names = tuple(f"E{a}{b}" for a, b in pairs)
    return LieAlgebra(p, t, names, name=name)


def upper_triangular(n: int, p: int) -> LieAlgebra:
    """Upper-triangular n x n matrices (dim n(n+1)/2 <= 8 forces n <= 3)."""
    if n * (n + 1) // 2 > 8:
        raise UsageError("upper_triangular: n(n+1)/2 must be at most 8")
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    return _matrix_unit_algebra(pairs, n, p, f"t({n},{p})")


def strictly_upper(n: int, p: int) -> LieAlgebra:
    """Strictly upper-triangular n x n matrices (n <= 4)."""
    if n * (n - 1) // 2 > 8 or n < 2:
        raise UsageError("strictly_upper: n(n-1)/2 must be in 1..8")
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return _matrix_unit_algebra(pairs, n, p, f"n({n},{p})")


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[..., LieAlgebra]
    params: tuple[str, ...]
    provenance: str


CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry("abelian", abelian, ("dim", "p"), "standard construction"),
        CatalogEntry("heisenberg", heisenberg, ("p",), "standard construction"),
        CatalogEntry("nonabelian2", nonabelian2, ("p",), "standard construction"),
        CatalogEntry("almost_abelian", almost_abelian, ("dim", "p"), "standard construction"),
        CatalogEntry("sl2", sl2, ("p",), "standard construction"),
        CatalogEntry("K", simple3_char2, (), "simple 3-dim algebra over GF(2) with 1-dim Frattini subalgebra"),
        CatalogEntry("psl3_char3", psl3_char3, (), "psl3 over GF(3), signed graded basis"),
        CatalogEntry("witt", witt, ("p",), "Witt algebra W(1:1)"),
        CatalogEntry("upper_triangular", upper_triangular, ("n", "p"), "solvable matrix fixture"),
        CatalogEntry("strictly_upper", strictly_upper, ("n", "p"), "nilpotent matrix fixture"),
    ]
}


def catalog_names() -> list[CatalogEntry]:
    return [CATALOG[k] for k in sorted(CATALOG)]


def catalog_build(name: str, **params) -> LieAlgebra:
    entry = CATALOG.get(name)
    if entry is None:
        raise UsageError(f"unknown catalog algebra {name!r}; known: {sorted(CATALOG)}")
    missing = [k for k in entry.params if k not in params]
    if missing:
        raise UsageError(f"{name} requires parameters {entry.params}, missing {missing}")
    extra = [k for k in params if k not in entry.params]
    if extra:
        raise UsageError(f"{name} does not take parameters {extra}")
    return entry.builder(**params)


# ---------------------------------------------------------------------------
# Random solvable algebras
# ---------------------------------------------------------------------------

def random_solvable(dim: int, p: int, seed: int) -> LieAlgebra:
    """Iterated derivation extensions of a small abelian base.

    Every extension of a solvable algebra by a derivation is solvable,
    so sampling coefficients in the derivation space never needs
    rejection.  Output is deterministic in (dim, p, seed).
    """
    _check_prime(p)
    if not 1 <= dim <= 6:
        raise UsageError("random_solvable: dim must be in 1..6")
    rng = np.random.default_rng(np.random.SeedSequence([seed, dim, p]))
    base = min(dim, 1 + int(rng.integers(0, 2)))
    alg = abelian(base, p)
    while alg.dim < dim:
        basis = derivation_space(alg)
        coeffs = rng.integers(0, p, size=basis.shape[0])
        d = (coeffs.astype(np.int64) @ basis.astype(np.int64) % p).reshape(alg.dim, alg.dim)
        alg = semidirect_extend(alg, d)
    alg.name = f"random_solvable({dim},{p},{seed})"
    if not alg.is_solvable():
        raise RuntimeError("random_solvable produced a non-solvable algebra")
    return alg


# ---------------------------------------------------------------------------
# Exhaustive enumeration of structures
# ---------------------------------------------------------------------------

def structure_entry_count(dim: int) -> int:
    return dim * dim * (dim - 1) // 2


def structure_count(dim: int, p: int) -> int:
    return p ** structure_entry_count(dim)


def enumerate_structures(dim: int, p: int, chunk: int = 4096) -> Iterator[LieAlgebra]:
    """All valid structure tensors of the given dimension, Jacobi-filtered.

    No isomorphism deduplication: suites quantify over raw tensors.
    Deterministic order: the free entries (pairs (i, j) with i < j in lex
    order, then the coefficient index) read as base-p digits of an
    ascending counter, first entry most significant.
    """
    _check_prime(p)
    if dim < 1:
        raise UsageError("enumerate_structures: dim must be at least 1")
    total = structure_count(dim, p)
    if total > 1 << 25:
        raise ResourceError(
            f"{total} candidate tensors for dim={dim}, p={p} exceeds the 2^25 guard"
        )
    entries = structure_entry_count(dim)
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    counter = 0
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        vals = np.arange(start, stop, dtype=np.int64)
        tensors = np.zeros((stop - start, dim, dim, dim), dtype=np.int64)
        pos = 0
        for (i, j) in pairs:
            for k in range(dim):
                digit = (vals // p ** (entries - 1 - pos)) % p
                tensors[:, i, j, k] = digit
                tensors[:, j, i, k] = (-digit) % p
                pos += 1
        t = np.einsum("bijm,bmkl->bijkl", tensors, tensors)
        jac = (t + t.transpose(0, 2, 3, 1, 4) + t.transpose(0, 3, 1, 2, 4)) % p
        ok = ~jac.reshape(stop - start, -1).any(axis=1)
        for idx in np.nonzero(ok)[0]:
            counter += 1
            yield LieAlgebra(
                p, tensors[idx], name=f"enum({dim},{p})#{start + int(idx)}"
            )
