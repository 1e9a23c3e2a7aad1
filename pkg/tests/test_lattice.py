import itertools

import numpy as np
import pytest

from liesublat.catalog import (
    abelian,
    almost_abelian,
    heisenberg,
    simple3_char2,
    sl2,
    witt,
)
from liesublat.lattice import (
    CacheError,
    SubalgebraLattice,
    build_lattice,
    load_cache,
    save_cache,
)
from liesublat.linalg import (
    ResourceError,
    Subspace,
    UsageError,
    enumerate_subspaces,
    gaussian_binomial,
)


@pytest.fixture(scope="module")
def lat_K():
    return SubalgebraLattice.build(simple3_char2())


@pytest.fixture(scope="module")
def lat_sl2_3():
    return SubalgebraLattice.build(sl2(3))


# ---------------------------------------------------------------------------
# Node sets
# ---------------------------------------------------------------------------

def test_abelian_2_2_has_all_subspaces():
    lat = SubalgebraLattice.build(abelian(2, 2))
    assert len(lat) == 5


def test_K_lattice_shape(lat_K):
    assert len(lat_K) == 12
    assert lat_K.counts_by_dim() == {0: 1, 1: 7, 2: 3, 3: 1}
    # the three planes all contain c
    c = (0, 0, 1)
    for i, s in enumerate(lat_K.nodes):
        if s.dim == 2:
            assert s.contains(c)


def test_sl2_f3_lattice_shape(lat_sl2_3):
    assert len(lat_sl2_3) == 19
    assert lat_sl2_3.counts_by_dim() == {0: 1, 1: 13, 2: 4, 3: 1}


def test_nodes_match_bruteforce_closure(lat_K, lat_sl2_3):
    # independent oracle: closure checked on all vector pairs
    for lat in (lat_K, lat_sl2_3):
        L = lat.algebra
        expected = []
        for s in enumerate_subspaces(L.dim, L.p):
            vecs = list(s.vectors())
            closed = all(
                s.contains(L.bracket(x, y)) for x in vecs for y in vecs
            )
            if closed:
                expected.append(s.key)
        assert [s.key for s in lat.nodes] == expected


def test_counts_bounded_by_gaussian(lat_sl2_3):
    for k, cnt in lat_sl2_3.counts_by_dim().items():
        assert cnt <= gaussian_binomial(3, k, 3)


def test_every_node_is_subalgebra_and_rejects_rest(lat_K):
    K = lat_K.algebra
    node_keys = {s.key for s in lat_K.nodes}
    for s in enumerate_subspaces(3, 2):
        if s.key in node_keys:
            assert K.is_subalgebra(s)
        else:
            assert not K.is_subalgebra(s)


# ---------------------------------------------------------------------------
# Join / meet
# ---------------------------------------------------------------------------

def test_join_meet_basic(lat_K):
    K = lat_K.algebra
    fa = lat_K.node_id(Subspace.from_vectors([(1, 0, 0)], 3, 2))
    fb = lat_K.node_id(Subspace.from_vectors([(0, 1, 0)], 3, 2))
    assert lat_K.join(fa, fa) == fa
    assert lat_K.meet(fa, lat_K.top_id) == fa
    assert lat_K.join(fa, fb) == lat_K.top_id


def test_join_sl2_e_f(lat_sl2_3):
    fe = lat_sl2_3.node_id(Subspace.from_vectors([(1, 0, 0)], 3, 3))
    ff = lat_sl2_3.node_id(Subspace.from_vectors([(0, 0, 1)], 3, 3))
    assert lat_sl2_3.join(fe, ff) == lat_sl2_3.top_id


def test_meet_closed_join_is_node(lat_sl2_3):
    n = len(lat_sl2_3)
    for a in range(n):
        for b in range(n):
            m = lat_sl2_3.meet(a, b)
            j = lat_sl2_3.join(a, b)
            assert 0 <= m < n and 0 <= j < n
            assert lat_sl2_3.nodes[m] == lat_sl2_3.nodes[a].meet(lat_sl2_3.nodes[b])


def test_foreign_node_rejected(lat_K):
    plane_ab = Subspace.from_vectors([(1, 0, 0), (0, 1, 0)], 3, 2)
    with pytest.raises(UsageError):
        lat_K.node_id(plane_ab)


# ---------------------------------------------------------------------------
# Maximality and covers
# ---------------------------------------------------------------------------

def _maximal_oracle(lat, a, b):
    sa, sb = lat.nodes[a], lat.nodes[b]
    if not (sa.is_subspace_of(sb) and sa.dim < sb.dim):
        return None
    for w in lat.nodes:
        if (
            sa.dim < w.dim < sb.dim
            and sa.is_subspace_of(w)
            and w.is_subspace_of(sb)
        ):
            return False
    return True


@pytest.mark.parametrize("fixture", ["lat_K", "lat_sl2_3"])
def test_maximality_matches_oracle(fixture, request):
    lat = request.getfixturevalue(fixture)
    n = len(lat)
    for a in range(n):
        for b in range(n):
            expected = _maximal_oracle(lat, a, b)
            if expected is None:
                continue
            assert lat.is_maximal_in(a, b) == expected
            assert lat.covers(a, b) == expected


def test_line_maximal_in_plane(lat_K):
    line = lat_K.node_id(Subspace.from_vectors([(0, 0, 1)], 3, 2))
    plane = lat_K.node_id(Subspace.from_vectors([(1, 0, 0), (0, 0, 1)], 3, 2))
    assert lat_K.is_maximal_in(line, plane)


def test_maximal_subalgebras_K(lat_K):
    maxima = lat_K.maximal_subalgebras()
    assert len(maxima) == 3
    for m in maxima:
        assert lat_K.dims[m] == 2
        assert lat_K.nodes[m].contains((0, 0, 1))


def test_tables_agree_with_lazy_queries(lat_sl2_3):
    t = lat_sl2_3.tables()
    n = len(lat_sl2_3)
    for a in range(n):
        for b in range(n):
            assert t.contain[a, b] == lat_sl2_3.nodes[a].is_subspace_of(
                lat_sl2_3.nodes[b]
            )
            assert t.join[a, b] == lat_sl2_3.join(a, b)
            assert t.meet[a, b] == lat_sl2_3.meet(a, b)
            expected = _maximal_oracle(lat_sl2_3, a, b)
            if expected is not None:
                assert bool(t.maximal[a, b]) == expected


def test_tables_on_medium_lattice():
    lat = SubalgebraLattice.build(almost_abelian(4, 3))
    t = lat.tables()
    rng = np.random.default_rng(2)
    n = len(lat)
    for _ in range(300):
        a, b = rng.integers(0, n, size=2)
        assert t.join[a, b] == lat.join(int(a), int(b))
        assert t.meet[a, b] == lat.meet(int(a), int(b))


# ---------------------------------------------------------------------------
# Frattini
# ---------------------------------------------------------------------------

def test_frattini_K(lat_K):
    f = lat_K.frattini()
    assert lat_K.nodes[f] == Subspace.from_vectors([(0, 0, 1)], 3, 2)


def test_frattini_abelian_zero():
    for n, p in [(2, 3), (3, 2)]:
        lat = SubalgebraLattice.build(abelian(n, p))
        assert lat.dims[lat.frattini()] == 0


def test_frattini_sl2_f3_zero(lat_sl2_3):
    assert lat_sl2_3.dims[lat_sl2_3.frattini()] == 0


# ---------------------------------------------------------------------------
# Determinism and budget
# ---------------------------------------------------------------------------

def test_build_deterministic_and_parallel_identical():
    L = witt(5)
    one = SubalgebraLattice.build(L)
    two = SubalgebraLattice.build(L)
    par = SubalgebraLattice.build(L, threads=2)
    assert [s.key for s in one.nodes] == [s.key for s in two.nodes]
    assert [s.key for s in one.nodes] == [s.key for s in par.nodes]


def test_budget_error_reports_estimate():
    with pytest.raises(ResourceError) as err:
        SubalgebraLattice.build(heisenberg(7), budget=10)
    assert "2850" in str(err.value) or "candidates" in str(err.value)


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------

def test_cache_round_trip(tmp_path, lat_sl2_3):
    path = str(tmp_path / "sl2.lat.json")
    save_cache(lat_sl2_3, path)
    back = load_cache(path, lat_sl2_3.algebra)
    assert [s.key for s in back.nodes] == [s.key for s in lat_sl2_3.nodes]
    # byte-identical second save
    save_cache(back, path + ".2")
    assert open(path).read() == open(path + ".2").read()


def test_cache_algebra_mismatch(tmp_path, lat_sl2_3):
    path = str(tmp_path / "sl2.lat.json")
    save_cache(lat_sl2_3, path)
    with pytest.raises(CacheError):
        load_cache(path, sl2(5))


def test_cache_version_and_corruption(tmp_path, lat_K):
    path = str(tmp_path / "k.lat.json")
    save_cache(lat_K, path)
    doc = open(path).read().replace('"version":1', '"version":99')
    open(path, "w").write(doc)
    with pytest.raises(CacheError):
        load_cache(path, lat_K.algebra)
    open(path, "w").write("{not json")
    with pytest.raises(CacheError):
        load_cache(path, lat_K.algebra)


def test_build_lattice_uses_cache(tmp_path):
    L = sl2(3)
    path = str(tmp_path / "auto.json")
    first = build_lattice(L, cache_path=path)
    second = build_lattice(L, cache_path=path)
    assert [s.key for s in first.nodes] == [s.key for s in second.nodes]


def test_induced_ids(lat_sl2_3):
    borel = None
    for i, s in enumerate(lat_sl2_3.nodes):
        if s.dim == 2:
            borel = i
            break
    ids = lat_sl2_3.induced_ids(borel)
    # 0, the borel itself, and the lines inside it: 2-dim over GF(3) has 4 lines
    assert len(ids) == 6
