"""Named verification suites over catalog fixtures, exhaustively
enumerated small tensor universes, and seeded random solvable samples.

Each suite binds algebras, their subalgebra lattices and the lattice
predicates into a list of assertions and emits a machine-readable
SuiteReport.  Reports are deterministic for a fixed config and seed;
`report_digest` hashes everything except wall-clock timings.

A claim's status is "pass" or "fail" when the underlying statement is
asserted, and "reported" for computations whose outcome is recorded but
deliberately not asserted (finite-field cases the theory leaves open).
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import predicates as P
from .catalog import (
    catalog_build,
    enumerate_structures,
    psl3_char3,
    random_solvable,
    simple3_char2,
)
from .lattice import SubalgebraLattice
from .lie import LieAlgebra
from .linalg import Subspace, UsageError, count_subspaces


@dataclass(frozen=True)
class HarnessConfig:
    seed: int = 1
    random_per_cell: int = 25
    random_dims: tuple = (2, 3, 4, 5)
    random_primes: tuple = (2, 3, 5)
    enum_cells: tuple = ((1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3))
    include_psl3: bool = True
    max_subspaces: int = 4_000_000
    table_limit: int = 4096
    time_budget_secs: float = 600.0
    threads: int = 1

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["random_dims"] = list(self.random_dims)
        doc["random_primes"] = list(self.random_primes)
        doc["enum_cells"] = [list(c) for c in self.enum_cells]
        return doc


DEFAULT_CONFIG = HarnessConfig()

#: results the suites deliberately do not chase: their hypotheses have
#: no instances over the finite prime fields this library supports.
OMITTED_TOPICS = {
    "toral-rank-and-restricted-structure": "needs an algebraically closed base field",
    "mu-algebra-witnesses": "mu-algebras do not exist over finite fields",
    "non-split-simple-3dim-ambients": "every 3-dim simple algebra over GF(p) is split",
    "split-solvable-sm-classification": "needs infinite perfect fields and Jordan decompositions",
    "pairwise-non-split-generation": "no finite-field algebra has all pairs generating non-split simples",
}


# ---------------------------------------------------------------------------
# Per-algebra analysis (computed once, shared by all suites)
# ---------------------------------------------------------------------------

class AlgebraAnalysis:
    """Everything the suites need about one algebra, extracted while the
    dense lattice tables are hot; large tables are dropped afterwards."""

    def __init__(self, algebra: LieAlgebra, config: HarnessConfig):
        self.algebra = algebra
        self.name = algebra.name
        t0 = time.monotonic()
        lat = SubalgebraLattice.build(
            algebra, budget=config.max_subspaces,
            threads=config.threads if config.threads > 1 else None,
        )
        self.build_secs = time.monotonic() - t0
        self.lat = lat
        self.n_nodes = len(lat)
        self.heavy = not lat.has_tables(config.table_limit)
        self.solvable = algebra.is_solvable()
        self.flags = algebra.structural_flags()
        self.derived = algebra.bracket_spaces(algebra.full_space(), algebra.full_space())
        if self.heavy:
            self._heavy_analysis()
        else:
            self._table_analysis(config)

    # -- dense path ---------------------------------------------------------

    def _table_analysis(self, config):
        lat = self.lat
        self.modular, self.modular_wit = P.modular_inventory(lat)
        self.um, self.lm, self.sm_wit = P.sm_inventory(lat)
        self.sm = self.um & self.lm
        self.quasi, self.quasi_wit = P.quasi_ideal_inventory(lat)
        self.ideal = P.ideal_inventory(lat)
        self.mu = P.is_mu_algebra(lat)
        t = lat.tables()
        self.maximal_top = t.maximal[:, lat.top_id].copy()
        self.frattini_id = lat.frattini()
        self._line_flags()
        self._strong_flags()
        self._atom_scalars()
        self._core_free_sm()
        self._local_lemma(t)
        self._modular_star_checks()
        gen = P.has_one_and_half_generation(lat)
        self.gen15 = gen.verdict
        self.gen15_wit = gen.witness
        if self.n_nodes > 600:
            lat._tables = None
            lat._join_memo.clear()

    def _line_flags(self):
        self.line_ids = P.line_node_ids(self.lat)
        self.ideal_lines = P.ideal_line_flags(self.lat)
        self.quasi_lines = P.quasi_line_flags(self.lat)

    def _strong_flags(self):
        """A node is a strong (quasi-)ideal iff it contains no line that
        fails to be an ideal (quasi-ideal); membership of the canonical
        line representatives is tested per dimension class in batch."""
        lat = self.lat
        n = self.n_nodes
        p = lat.algebra.p
        self.strong_ideal = np.zeros(n, dtype=bool)
        self.strong_quasi = np.zeros(n, dtype=bool)
        bad_quasi = np.array([not self.quasi_lines[int(i)] for i in self.line_ids])
        bad_ideal = np.array([not self.ideal_lines[int(i)] for i in self.line_ids])
        reps = P.line_matrix(lat.algebra)  # same order as self.line_ids
        for k, (ids, rows, pivs) in lat.stacks().items():
            if k == 0:
                self.strong_ideal[ids] = True
                self.strong_quasi[ids] = True
                continue
            rows64 = rows.astype(np.int64)
            for start in range(0, len(ids), 256):
                sl = slice(start, start + 256)
                coef = reps[:, pivs[sl]]                           # (lines, m, k)
                recon = np.einsum("xmk,mkn->xmn", coef, rows64[sl]) % p
                member = (recon == reps[:, None, :]).all(axis=2)   # line <= node
                self.strong_quasi[ids[sl]] = ~(member & bad_quasi[:, None]).any(axis=0)
                self.strong_ideal[ids[sl]] = ~(member & bad_ideal[:, None]).any(axis=0)

    def _atom_scalars(self):
        # action of each atom's representative on the derived subalgebra
        self.atom_scalar: dict[int, int | None] = {}
        for i in self.line_ids:
            rep = self.lat.nodes[int(i)].rows[0]
            self.atom_scalar[int(i)] = self.algebra.acts_as_scalar(rep, self.derived)

    def _core_free_sm(self):
        self.core_free: dict[int, bool] = {}
        for u in np.nonzero(self.sm)[0]:
            self.core_free[int(u)] = (
                self.algebra.core(self.lat.nodes[int(u)]).dim == 0
            )

    def _local_lemma(self, t):
        """For every proper sm node U and every x outside it: U is
        maximal in <U, x>, and modular inside the lattice of <U, x>."""
        lat = self.lat
        jt, mx = t.join, t.maximal
        lines = self.line_ids
        self.local: dict[int, dict] = {}
        for u in np.nonzero(self.sm)[0]:
            u = int(u)
            if u == lat.top_id:
                continue
            jv = jt[u, lines]
            vs = np.unique(jv[jv != u])  # distinct <U, x> over lines x outside U
            max_ok = bool(mx[u, vs].all()) if vs.size else True
            entry = {"maximal_ok": max_ok, "joins": int(vs.size)}
            if not max_ok:
                entry["bad_join"] = P.node_rows(lat, int(vs[np.argmin(mx[u, vs])]))
            if self.modular[u]:
                entry["modular_ok"] = True
                entry["modular_mode"] = "global"
            else:
                mode_ok = True
                for v in vs:
                    ids = np.nonzero(t.contain[:, int(v)])[0]
                    rep = P.is_modular(lat, u, within=ids)
                    if not rep.verdict:
                        mode_ok = False
                        entry["bad_join"] = P.node_rows(lat, int(v))
                        entry["witness"] = rep.witness
                        break
                entry["modular_ok"] = mode_ok
                entry["modular_mode"] = "induced"
            self.local[u] = entry

    def _modular_star_checks(self):
        """Prop-style check: a proper quasi-ideal that is modular* must
        be a strong quasi-ideal, so modular* only needs computing for
        quasi-ideals that fail strong quasi-ideality."""
        self.star: dict[int, bool] = {}
        for u in np.nonzero(self.quasi & ~self.strong_quasi)[0]:
            u = int(u)
            if u == self.lat.top_id:
                continue
            self.star[u] = P.is_modular_star(self.lat, u).verdict

    # -- heavy path (no dense tables; currently only psl3 needs it) ---------

    def _heavy_analysis(self):
        lat = self.lat
        self.quasi, self.quasi_wit = P.quasi_ideal_inventory(lat)
        self.ideal = P.ideal_inventory(lat)
        self.mu = P.is_mu_algebra(lat)
        self._line_flags()
        self._strong_flags()
        self.maximal_ids = lat.maximal_subalgebras()
        # semi-modularity is only evaluated where suites need it
        self.sm_checks: dict[int, bool] = {}
        for u in np.nonzero(self.quasi)[0]:
            u = int(u)
            if u in (lat.zero_id, lat.top_id):
                continue
            self.sm_checks[u] = P.is_semi_modular_lazy(lat, u).verdict
        gen = P.has_one_and_half_generation(lat)
        self.gen15 = gen.verdict
        self.gen15_wit = gen.witness


class HarnessContext:
    """Shared, memoised universe of analysed algebras for one config."""

    def __init__(self, config: HarnessConfig):
        self.config = config
        self._analyses: dict[str, AlgebraAnalysis] = {}
        self._universes: dict[str, list[LieAlgebra]] = {}

    def analysis(self, algebra: LieAlgebra) -> AlgebraAnalysis:
        got = self._analyses.get(algebra.name)
        if got is None:
            got = AlgebraAnalysis(algebra, self.config)
            self._analyses[algebra.name] = got
        return got

    def analyses(self, algebras) -> list[AlgebraAnalysis]:
        # analysis is Python-heavy, so the per-algebra map stays serial;
        # worker threads act inside the numpy lattice sweeps instead
        return [self.analysis(a) for a in algebras]

    # -- universes -----------------------------------------------------------

    def _memo(self, key, build):
        if key not in self._universes:
            self._universes[key] = build()
        return self._universes[key]

    def catalog_solvables(self) -> list[LieAlgebra]:
        def build():
            out = []
            for p in (2, 3, 5, 7):
                for d in (1, 2, 3):
                    out.append(catalog_build("abelian", dim=d, p=p))
                out.append(catalog_build("nonabelian2", p=p))
                out.append(catalog_build("heisenberg", p=p))
                out.append(catalog_build("almost_abelian", dim=3, p=p))
                out.append(catalog_build("upper_triangular", n=2, p=p))
            for p in (2, 3):
                out.append(catalog_build("abelian", dim=4, p=p))
                out.append(catalog_build("strictly_upper", n=4, p=p))
            for p in (2, 3, 5):
                out.append(catalog_build("almost_abelian", dim=4, p=p))
            out.append(catalog_build("upper_triangular", n=3, p=2))
            return out

        return self._memo("catalog_solvables", build)

    def enumerated(self) -> list[LieAlgebra]:
        def build():
            out = []
            for d, p in self.config.enum_cells:
                out.extend(enumerate_structures(d, p))
            return out

        return self._memo("enumerated", build)

    def randoms(self) -> list[LieAlgebra]:
        def build():
            out = []
            for p in self.config.random_primes:
                for d in self.config.random_dims:
                    for i in range(self.config.random_per_cell):
                        seed = int(
                            np.random.SeedSequence(
                                [self.config.seed, d, p, i]
                            ).generate_state(1)[0]
                        )
                        alg = random_solvable(d, p, seed)
                        alg.name = f"random({d},{p},{i})"
                        out.append(alg)
            return out

        return self._memo("randoms", build)

    def solvable_universe(self) -> list[LieAlgebra]:
        def build():
            out = list(self.catalog_solvables())
            out.extend(a for a in self.enumerated() if a.is_solvable())
            out.extend(self.randoms())
            return out

        return self._memo("solvable_universe", build)

    def nonsolvable_fixtures(self) -> list[LieAlgebra]:
        def build():
            return [
                catalog_build("K"),
                catalog_build("sl2", p=3),
                catalog_build("sl2", p=5),
                catalog_build("sl2", p=7),
                catalog_build("witt", p=5),
            ]

        return self._memo("nonsolvable_fixtures", build)

    def full_universe(self) -> list[LieAlgebra]:
        def build():
            out = list(self.catalog_solvables())
            out.extend(self.enumerated())
            out.extend(self.randoms())
            out.extend(self.nonsolvable_fixtures())
            return out

        return self._memo("full_universe", build)

    def p57_universe(self) -> list[LieAlgebra]:
        def build():
            return [a for a in self.full_universe() if a.p in (5, 7)]

        return self._memo("p57", build)

    def psl3(self) -> AlgebraAnalysis:
        return self.analysis(psl3_char3())


_CONTEXTS: dict[HarnessConfig, HarnessContext] = {}


def context(config: HarnessConfig | None = None) -> HarnessContext:
    config = config or DEFAULT_CONFIG
    ctx = _CONTEXTS.get(config)
    if ctx is None:
        ctx = HarnessContext(config)
        _CONTEXTS[config] = ctx
    return ctx


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    universe: dict
    assertions: list[dict]
    timings: dict
    truncated: str | None = None

    @property
    def passed(self) -> bool:
        return all(a["status"] != "fail" for a in self.assertions)

    def to_json(self, include_timings: bool = True) -> dict:
        doc = {
            "suite": self.suite,
            "universe": self.universe,
            "assertions": self.assertions,
            "truncated": self.truncated,
        }
        if include_timings:
            doc["timings"] = self.timings
        return doc


def report_to_json(report: SuiteReport) -> dict:
    return report.to_json(include_timings=True)


def report_digest(report: SuiteReport) -> str:
    payload = json.dumps(
        report.to_json(include_timings=False), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _universe_doc(config, algebras) -> dict:
    return {
        "description": f"{len(algebras)} algebras",
        "algebras": sorted(a.name for a in algebras),
        "seed": config.seed,
        "config": config.to_json(),
    }


def _claim(claims, name, ok, details=None, status=None):
    claims.append(
        {
            "claim": name,
            "status": status or ("pass" if ok else "fail"),
            "details": details or {},
        }
    )


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _suite_solvable_equivalence(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.solvable_universe()
    analyses = ctx.analyses(algebras)
    pairs = {
        "modular-iff-sm": lambda an: an.modular != an.sm,
        "sm-iff-quasi-ideal": lambda an: an.sm != an.quasi,
        "modular-iff-quasi-ideal": lambda an: an.modular != an.quasi,
    }
    claims = []
    for name, mismatch in pairs.items():
        bad = []
        nodes = 0
        for an in analyses:
            nodes += an.n_nodes
            m = mismatch(an)
            if m.any():
                i = int(m.argmax())
                bad.append({"algebra": an.name, "node": P.node_rows(an.lat, i)})
        _claim(
            claims,
            name,
            not bad,
            {"algebras": len(analyses), "nodes_checked": nodes, "violations": sorted(bad, key=str)},
        )
    return SuiteReport(
        "solvable-equivalence",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_solvable_corefree(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.solvable_universe()
    analyses = ctx.analyses(algebras)
    bad = []
    checked = 0
    for an in analyses:
        for u in np.nonzero(an.sm)[0]:
            u = int(u)
            d = int(an.lat.dims[u])
            if u == an.lat.top_id or d == 0 or not an.core_free.get(u, False):
                continue
            checked += 1
            if d != 1 or not an.flags.is_almost_abelian:
                bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
    claims = []
    _claim(
        claims,
        "corefree-sm-is-atom-of-almost-abelian",
        not bad,
        {"corefree_sm_nodes": checked, "violations": sorted(bad, key=str)},
    )
    return SuiteReport(
        "solvable-corefree",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_psl3(config) -> SuiteReport:
    ctx = context(config)
    start = time.monotonic()
    deadline = start + config.time_budget_secs
    timings = {}
    claims = []
    algebra = psl3_char3()

    t0 = time.monotonic()
    an = ctx.psl3()
    lat = an.lat
    timings["analysis_secs"] = time.monotonic() - t0
    timings["enumeration_secs"] = an.build_secs
    timings["candidates"] = count_subspaces(7, 3)
    timings["throughput_per_sec"] = (
        timings["candidates"] / an.build_secs if an.build_secs else None
    )
    report = lambda: SuiteReport(
        "psl3", _universe_doc(config, [algebra]), claims, timings
    )

    _claim(
        claims,
        "node-count",
        True,
        {"nodes": an.n_nodes, "by_dim": {str(k): v for k, v in sorted(lat.counts_by_dim().items())}},
        status="reported",
    )

    # the nine opposite-sign triples span{e0, ei, ej}
    t0 = time.monotonic()
    eye = np.eye(7, dtype=np.int64)
    slot = lambda s: s + 3
    b_ids = {}
    missing = []
    for i in range(1, 4):
        for j in range(-3, 0):
            s = Subspace.from_vectors([eye[slot(0)], eye[slot(i)], eye[slot(j)]], 7, 3)
            try:
                b_ids[(i, j)] = lat.node_id(s)
            except UsageError:
                missing.append([i, j])
    _claim(claims, "opposite-sign-triples-are-subalgebras", not missing,
           {"count": len(b_ids), "missing": missing})

    two_dim_not_maximal = []
    non_2dim_maximal = []
    for (i, j), bid in sorted(b_ids.items()):
        span2 = Subspace.from_vectors([eye[slot(0)], eye[slot(i)]], 7, 3)
        if not lat.is_maximal_in(lat.node_id(span2), bid):
            two_dim_not_maximal.append([i, j])
        for m in lat.induced_ids(bid):
            m = int(m)
            if m == bid:
                continue
            if lat.is_maximal_in(m, bid) and int(lat.dims[m]) != 2:
                non_2dim_maximal.append(
                    {"pair": [i, j], "node": P.node_rows(lat, m), "dim": int(lat.dims[m])}
                )
    _claim(claims, "two-dim-span-maximal-in-triple", not two_dim_not_maximal,
           {"failures": two_dim_not_maximal})
    # over GF(3) this one is genuinely false: the triple algebras contain
    # maximal one-dimensional subalgebras spanned by elements whose adjoint
    # action has an irreducible quadratic factor (non-split tori)
    _claim(claims, "triple-maximal-subalgebras-all-two-dim", not non_2dim_maximal,
           {"counterexamples": sorted(non_2dim_maximal, key=str)[:4],
            "count": len(non_2dim_maximal)})
    timings["structure_secs"] = time.monotonic() - t0
    if time.monotonic() > deadline:
        rep = report()
        rep.truncated = "time budget exceeded after structure checks"
        return rep

    t0 = time.monotonic()
    maxima = an.maximal_ids
    timings["maximal_secs"] = time.monotonic() - t0
    _claim(claims, "maximal-count", True,
           {"count": len(maxima), "dims": sorted({int(lat.dims[m]) for m in maxima})},
           status="reported")
    if time.monotonic() > deadline:
        rep = report()
        rep.truncated = "time budget exceeded after maximal enumeration"
        return rep

    # no maximal subalgebra is semi-modular: every maximal M is um for free
    # (all joins with outside nodes hit the top, which covers M), so refute
    # lower modularity: some B not inside M has M meet B non-maximal in B
    t0 = time.monotonic()
    unrefuted = []
    for M in maxima:
        bm = lat.nodes[M].bits()
        witness = None
        for B in range(len(lat.nodes)):
            bb = lat.nodes[B].bits()
            if bb & bm == bb:
                continue
            mid = lat.meet(M, B)
            if mid != B and not lat.is_maximal_in(mid, B):
                witness = B
                break
        if witness is None:
            unrefuted.append(P.node_rows(lat, M))
    timings["refutation_secs"] = time.monotonic() - t0
    _claim(claims, "no-maximal-sm", not unrefuted,
           {"maximal_checked": len(maxima), "sm_maximal": unrefuted})
    timings["total_secs"] = time.monotonic() - start
    return report()


def _suite_k_example(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebra = simple3_char2()
    an = ctx.analysis(algebra)
    lat = an.lat
    claims = []

    # independent oracle: closure under the bracket on all vector pairs
    from .linalg import enumerate_subspaces

    expected = []
    for s in enumerate_subspaces(3, 2):
        vecs = list(s.vectors())
        if all(s.contains(algebra.bracket(x, y)) for x in vecs for y in vecs):
            expected.append(s.key)
    _claim(
        claims,
        "lattice-is-the-12-predicted-nodes",
        [s.key for s in lat.nodes] == expected and len(expected) == 12,
        {"nodes": an.n_nodes, "by_dim": {str(k): v for k, v in sorted(lat.counts_by_dim().items())}},
    )

    fc = lat.node_id(Subspace.from_vectors([(0, 0, 1)], 3, 2))
    quasi_atoms = [int(i) for i in an.line_ids if an.quasi_lines[int(i)]]
    _claim(claims, "unique-one-dim-quasi-ideal-is-Fc", quasi_atoms == [fc],
           {"quasi_atoms": [P.node_rows(lat, i) for i in quasi_atoms]})
    _claim(claims, "simple", an.flags.is_simple, {})
    _claim(claims, "Fc-is-core-free", algebra.core(lat.nodes[fc]).dim == 0, {})
    _claim(claims, "frattini-is-Fc", an.frattini_id == fc,
           {"frattini": P.node_rows(lat, an.frattini_id)})

    # the Frattini property in person: two vectors that are independent
    # modulo Fc (so they generate together with the non-generator line)
    # already generate the whole algebra on their own
    bad_pairs = []
    pair_count = 0
    vecs = [v for v in algebra.full_space().vectors() if v.any()]
    for x in vecs:
        for y in vecs:
            if Subspace.from_vectors([x, y, (0, 0, 1)], 3, 2).dim != 3:
                continue
            pair_count += 1
            if algebra.generated_subalgebra([x, y]).dim != 3:
                bad_pairs.append([x.tolist(), y.tolist()])
    _claim(claims, "pairs-independent-mod-Fc-generate", not bad_pairs,
           {"pairs": pair_count, "failures": bad_pairs})

    # characteristic two leaves the sm verdict for Fc outside the asserted
    # theory: computed and reported, never asserted
    _claim(claims, "sm-verdict-of-Fc", True,
           {"semi_modular": bool(an.sm[fc]), "modular": bool(an.modular[fc])},
           status="reported")
    return SuiteReport(
        "K-example",
        _universe_doc(config, [algebra]),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_sm_implies_local(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.solvable_universe() + ctx.nonsolvable_fixtures()
    analyses = ctx.analyses(algebras)
    if config.include_psl3:
        analyses = analyses + [ctx.psl3()]
        algebras = algebras + [analyses[-1].algebra]
    bad_max = []
    bad_mod = []
    quasi_not_sm = []
    checked = 0
    for an in analyses:
        # quasi-ideals are always semi-modular, solvable or not
        if an.heavy:
            for u, sm_ok in an.sm_checks.items():
                if not sm_ok:
                    quasi_not_sm.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
            continue
        mism = an.quasi & ~an.sm
        if mism.any():
            quasi_not_sm.append(
                {"algebra": an.name, "node": P.node_rows(an.lat, int(mism.argmax()))}
            )
        for u, entry in an.local.items():
            checked += 1
            if not entry["maximal_ok"]:
                bad_max.append({"algebra": an.name, "node": P.node_rows(an.lat, u),
                                "join": entry.get("bad_join")})
            if not entry["modular_ok"]:
                bad_mod.append({"algebra": an.name, "node": P.node_rows(an.lat, u),
                                "join": entry.get("bad_join"),
                                "witness": entry.get("witness")})
    claims = []
    _claim(claims, "proper-sm-node-maximal-in-every-join-with-a-line", not bad_max,
           {"sm_nodes_checked": checked, "violations": sorted(bad_max, key=str)})
    _claim(claims, "proper-sm-node-modular-in-every-such-join", not bad_mod,
           {"violations": sorted(bad_mod, key=str)})
    _claim(claims, "quasi-ideals-are-semi-modular", not quasi_not_sm,
           {"violations": sorted(quasi_not_sm, key=str)})
    return SuiteReport(
        "sm-implies-local",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _is_K_case(an, u) -> bool:
    """The documented recogniser for the exceptional branch: GF(2),
    three-dimensional simple, and the node is the one-dim Frattini
    subalgebra (necessarily the unique one-dimensional quasi-ideal)."""
    if an.algebra.p != 2 or an.algebra.dim != 3 or not an.flags.is_simple:
        return False
    fr = getattr(an, "frattini_id", None)
    return fr is not None and u == fr and int(an.lat.dims[u]) == 1


def _suite_strong_quasi_ideal(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.full_universe()
    analyses = ctx.analyses(algebras)
    if config.include_psl3:
        analyses = analyses + [ctx.psl3()]
        algebras = algebras + [analyses[-1].algebra]
    tri_bad = []
    star_bad = []
    strong_count = 0
    k_branch_hits = 0
    for an in analyses:
        for u in np.nonzero(an.strong_quasi)[0]:
            u = int(u)
            if an.lat.dims[u] == 0 or u == an.lat.top_id:
                continue
            strong_count += 1
            if an.strong_ideal[u] or an.flags.is_almost_abelian:
                continue
            if _is_K_case(an, u):
                k_branch_hits += 1
                continue
            tri_bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
        # a proper quasi-ideal that is modular* must be a strong quasi-ideal
        for u, star in getattr(an, "star", {}).items():
            if star and not an.strong_quasi[u]:
                star_bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
    claims = []
    _claim(
        claims,
        "strong-quasi-ideal-trichotomy",
        not tri_bad,
        {
            "strong_quasi_nodes": strong_count,
            "exceptional_branch_hits": k_branch_hits,
            "violations": sorted(tri_bad, key=str),
        },
    )
    _claim(claims, "modular-star-quasi-ideal-is-strong", not star_bad,
           {"violations": sorted(star_bad, key=str)})
    return SuiteReport(
        "strong-quasi-ideal",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_sm_atoms(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.full_universe()
    analyses = ctx.analyses(algebras)
    fwd_bad = []
    back_bad = []
    char23_exceptions = []
    atoms_checked = 0
    mu_hits = [an.name for an in analyses if an.mu]
    for an in analyses:
        asserted = an.algebra.p in (5, 7)
        aa = an.flags.is_almost_abelian
        for i in an.line_ids:
            u = int(i)
            if u == an.lat.top_id:
                continue
            scalar = an.atom_scalar[u]
            case_i = bool(an.ideal[u])
            case_ii = aa and scalar not in (None, 0)
            if asserted:
                atoms_checked += 1
                if an.sm[u] and not (case_i or case_ii):
                    fwd_bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
                if (case_i or case_ii) and not an.sm[u]:
                    back_bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
            elif an.sm[u] and not (case_i or case_ii):
                char23_exceptions.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
    claims = []
    _claim(claims, "sm-atom-is-ideal-or-almost-abelian-scalar", not fwd_bad,
           {"atoms_checked": atoms_checked, "violations": sorted(fwd_bad, key=str)})
    _claim(claims, "ideal-or-scalar-atom-is-sm", not back_bad,
           {"violations": sorted(back_bad, key=str)})
    _claim(claims, "no-mu-algebras", not mu_hits, {"mu_algebras": mu_hits})
    _claim(claims, "char-2-3-sm-atoms-outside-both-cases", True,
           {"count": len(char23_exceptions),
            "examples": sorted(char23_exceptions, key=str)[:5]},
           status="reported")
    return SuiteReport(
        "sm-atoms",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_two_dim(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.p57_universe()
    analyses = ctx.analyses(algebras)
    bad = []
    hits = 0
    for an in analyses:
        for u in np.nonzero(an.sm)[0]:
            u = int(u)
            if int(an.lat.dims[u]) != 2 or u == an.lat.top_id:
                continue
            if not an.core_free.get(u, False):
                continue
            hits += 1
            if not an.flags.is_three_dim_split_simple:
                bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u)})
    claims = []
    _claim(claims, "corefree-two-dim-sm-forces-split-simple-ambient", not bad,
           {"instances": hits, "violations": sorted(bad, key=str)})

    # positive control: a Borel of sl2 over GF(5) is sm and core-free
    sl2_5 = next(a for a in algebras if a.name == "sl2(5)")
    an5 = ctx.analysis(sl2_5)
    borel = an5.lat.node_id(Subspace.from_vectors([(1, 0, 0), (0, 1, 0)], 3, 5))
    borel_ok = bool(an5.sm[borel]) and sl2_5.core(an5.lat.nodes[borel]).dim == 0
    _claim(claims, "sl2-borel-is-sm-and-corefree", borel_ok,
           {"sm": bool(an5.sm[borel]), "modular": bool(an5.modular[borel])})
    return SuiteReport(
        "two-dim",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_gen15(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebras = ctx.full_universe()
    analyses = ctx.analyses(algebras)
    if config.include_psl3:
        analyses = analyses + [ctx.psl3()]
        algebras = algebras + [analyses[-1].algebra]
    bad = []
    holders = []
    for an in analyses:
        if not an.gen15:
            continue
        holders.append(an.name)
        if an.heavy:
            continue  # no dense sm inventory; holders list is still reported
        for u in np.nonzero(an.sm)[0]:
            u = int(u)
            if u == an.lat.top_id or an.lat.dims[u] == 0:
                continue
            if not (an.modular[u] and an.maximal_top[u]):
                bad.append({"algebra": an.name, "node": P.node_rows(an.lat, u),
                            "modular": bool(an.modular[u]),
                            "maximal": bool(an.maximal_top[u])})
    claims = []
    _claim(claims, "sm-nodes-of-generating-algebras-are-modular-maximal", not bad,
           {"holders": len(holders), "violations": sorted(bad, key=str)})
    fixture_verdicts = {
        an.name: bool(an.gen15)
        for an in analyses
        if an.name in ("K", "sl2(3)", "sl2(5)", "sl2(7)", "witt(5)", "psl3_char3")
    }
    _claim(claims, "one-and-half-generation-verdicts", True,
           {"fixtures": fixture_verdicts}, status="reported")
    return SuiteReport(
        "gen15",
        _universe_doc(config, algebras),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


def _suite_witt(config) -> SuiteReport:
    ctx = context(config)
    t0 = time.monotonic()
    algebra = catalog_build("witt", p=5)
    an = ctx.analysis(algebra)
    lat = an.lat
    l0 = Subspace.from_vectors(np.eye(5, dtype=np.int64)[1:], 5, 5)
    claims = []
    try:
        l0_id = lat.node_id(l0)
    except UsageError:
        l0_id = None
    _claim(claims, "nonnegative-part-is-a-node", l0_id is not None, {})
    if l0_id is not None:
        _claim(claims, "nonnegative-part-codim-one",
               int(lat.dims[l0_id]) == algebra.dim - 1, {})
        _claim(claims, "nonnegative-part-solvable",
               algebra.is_solvable(lat.nodes[l0_id]), {})
        _claim(claims, "nonnegative-part-supersolvable",
               algebra.restricted_to(lat.nodes[l0_id]).is_supersolvable(), {})
    modular_nodes = [P.node_rows(lat, int(i)) for i in np.nonzero(an.modular)[0]]
    sm_nodes = [P.node_rows(lat, int(i)) for i in np.nonzero(an.sm)[0]]
    proper_sm = [int(i) for i in np.nonzero(an.sm)[0] if i not in (lat.zero_id, lat.top_id)]
    _claim(claims, "modular-and-sm-inventory", True,
           {
               "modular_count": len(modular_nodes),
               "sm_count": len(sm_nodes),
               "proper_sm_nodes": [P.node_rows(lat, i) for i in proper_sm],
               "nonnegative-part-is-unique-proper-sm":
                   l0_id is not None and proper_sm == [l0_id],
           },
           status="reported")
    return SuiteReport(
        "witt",
        _universe_doc(config, [algebra]),
        claims,
        {"total_secs": time.monotonic() - t0},
    )


SUITES = {
    "solvable-equivalence": (
        _suite_solvable_equivalence,
        "modular, semi-modular and quasi-ideal coincide on solvable algebras",
    ),
    "solvable-corefree": (
        _suite_solvable_corefree,
        "core-free sm subalgebras of solvable algebras are atoms of almost abelian algebras",
    ),
    "psl3": (
        _suite_psl3,
        "psl3 over GF(3): triple subalgebras and absence of maximal sm subalgebras",
    ),
    "K-example": (
        _suite_k_example,
        "the three-dimensional simple algebra over GF(2) and its distinguished line",
    ),
    "sm-implies-local": (
        _suite_sm_implies_local,
        "proper sm subalgebras are maximal and modular in every join with an outside line",
    ),
    "strong-quasi-ideal": (
        _suite_strong_quasi_ideal,
        "strong quasi-ideal trichotomy and the modular* strengthening",
    ),
    "sm-atoms": (
        _suite_sm_atoms,
        "one-dimensional sm subalgebras over GF(5) and GF(7)",
    ),
    "two-dim": (
        _suite_two_dim,
        "two-dimensional core-free sm subalgebras force a split simple ambient",
    ),
    "gen15": (
        _suite_gen15,
        "one-and-a-half generation makes every sm subalgebra modular and maximal",
    ),
    "witt": (
        _suite_witt,
        "the Witt algebra over GF(5): its non-negative part and sm inventory",
    ),
}


def run_suite(name: str, config: HarnessConfig | None = None) -> SuiteReport:
    config = config or DEFAULT_CONFIG
    entry = SUITES.get(name)
    if entry is None:
        raise UsageError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    return entry[0](config)


def suite_names() -> list[str]:
    return sorted(SUITES)
