"""Decision procedures for subalgebra properties of a lattice node:
modular, upper/lower/semi-modular, quasi-ideal (with an independent
brute-force oracle), strong ideal, strong quasi-ideal, modular*,
mu-algebra, and one-and-a-half generation.

Quantifiers in the modularity laws range over lattice nodes
(subalgebras); the quasi-ideal condition is the only subspace-
quantified notion, and it reduces to one-dimensional subspaces:
[Q, V] = sum over v of [Q, Fv], and each [Q, Fv] <= Q + Fv <= Q + V.
The brute-force oracle checks the literal all-subspaces definition and
exists solely to validate that reduction.

Whole-lattice scans use the dense tables plus a pentagon argument: a
node u satisfies the first modular law iff no pair b < c has equal
joins and equal meets with u; the second law fails exactly when such a
pentagon (side b, chain m < M) exists with u <= m and join(b, u) =
join(b, m).  Witnesses from these scans are deterministic and always
re-verify against the definitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import SubalgebraLattice
from .lie import LieAlgebra
from .linalg import ResourceError, Subspace, UsageError, enumerate_subspaces

DIRECT_SCAN_LIMIT = 4096


@dataclass
class PredicateReport:
    algebra: str
    subalgebra: list[list[int]]
    predicate: str
    verdict: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "subalgebra": self.subalgebra,
            "predicate": self.predicate,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def _report(lat, u, predicate, verdict, witness=None) -> PredicateReport:
    return PredicateReport(
        algebra=lat.algebra.name,
        subalgebra=lat.nodes[u].to_digit_rows(),
        predicate=predicate,
        verdict=verdict,
        witness=witness,
    )


def node_rows(lat, i) -> list[list[int]]:
    return lat.nodes[i].to_digit_rows()


# ---------------------------------------------------------------------------
# Modular
# ---------------------------------------------------------------------------

def is_modular(lat: SubalgebraLattice, u, within=None) -> PredicateReport:
    """Both displayed modularity laws, quantified over lattice nodes.

    `within` restricts all quantifiers to the given node ids (the
    induced lattice of a subalgebra); joins, meets and covers inside an
    induced lattice agree with the global ones.
    """
    iu = lat.node_id(u)
    t = lat.tables(limit=DIRECT_SCAN_LIMIT)
    ids = np.arange(len(lat.nodes)) if within is None else np.asarray(within, dtype=np.int64)
    jt, mt, contain = t.join, t.meet, t.contain
    ju = jt[iu, ids]
    sub = contain[np.ix_(ids, ids)]
    jcol_u = jt[:, iu]
    witness = None
    for c_start in range(0, len(ids), 512):
        c_ids = ids[c_start : c_start + 512]
        lhs = mt[np.ix_(ju, c_ids)]                       # meet(<u,B>, C)
        rhs1 = jt[np.ix_(ids, mt[iu, c_ids])]             # <B, u meet C>
        bad1 = sub[:, c_start : c_start + 512] & (lhs != rhs1)
        rhs2 = jcol_u[mt[np.ix_(ids, c_ids)]]             # <B meet C, u>
        bad2 = contain[iu, c_ids][None, :] & (lhs != rhs2)
        for law, bad in ((1, bad1), (2, bad2)):
            if witness is None and bad.any():
                b_i, c_i = np.argwhere(bad)[0]
                witness = {
                    "law": law,
                    "b": node_rows(lat, int(ids[b_i])),
                    "c": node_rows(lat, int(c_ids[c_i])),
                }
        if witness is not None:
            break
    return _report(lat, iu, "modular", witness is None, witness)


def modular_inventory(lat: SubalgebraLattice) -> tuple[np.ndarray, dict[int, dict]]:
    """Modular verdict for every node at once via a pentagon scan.

    Any pentagon (side B; chain m < M) contains one whose chain is a
    cover pair (joins and meets with B are sandwiched between equal
    values), so scanning the Hasse edges is complete: the first law
    fails for exactly the pentagon sides, the second for the nodes u
    below a pentagon bottom m with <B, u> = <B, m>.
    """
    t = lat.tables()
    n = len(lat.nodes)
    jt, mt, contain = t.join, t.meet, t.contain
    bad = np.zeros(n, dtype=bool)
    witnesses: dict[int, dict] = {}
    edges = np.argwhere(t.maximal)  # (m, M) cover pairs in lex order
    pentagon_edges = []
    for start in range(0, edges.shape[0], 2048):
        chunk = edges[start : start + 2048]
        ms, tops = chunk[:, 0], chunk[:, 1]
        sides = (jt[:, ms] == jt[:, tops]) & (mt[:, ms] == mt[:, tops])  # (n, C)
        col_any = sides.any(axis=0)
        for k in np.nonzero(col_any)[0]:
            pentagon_edges.append((int(ms[k]), int(tops[k])))
        fresh_rows = sides.any(axis=1) & ~bad
        for side in np.nonzero(fresh_rows)[0]:
            k = int(sides[side].argmax())
            # law 1 witness for the side: B = bottom, C = top
            witnesses[int(side)] = {
                "law": 1,
                "b": node_rows(lat, int(ms[k])),
                "c": node_rows(lat, int(tops[k])),
            }
        bad |= sides.any(axis=1)
    # second law: u fails iff some pentagon (B; m, M) has u <= m and
    # <B, u> = <B, m>
    for m_id, top_id in pentagon_edges:
        down = contain[:, m_id] & ~bad
        if not down.any():
            continue
        sides = (jt[:, m_id] == jt[:, top_id]) & (mt[:, m_id] == mt[:, top_id])
        down_ids = np.nonzero(down)[0]
        side_ids = np.nonzero(sides)[0]
        eq = jt[np.ix_(side_ids, down_ids)] == jt[side_ids, m_id][:, None]
        hit = eq.any(axis=0)
        for k in np.nonzero(hit)[0]:
            u = int(down_ids[k])
            bad[u] = True
            side = int(side_ids[eq[:, k].argmax()])
            witnesses[u] = {
                "law": 2,
                "b": node_rows(lat, side),
                "c": node_rows(lat, int(top_id)),
            }
    return ~bad, witnesses


# ---------------------------------------------------------------------------
# Upper / lower / semi-modular
# ---------------------------------------------------------------------------

def _sm_rows(lat, iu, ids):
    t = lat.tables()
    jt, mt, mx = t.join, t.meet, t.maximal
    meets = mt[iu, ids]
    joins = jt[iu, ids]
    meet_max_in_b = mx[meets, ids]       # u meet B maximal in B
    u_max_in_join = mx[iu, joins]        # u maximal in <u, B>
    um_bad = meet_max_in_b & ~u_max_in_join
    lm_bad = u_max_in_join & ~meet_max_in_b
    return um_bad, lm_bad


def is_upper_modular(lat, u, within=None) -> PredicateReport:
    iu = lat.node_id(u)
    ids = np.arange(len(lat.nodes)) if within is None else np.asarray(within, dtype=np.int64)
    um_bad, _ = _sm_rows(lat, iu, ids)
    witness = None
    if um_bad.any():
        witness = {"b": node_rows(lat, int(ids[um_bad.argmax()]))}
    return _report(lat, iu, "upper_modular", witness is None, witness)


def is_lower_modular(lat, u, within=None) -> PredicateReport:
    iu = lat.node_id(u)
    ids = np.arange(len(lat.nodes)) if within is None else np.asarray(within, dtype=np.int64)
    _, lm_bad = _sm_rows(lat, iu, ids)
    witness = None
    if lm_bad.any():
        witness = {"b": node_rows(lat, int(ids[lm_bad.argmax()]))}
    return _report(lat, iu, "lower_modular", witness is None, witness)


def is_semi_modular(lat, u, within=None) -> PredicateReport:
    iu = lat.node_id(u)
    ids = np.arange(len(lat.nodes)) if within is None else np.asarray(within, dtype=np.int64)
    um_bad, lm_bad = _sm_rows(lat, iu, ids)
    witness = None
    if um_bad.any() and (not lm_bad.any() or um_bad.argmax() <= lm_bad.argmax()):
        witness = {"side": "um", "b": node_rows(lat, int(ids[um_bad.argmax()]))}
    elif lm_bad.any():
        witness = {"side": "lm", "b": node_rows(lat, int(ids[lm_bad.argmax()]))}
    return _report(lat, iu, "semi_modular", witness is None, witness)


def sm_inventory(lat) -> tuple[np.ndarray, np.ndarray, dict[int, dict]]:
    """(um verdicts, lm verdicts, witnesses) for every node."""
    n = len(lat.nodes)
    ids = np.arange(n)
    um = np.ones(n, dtype=bool)
    lm = np.ones(n, dtype=bool)
    witnesses: dict[int, dict] = {}
    for u in range(n):
        um_bad, lm_bad = _sm_rows(lat, u, ids)
        if um_bad.any():
            um[u] = False
            witnesses.setdefault(u, {"side": "um", "b": node_rows(lat, int(um_bad.argmax()))})
        if lm_bad.any():
            lm[u] = False
            witnesses.setdefault(u, {"side": "lm", "b": node_rows(lat, int(lm_bad.argmax()))})
    return um, lm, witnesses


def is_semi_modular_lazy(lat, u) -> PredicateReport:
    """Semi-modularity without dense tables (large lattices); O(nodes)
    meets plus joins where the covering premises fire."""
    iu = lat.node_id(u)
    for b in range(len(lat.nodes)):
        mid = lat.meet(iu, b)
        prem_um = mid != b and lat.is_maximal_in(mid, b)
        jid = lat.join(iu, b)
        concl_um = jid != iu and lat.is_maximal_in(iu, jid)
        if prem_um and not concl_um:
            return _report(lat, iu, "semi_modular", False, {"side": "um", "b": node_rows(lat, b)})
        if concl_um and not prem_um:
            return _report(lat, iu, "semi_modular", False, {"side": "lm", "b": node_rows(lat, b)})
    return _report(lat, iu, "semi_modular", True)


# ---------------------------------------------------------------------------
# Quasi-ideals
# ---------------------------------------------------------------------------

def line_matrix(algebra: LieAlgebra) -> np.ndarray:
    """Canonical line representatives, in the order line nodes appear."""
    return np.stack(list(algebra.full_space().line_reps())).astype(np.int64)


_line_matrix = line_matrix


def _line_bracket_tensor(algebra: LieAlgebra, lines: np.ndarray) -> np.ndarray:
    """t2[x, i, l] = [e_i, x]_l, shared across per-node quasi-ideal scans."""
    c = algebra.tensor.astype(np.int64)
    return np.einsum("xj,ijl->xil", lines, c) % algebra.p


def _quasi_ideal_check(algebra: LieAlgebra, space: Subspace, lines: np.ndarray,
                       t2: np.ndarray | None = None):
    """Verdict plus first violating line for [U, Fx] <= U + Fx."""
    p, n = algebra.p, algebra.dim
    if space.dim == 0 or space.dim == n:
        return True, None
    rows = space.rows.astype(np.int64)
    if t2 is None:
        t2 = _line_bracket_tensor(algebra, lines)
    br = np.einsum("ri,xil->xrl", rows, t2) % p               # [u_r, x]
    piv = list(space.pivots)
    rho = (br - br[:, :, piv] @ rows) % p                      # residuals mod U
    xi = (lines - lines[:, piv] @ rows) % p                    # x mod U
    ok = np.ones(lines.shape[0], dtype=bool)
    inside = ~xi.any(axis=1)
    ok[inside] = ~rho[inside].reshape(inside.sum(), -1).any(axis=1)
    out = ~inside
    if out.any():
        lead = (xi[out] != 0).argmax(axis=1)
        sel = np.arange(out.sum())
        leadval = xi[out][sel, lead]
        inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)])
        lam = rho[out][sel, :, lead] * inv[leadval][:, None] % p
        recon = lam[:, :, None] * xi[out][:, None, :] % p
        ok[out] = (recon == rho[out]).reshape(out.sum(), -1).all(axis=1)
    if ok.all():
        return True, None
    return False, [int(v) for v in lines[int(ok.argmin())]]


def is_quasi_ideal(lat_or_algebra, u) -> PredicateReport:
    """[Q, Fx] <= Q + Fx for every line Fx (the documented reduction of
    the all-subspaces definition)."""
    if isinstance(lat_or_algebra, SubalgebraLattice):
        lat = lat_or_algebra
        iu = lat.node_id(u)
        space = lat.nodes[iu]
        algebra = lat.algebra
        verdict, bad = _quasi_ideal_check(algebra, space, _line_matrix(algebra))
        return _report(lat, iu, "quasi_ideal", verdict, None if bad is None else {"x": bad})
    algebra = lat_or_algebra
    space = u if isinstance(u, Subspace) else Subspace.from_vectors(list(u), algebra.dim, algebra.p)
    if not algebra.is_subalgebra(space):
        raise UsageError("quasi-ideal check expects a subalgebra")
    verdict, bad = _quasi_ideal_check(algebra, space, _line_matrix(algebra))
    return PredicateReport(
        algebra=algebra.name,
        subalgebra=space.to_digit_rows(),
        predicate="quasi_ideal",
        verdict=verdict,
        witness=None if bad is None else {"x": bad},
    )


def is_quasi_ideal_bruteforce(algebra: LieAlgebra, u) -> bool:
    """The literal definition: [Q, V] <= Q + V for every subspace V.

    Exists as the independent oracle for the one-dimensional reduction;
    guarded to dim <= 4.
    """
    if algebra.dim > 4:
        raise ResourceError("brute-force quasi-ideal check is guarded to dim <= 4")
    space = u if isinstance(u, Subspace) else Subspace.from_vectors(list(u), algebra.dim, algebra.p)
    for v in enumerate_subspaces(algebra.dim, algebra.p):
        prod = algebra.bracket_spaces(space, v)
        if not prod.is_subspace_of(space.sum(v)):
            return False
    return True


def quasi_ideal_inventory(lat) -> tuple[np.ndarray, dict[int, dict]]:
    lines = _line_matrix(lat.algebra)
    t2 = _line_bracket_tensor(lat.algebra, lines)
    n = len(lat.nodes)
    out = np.zeros(n, dtype=bool)
    witnesses: dict[int, dict] = {}
    for i, s in enumerate(lat.nodes):
        verdict, bad = _quasi_ideal_check(lat.algebra, s, lines, t2)
        out[i] = verdict
        if bad is not None:
            witnesses[i] = {"x": bad}
    return out, witnesses


# ---------------------------------------------------------------------------
# Ideal flags, strong ideals, strong quasi-ideals
# ---------------------------------------------------------------------------

def ideal_inventory(lat) -> np.ndarray:
    return np.array([lat.algebra.is_ideal(s) for s in lat.nodes], dtype=bool)


def line_node_ids(lat) -> np.ndarray:
    return np.nonzero(lat.dims == 1)[0]


def ideal_line_flags(lat) -> dict[int, bool]:
    return {int(i): lat.algebra.is_ideal(lat.nodes[i]) for i in line_node_ids(lat)}


def quasi_line_flags(lat) -> dict[int, bool]:
    lines = _line_matrix(lat.algebra)
    t2 = _line_bracket_tensor(lat.algebra, lines)
    out = {}
    for i in line_node_ids(lat):
        verdict, _ = _quasi_ideal_check(lat.algebra, lat.nodes[int(i)], lines, t2)
        out[int(i)] = verdict
    return out


def lines_of_node(lat, iu) -> list[int]:
    s = lat.nodes[iu]
    out = []
    for rep in s.line_reps():
        out.append(lat.index[Subspace.from_vectors([rep], s.n, s.p).key])
    return out


def is_strong_ideal(lat, u, _flags=None) -> PredicateReport:
    iu = lat.node_id(u)
    flags = _flags if _flags is not None else ideal_line_flags(lat)
    for line in lines_of_node(lat, iu):
        if not flags[line]:
            return _report(lat, iu, "strong_ideal", False, {"line": node_rows(lat, line)})
    return _report(lat, iu, "strong_ideal", True)


def is_strong_quasi_ideal(lat, u, _flags=None) -> PredicateReport:
    iu = lat.node_id(u)
    flags = _flags if _flags is not None else quasi_line_flags(lat)
    for line in lines_of_node(lat, iu):
        if not flags[line]:
            return _report(lat, iu, "strong_quasi_ideal", False, {"line": node_rows(lat, line)})
    return _report(lat, iu, "strong_quasi_ideal", True)


# ---------------------------------------------------------------------------
# Modular*
# ---------------------------------------------------------------------------

def is_modular_star(lat, u, within=None) -> PredicateReport:
    """The dualised laws: the first modular law, plus
    <U meet B, C> = <B, C> meet U for all subalgebras C <= U.

    The dual law quantifies C over the down-set of U only, so it is
    checked first; a violating pair is usually found there.
    """
    iu = lat.node_id(u)
    t = lat.tables(limit=DIRECT_SCAN_LIMIT)
    ids = np.arange(len(lat.nodes)) if within is None else np.asarray(within, dtype=np.int64)
    jt, mt, contain = t.join, t.meet, t.contain
    witness = None
    c_down = ids[contain[ids, iu]]                        # C <= U within scope
    if c_down.size:
        lhs2 = jt[np.ix_(mt[iu, ids], c_down)]            # <U meet B, C>
        rhs2 = mt[:, iu][jt[np.ix_(ids, c_down)]]         # <B, C> meet U
        bad2 = lhs2 != rhs2
        if bad2.any():
            b_i, c_i = np.argwhere(bad2)[0]
            witness = {
                "law": 2,
                "b": node_rows(lat, int(ids[b_i])),
                "c": node_rows(lat, int(c_down[c_i])),
            }
    if witness is None:
        ju = jt[iu, ids]
        sub = contain[np.ix_(ids, ids)]
        for c_start in range(0, len(ids), 512):
            c_ids = ids[c_start : c_start + 512]
            lhs1 = mt[np.ix_(ju, c_ids)]
            rhs1 = jt[np.ix_(ids, mt[iu, c_ids])]
            bad1 = sub[:, c_start : c_start + 512] & (lhs1 != rhs1)
            if bad1.any():
                b_i, c_i = np.argwhere(bad1)[0]
                witness = {
                    "law": 1,
                    "b": node_rows(lat, int(ids[b_i])),
                    "c": node_rows(lat, int(c_ids[c_i])),
                }
                break
    return _report(lat, iu, "modular_star", witness is None, witness)


# ---------------------------------------------------------------------------
# Mu-algebras and one-and-a-half generation
# ---------------------------------------------------------------------------

def is_mu_algebra(lat) -> bool:
    """Non-solvable with every proper subalgebra one-dimensional."""
    if lat.algebra.is_solvable():
        return False
    proper = lat.dims[:-1]  # all but the top node
    return bool((proper <= 1).all())


def has_one_and_half_generation(lat) -> PredicateReport:
    """Every nonzero x admits y with <x, y> = L; one representative per
    line suffices since <x, y> only depends on Fx and Fy."""
    top = lat.top_id
    lines = line_node_ids(lat)
    if lat.has_tables():
        jt = lat.tables().join
        for l in lines:
            if not (jt[int(l), lines] == top).any():
                return _report(
                    lat, top, "one_and_half_generation", False,
                    {"x": node_rows(lat, int(l))[0]},
                )
        return _report(lat, top, "one_and_half_generation", True)
    for l in lines:
        found = False
        for m in lines:
            if lat.join(int(l), int(m)) == top:
                found = True
                break
        if not found:
            return _report(
                lat, top, "one_and_half_generation", False,
                {"x": node_rows(lat, int(l))[0]},
            )
    return _report(lat, top, "one_and_half_generation", True)


# ---------------------------------------------------------------------------
# Witness replay
# ---------------------------------------------------------------------------

def replay_witness(lat, report: PredicateReport) -> bool:
    """Re-evaluate a false report's witness against the raw definition;
    True means the violation reproduces."""
    if report.verdict or report.witness is None:
        raise UsageError("only false verdicts carry a replayable witness")
    n, p = lat.algebra.dim, lat.algebra.p
    iu = lat.node_id(Subspace.from_vectors(report.subalgebra, n, p))
    w = report.witness
    if report.predicate in ("modular", "modular_star"):
        ib = lat.node_id(Subspace.from_vectors(w["b"], n, p))
        ic = lat.node_id(Subspace.from_vectors(w["c"], n, p))
        if report.predicate == "modular":
            if w["law"] == 1:
                return lat.meet(lat.join(iu, ib), ic) != lat.join(ib, lat.meet(iu, ic))
            return lat.meet(lat.join(iu, ib), ic) != lat.join(lat.meet(ib, ic), iu)
        if w["law"] == 1:
            return lat.meet(lat.join(iu, ib), ic) != lat.join(ib, lat.meet(iu, ic))
        return lat.join(lat.meet(iu, ib), ic) != lat.meet(lat.join(ib, ic), iu)
    if report.predicate in ("upper_modular", "lower_modular", "semi_modular"):
        ib = lat.node_id(Subspace.from_vectors(w["b"], n, p))
        mid = lat.meet(iu, ib)
        jid = lat.join(iu, ib)
        prem = mid != ib and lat.is_maximal_in(mid, ib)
        concl = jid != iu and lat.is_maximal_in(iu, jid)
        side = w.get("side", "um")
        return (prem and not concl) if side == "um" else (concl and not prem)
    if report.predicate == "quasi_ideal":
        x = np.array(w["x"], dtype=np.int64)
        space = lat.nodes[iu]
        line = Subspace.from_vectors([x], n, p)
        prod = lat.algebra.bracket_spaces(space, line)
        return not prod.is_subspace_of(space.sum(line))
    if report.predicate in ("strong_ideal", "strong_quasi_ideal"):
        line = Subspace.from_vectors(w["line"], n, p)
        if report.predicate == "strong_ideal":
            return not lat.algebra.is_ideal(line)
        verdict, _ = _quasi_ideal_check(lat.algebra, line, _line_matrix(lat.algebra))
        return not verdict
    if report.predicate == "one_and_half_generation":
        il = lat.node_id(Subspace.from_vectors([w["x"]], n, p))
        return all(
            lat.join(int(il), int(m)) != lat.top_id for m in line_node_ids(lat)
        )
    raise UsageError(f"cannot replay predicate {report.predicate!r}")
