"""FCI on a given starting skeleton, and the two-stage PFCI pipeline.

The pipeline is::

    start skeleton -> refine_skeleton -> orient_v_structures
                   -> pds_refine -> apply_orientation_rules

Starting from the lasso neighbourhood skeleton gives PFCI; starting from the
complete graph gives ordinary FCI. All searches run in a fixed order (node
index, then lexicographic subsets) so results are reproducible, and CI
tests within one stage depend only on the state at the start of that stage
so they may run on several threads without changing the output.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .citest import DEFAULT_ALPHA, FisherZ, OracleTest, sample_correlation
from .dataset import Dataset, standardize
from .exceptions import ConfigError, MissingSepset, OrientationConflict, PFCIError, StageError
from .graph import Dag, Mark, MixedGraph, Skeleton, descendants, possible_d_sep
from .neighborhood import cv_lambda, default_lambda, neighborhood_select

CIRCLE, ARROW, TAIL = int(Mark.CIRCLE), int(Mark.ARROW), int(Mark.TAIL)

CORE_RULES = (1, 2, 3, 4, 8, 9, 10)
FULL_RULES = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)


@dataclass
class FciConfig:
    alpha: float = DEFAULT_ALPHA
    max_cond_size: int | None = None
    max_pds_size: int | None = None
    rule_set: str = "core"
    n_jobs: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        for name in ("max_cond_size", "max_pds_size"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigError(f"{name} must be >= 0")
        self.rule_set = str(self.rule_set).lower()
        if self.rule_set not in ("core", "full"):
            raise ConfigError("rule_set must be 'core' or 'full'")
        if self.n_jobs is None or self.n_jobs < 1:
            self.n_jobs = 1

    @property
    def rules(self) -> tuple[int, ...]:
        return FULL_RULES if self.rule_set == "full" else CORE_RULES


class SepsetMap:
    """Separating sets keyed by unordered node pair.

    A pair removed before conditional-independence testing (a gap in the
    neighbourhood skeleton) is separated by *all other* nodes; such entries
    are stored lazily.
    """

    _REST = object()

    def __init__(self, p: int):
        self.p = p
        self._d: dict[tuple[int, int], object] = {}

    @staticmethod
    def _key(i, j):
        return (i, j) if i < j else (j, i)

    def __setitem__(self, pair, S):
        self._d[self._key(*pair)] = frozenset(S)

    def set_rest(self, i, j):
        self._d[self._key(i, j)] = self._REST

    def __getitem__(self, pair) -> frozenset[int]:
        key = self._key(*pair)
        try:
            S = self._d[key]
        except KeyError:
            raise MissingSepset(pair) from None
        if S is self._REST:
            return frozenset(range(self.p)) - set(key)
        return S

    def separates_with(self, i, j, k) -> bool:
        """Whether ``k`` belongs to the separating set of ``(i, j)``."""
        try:
            S = self._d[self._key(i, j)]
        except KeyError:
            raise MissingSepset((i, j)) from None
        return k not in (i, j) if S is self._REST else k in S

    def __contains__(self, pair):
        return self._key(*pair) in self._d

    def __len__(self):
        return len(self._d)

    def pairs(self):
        return sorted(self._d)

    def discard(self, i, j):
        self._d.pop(self._key(i, j), None)

    def copy(self) -> "SepsetMap":
        out = SepsetMap(self.p)
        out._d = dict(self._d)
        return out


def _map(cfg, fn, items):
    if cfg.n_jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(cfg.n_jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------------------
# Skeleton search
# ---------------------------------------------------------------------------


def refine_skeleton(start: Skeleton, test, cfg: FciConfig | None = None):
    """Level-wise removal of edges within ``start``.

    At level ``l`` every adjacent pair ``(i, j)`` is tested against each
    size-``l`` subset of ``adj(i) - {j}`` and then ``adj(j) - {i}``, with
    adjacency frozen at the start of the level. The first independent subset
    becomes the separating set.
    """
    cfg = cfg or FciConfig()
    A = start.adjacency.copy()
    p = A.shape[0]
    sep = SepsetMap(p)
    level = 0
    while cfg.max_cond_size is None or level <= cfg.max_cond_size:
        adj = [np.flatnonzero(A[v]).tolist() for v in range(p)]
        pairs = [(i, j) for i in range(p) for j in adj[i]
                 if i < j and max(len(adj[i]), len(adj[j])) - 1 >= level]
        if not pairs:
            break

        def search(pair, adj=adj, level=level):
            i, j = pair
            tried = set()
            for a, b in ((i, j), (j, i)):
                cands = [k for k in adj[a] if k != b]
                for S in combinations(cands, level):
                    if S in tried:
                        continue
                    tried.add(S)
                    if test(i, j, S).independent:
                        return S
            return None

        for (i, j), S in zip(pairs, _map(cfg, search, pairs)):
            if S is not None:
                A[i, j] = A[j, i] = False
                sep[i, j] = S
        level += 1
    return Skeleton(A, list(start.node_names)), sep


def orient_v_structures(sk: Skeleton, sep: SepsetMap) -> MixedGraph:
    """Start from o-o on every edge and orient unshielded colliders."""
    A = sk.adjacency
    p = A.shape[0]
    M = np.where(A, CIRCLE, 0).astype(np.int8)
    for k in range(p):
        nb = np.flatnonzero(A[k]).tolist()
        for i, j in combinations(nb, 2):
            if A[i, j]:
                continue
            if not sep.separates_with(i, j, k):
                M[i, k] = ARROW
                M[j, k] = ARROW
    return MixedGraph(M, list(sk.node_names))


def pds_refine(g: MixedGraph, sep: SepsetMap, test, cfg: FciConfig | None = None):
    """Remove further edges using subsets of Possible-D-SEP sets.

    Possible-D-SEP sets are computed once from ``g``. For each edge, subsets
    of the set around either endpoint are tried by increasing size (capped
    by ``max_pds_size``); subsets already covered by the adjacency search are
    skipped. If anything is removed, marks are reset and v-structures are
    re-oriented on the reduced skeleton.
    """
    cfg = cfg or FciConfig()
    M = g.marks
    p = M.shape[0]
    sep = sep.copy()
    adj = [frozenset(np.flatnonzero(M[v]).tolist()) for v in range(p)]
    pds = [possible_d_sep(g, v) for v in range(p)]
    pairs = [(i, j) for i in range(p) for j in sorted(adj[i]) if i < j]
    skip_covered = cfg.max_cond_size is None

    def search(pair):
        i, j = pair
        near = (adj[i] - {j}, adj[j] - {i})
        tried = set()
        for a, b in ((i, j), (j, i)):
            cands = sorted(pds[a] - {a, b})
            if skip_covered and not set(cands) - near[0] - near[1]:
                continue
            top = len(cands) if cfg.max_pds_size is None else min(cfg.max_pds_size, len(cands))
            for size in range(top + 1):
                for S in combinations(cands, size):
                    if S in tried:
                        continue
                    tried.add(S)
                    if skip_covered and (near[0].issuperset(S) or near[1].issuperset(S)):
                        continue
                    if test(i, j, S).independent:
                        return S
        return None

    removed = False
    A = M != 0
    for (i, j), S in zip(pairs, _map(cfg, search, pairs)):
        if S is not None:
            A[i, j] = A[j, i] = False
            sep[i, j] = S
            removed = True
    if not removed:
        return g.copy(), sep
    return orient_v_structures(Skeleton(A, list(g.node_names)), sep), sep


# ---------------------------------------------------------------------------
# Orientation rules
# ---------------------------------------------------------------------------


class _Orienter:
    """Mutable working state for the orientation rules.

    ``M[a, b]`` is the mark at ``b`` on the edge ``a *-* b``.
    """

    def __init__(self, M: np.ndarray, sep: SepsetMap):
        self.M = M
        self.sep = sep
        self.p = M.shape[0]
        self.adj = [np.flatnonzero(M[v]).tolist() for v in range(self.p)]
        self.adjset = [set(a) for a in self.adj]

    def set_mark(self, a, b, mark) -> bool:
        cur = self.M[a, b]
        if cur == mark:
            return False
        if cur != CIRCLE:
            raise OrientationConflict(
                f"rule demands mark {Mark(mark).name} at {b} on edge {a}-{b}, "
                f"which is already {Mark(cur).name}"
            )
        self.M[a, b] = mark
        return True

    def pd(self, u, v) -> bool:
        """Edge ``u *-* v`` can be read as potentially directed ``u`` to ``v``."""
        return self.M[v, u] != ARROW and self.M[u, v] != TAIL

    # -- R1: a *-> b o-* c, a and c nonadjacent  =>  b -> c
    def r1(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for b in adj[a]:
                if M[a, b] != ARROW:
                    continue
                for c in adj[b]:
                    if c == a or c in adjset[a] or M[c, b] != CIRCLE:
                        continue
                    changed |= self.set_mark(c, b, TAIL)
                    changed |= self.set_mark(b, c, ARROW)
        return changed

    # -- R2: a -> b *-> c or a *-> b -> c, and a *-o c  =>  a *-> c
    def r2(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for c in adj[a]:
                if M[a, c] != CIRCLE:
                    continue
                for b in adj[a]:
                    if b == c or b not in adjset[c]:
                        continue
                    chain1 = M[b, a] == TAIL and M[a, b] == ARROW and M[b, c] == ARROW
                    chain2 = M[a, b] == ARROW and M[c, b] == TAIL and M[b, c] == ARROW
                    if chain1 or chain2:
                        changed |= self.set_mark(a, c, ARROW)
                        break
        return changed

    # -- R3: a *-> b <-* c, a *-o t o-* c, a/c nonadjacent, t *-o b  =>  t *-> b
    def r3(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for b in range(self.p):
            for a, c in combinations(adj[b], 2):
                if c in adjset[a] or M[a, b] != ARROW or M[c, b] != ARROW:
                    continue
                for t in adj[b]:
                    if t in (a, c) or t not in adjset[a] or t not in adjset[c]:
                        continue
                    if M[a, t] == CIRCLE and M[c, t] == CIRCLE and M[t, b] == CIRCLE:
                        changed |= self.set_mark(t, b, ARROW)
        return changed

    # -- R4: discriminating path <t, ..., a, b, c> for b with b o-* c
    def r4(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for b in range(self.p):
            for c in adj[b]:
                if M[c, b] != CIRCLE:
                    continue
                for a in adj[b]:
                    if a == c or a not in adjset[c]:
                        continue
                    # a must be a collider on the path and a parent of c
                    if M[b, a] != ARROW or M[a, c] != ARROW or M[c, a] != TAIL:
                        continue
                    t = self._discriminating_end(a, b, c)
                    if t is None:
                        continue
                    if self.sep.separates_with(t, c, b):
                        changed |= self.set_mark(c, b, TAIL)
                        changed |= self.set_mark(b, c, ARROW)
                    else:
                        changed |= self.set_mark(a, b, ARROW)
                        changed |= self.set_mark(c, b, ARROW)
                        changed |= self.set_mark(b, c, ARROW)
                    break
        return changed

    def _discriminating_end(self, a, b, c):
        M, adj, adjset = self.M, self.adj, self.adjset
        seen = {a, b, c}
        frontier = [a]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w in seen or M[w, v] != ARROW:
                        continue
                    if w not in adjset[c]:
                        return w
                    if M[v, w] == ARROW and M[w, c] == ARROW and M[c, w] == TAIL:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return None

    # -- R5: a o-o b with an uncovered circle path <a, c, ..., d, b>,
    #        a/d and b/c nonadjacent  =>  a - b and every path edge undirected
    def r5(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for b in adj[a]:
                if M[a, b] != CIRCLE or M[b, a] != CIRCLE:
                    continue
                for c in adj[a]:
                    if c == b or c in adjset[b] or M[a, c] != CIRCLE or M[c, a] != CIRCLE:
                        continue
                    path = self._circle_path(a, c, b)
                    if path is None:
                        continue
                    changed |= self.set_mark(a, b, TAIL)
                    changed |= self.set_mark(b, a, TAIL)
                    for u, v in zip(path, path[1:]):
                        changed |= self.set_mark(u, v, TAIL)
                        changed |= self.set_mark(v, u, TAIL)
                    break
        return changed

    def _circle_path(self, a, c, b):
        M, adj, adjset = self.M, self.adj, self.adjset

        def dfs(path):
            prev, cur = path[-2], path[-1]
            for nxt in adj[cur]:
                if nxt in path or nxt in adjset[prev]:
                    continue
                if M[cur, nxt] != CIRCLE or M[nxt, cur] != CIRCLE:
                    continue
                if nxt == b:
                    if cur not in adjset[a]:
                        return path + [b]
                    continue
                found = dfs(path + [nxt])
                if found:
                    return found
            return None

        return dfs([a, c])

    # -- R6: a - b o-* c  =>  b -* c
    def r6(self):
        M, adj = self.M, self.adj
        changed = False
        for b in range(self.p):
            if not any(M[a, b] == TAIL and M[b, a] == TAIL for a in adj[b]):
                continue
            for c in adj[b]:
                if M[c, b] == CIRCLE:
                    changed |= self.set_mark(c, b, TAIL)
        return changed

    # -- R7: a -o b o-* c, a/c nonadjacent  =>  b -* c
    def r7(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for b in adj[a]:
                if M[b, a] != TAIL or M[a, b] != CIRCLE:
                    continue
                for c in adj[b]:
                    if c == a or c in adjset[a] or M[c, b] != CIRCLE:
                        continue
                    changed |= self.set_mark(c, b, TAIL)
        return changed

    # -- R8: a -> b -> c or a -o b -> c, and a o-> c  =>  a -> c
    def r8(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for c in adj[a]:
                if M[c, a] != CIRCLE or M[a, c] != ARROW:
                    continue
                for b in adj[a]:
                    if b == c or b not in adjset[c]:
                        continue
                    if (M[b, a] == TAIL and M[a, b] in (ARROW, CIRCLE)
                            and M[c, b] == TAIL and M[b, c] == ARROW):
                        changed |= self.set_mark(c, a, TAIL)
                        break
        return changed

    def _updp_exists(self, path, target, banned=frozenset()):
        """Extend ``path`` to an uncovered potentially directed path ending at ``target``."""
        adj, adjset = self.adj, self.adjset
        prev, cur = path[-2], path[-1]
        for nxt in adj[cur]:
            if nxt in path or nxt in banned or nxt in adjset[prev] or not self.pd(cur, nxt):
                continue
            if nxt == target:
                return True
            path.append(nxt)
            ok = self._updp_exists(path, target, banned)
            path.pop()
            if ok:
                return True
        return False

    # -- R9: a o-> c with an uncovered p.d. path <a, b, ..., c>, b/c nonadjacent  =>  a -> c
    def r9(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for c in adj[a]:
                if M[c, a] != CIRCLE or M[a, c] != ARROW:
                    continue
                for b in adj[a]:
                    if b == c or b in adjset[c] or not self.pd(a, b):
                        continue
                    if self._updp_exists([a, b], c):
                        changed |= self.set_mark(c, a, TAIL)
                        break
        return changed

    def _updp_first_steps(self, a, target, banned):
        out = set()
        for mu in self.adj[a]:
            if mu in banned or not self.pd(a, mu):
                continue
            if mu == target or self._updp_exists([a, mu], target, banned):
                out.add(mu)
        return out

    # -- R10: a o-> c, b -> c <- d, uncovered p.d. paths a..b and a..d whose
    #         first vertices differ and are nonadjacent  =>  a -> c
    def r10(self):
        M, adj, adjset = self.M, self.adj, self.adjset
        changed = False
        for a in range(self.p):
            for c in adj[a]:
                if M[c, a] != CIRCLE or M[a, c] != ARROW:
                    continue
                parents = [v for v in adj[c] if v != a and M[v, c] == ARROW and M[c, v] == TAIL]
                if len(parents) < 2:
                    continue
                banned = frozenset((c,))
                firsts = {}
                done = False
                for b, d in combinations(parents, 2):
                    for v in (b, d):
                        if v not in firsts:
                            firsts[v] = self._updp_first_steps(a, v, banned)
                    if any(mu != om and om not in adjset[mu]
                           for mu in firsts[b] for om in firsts[d]):
                        changed |= self.set_mark(c, a, TAIL)
                        done = True
                        break
                if done:
                    continue
        return changed


def apply_orientation_rules(g: MixedGraph, sep: SepsetMap, cfg: FciConfig | None = None) -> MixedGraph:
    """Apply the configured FCI rules until no mark changes.

    Marks only move from CIRCLE to ARROW or TAIL; a rule that would flip a
    committed mark raises :class:`OrientationConflict`.
    """
    cfg = cfg or FciConfig()
    state = _Orienter(g.marks.copy(), sep)
    rules = [getattr(state, f"r{k}") for k in cfg.rules]
    changed = True
    while changed:
        changed = False
        for rule in rules:
            changed |= rule()
    return MixedGraph(state.M, list(g.node_names))


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class FciResult:
    pag: MixedGraph
    sepsets: SepsetMap = field(repr=False)
    skeleton_start: Skeleton = field(repr=False)
    skeleton_refined: Skeleton = field(repr=False)
    metadata: dict = field(default_factory=dict)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except PFCIError as err:
        raise StageError(name, err) from err


def run_fci(start: Skeleton, test, cfg: FciConfig | None = None, gaps_separated_by_rest=False):
    """FCI restricted to ``start``.

    With ``gaps_separated_by_rest`` every pair missing from ``start`` is
    recorded as separated by all other nodes (the conditional independence
    that a zero neighbourhood-selection coefficient expresses).
    Returns ``(pag, sepsets, refined_skeleton)``.
    """
    cfg = cfg or FciConfig()
    refined, sep = _stage("refine_skeleton", refine_skeleton, start, test, cfg)
    if gaps_separated_by_rest:
        A = start.adjacency
        for i, j in zip(*np.nonzero(np.triu(~A, 1))):
            sep.set_rest(int(i), int(j))
    g = _stage("orient_v_structures", orient_v_structures, refined, sep)
    g, sep = _stage("pds_refine", pds_refine, g, sep, test, cfg)
    pag = _stage("orientation_rules", apply_orientation_rules, g, sep, cfg)
    return pag, sep, refined


def _as_matrix(X, node_names=None):
    if isinstance(X, Dataset):
        return X.values, list(X.names)
    if hasattr(X, "columns") and node_names is None:
        node_names = [str(c) for c in X.columns]
    X = np.asarray(X, dtype=float)
    return X, node_names


def _ms(t0):
    return int(round((time.perf_counter() - t0) * 1000))


def pfci(X, lam="auto", cfg: FciConfig | None = None, *, rule="or", node_names=None,
         cv_folds=5, cv_grid=None, seed=0) -> FciResult:
    """Lasso neighbourhood selection followed by FCI on the selected skeleton.

    ``lam`` is a number, ``"auto"`` (``sqrt(2 log p / n)``) or ``"cv"``
    (per-node cross-validation with ``cv_folds`` folds seeded by ``seed``).
    """
    cfg = cfg or FciConfig()
    X, names = _as_matrix(X, node_names)
    t0 = time.perf_counter()
    Z = _stage("standardize", standardize, X, names)
    n, p = Z.shape
    if isinstance(lam, str) and lam == "auto":
        lams = default_lambda(n, p)
    elif isinstance(lam, str) and lam == "cv":
        lams = np.array([_stage("cv_lambda", cv_lambda, Z, j, cv_folds, cv_grid, seed) for j in range(p)])
    elif isinstance(lam, str):
        raise ConfigError(f"unknown lambda rule {lam!r}")
    else:
        lams = lam
    ns, start = _stage("neighborhood_select", neighborhood_select, Z, lams, rule,
                       n_jobs=cfg.n_jobs, node_names=names)
    ms1 = _ms(t0)
    t1 = time.perf_counter()
    test = FisherZ(sample_correlation(Z), cfg.alpha)
    pag, sep, refined = run_fci(start, test, cfg, gaps_separated_by_rest=True)
    ms2 = _ms(t1)
    lam_value = float(np.mean(ns.lambdas))
    meta = {
        "method": "pfci",
        "lambda": lam_value,
        "lambda_rule": lam if isinstance(lam, str) else "fixed",
        "sym_rule": ns.rule,
        "alpha": cfg.alpha,
        "rule_set": cfg.rule_set,
        "max_cond_size": cfg.max_cond_size,
        "max_pds_size": cfg.max_pds_size,
        "edges_ns": start.n_edges,
        "edges_refined": refined.n_edges,
        "edges_final": pag.n_edges,
        "ms_stage1": ms1,
        "ms_stage2": ms2,
    }
    return FciResult(pag, sep, start, refined, meta)


def fci_full(X, cfg: FciConfig | None = None, *, node_names=None) -> FciResult:
    """FCI from the complete graph (no lasso stage)."""
    cfg = cfg or FciConfig()
    X, names = _as_matrix(X, node_names)
    t0 = time.perf_counter()
    Z = _stage("standardize", standardize, X, names)
    p = Z.shape[1]
    start = Skeleton.complete(p, names)
    ms1 = _ms(t0)
    t1 = time.perf_counter()
    test = FisherZ(sample_correlation(Z), cfg.alpha)
    pag, sep, refined = run_fci(start, test, cfg)
    ms2 = _ms(t1)
    meta = {
        "method": "fci",
        "lambda": None,
        "lambda_rule": None,
        "sym_rule": None,
        "alpha": cfg.alpha,
        "rule_set": cfg.rule_set,
        "max_cond_size": cfg.max_cond_size,
        "max_pds_size": cfg.max_pds_size,
        "edges_ns": start.n_edges,
        "edges_refined": refined.n_edges,
        "edges_final": pag.n_edges,
        "ms_stage1": ms1,
        "ms_stage2": ms2,
    }
    return FciResult(pag, sep, start, refined, meta)


def oracle_pag(g: Dag, latents=(), selection=(), cfg: FciConfig | None = None,
               route: str = "auto") -> MixedGraph:
    """PAG that FCI returns when every CI query is answered by d-separation.

    ``route="fci"`` runs the full FCI search against the oracle.
    ``route="auto"`` does the same, except that without latent or selection
    nodes it uses the DAG skeleton directly and takes separating sets from
    the local Markov property (``pa(i)`` when ``j`` is not a descendant of
    ``i``, else ``pa(j)``); in that case the search stages would recover the
    same skeleton and any separating set gives the same collider decisions.
    """
    cfg = cfg or FciConfig()
    if route not in ("auto", "fci"):
        raise ConfigError("route must be 'auto' or 'fci'")
    test = OracleTest(g, latents, selection)
    if route == "auto" and len(test.observed) == g.n_nodes:
        sk = g.skeleton()
        sep = SepsetMap(g.n_nodes)
        desc = [descendants(g, v) for v in range(g.n_nodes)]
        for i, j in zip(*np.nonzero(np.triu(~sk.adjacency, 1))):
            i, j = int(i), int(j)
            sep[i, j] = g.parents[j] if j in desc[i] else g.parents[i]
        pag = _stage("orient_v_structures", orient_v_structures, sk, sep)
        return _stage("orientation_rules", apply_orientation_rules, pag, sep, cfg)
    start = Skeleton.complete(len(test.observed), test.node_names)
    pag, _, _ = run_fci(start, test, cfg)
    return pag


def config_dict(cfg: FciConfig) -> dict:
    return asdict(cfg)
