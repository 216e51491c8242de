"""Convex and numerical solvers: Koerner graph entropy, capacity maximizers,
sum-of-channels weights, eigenvalue theta for transitive graphs, finite-field
rank bound.

Everything is in bits (log base 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import Distribution, Graph, ProbabilisticGraph, ZeroErrError, bits_of
from .combin import maximal_independent_sets
from .symmetry import is_edge_transitive, is_perfect, is_vertex_transitive

LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Koerner graph entropy by alternating minimization


@dataclass
class KornerSolution:
    """Result of the alternating minimization of I(W;X) over P(W|X) with
    X in W, W ranging over maximal independent sets."""

    value: float
    sets: list                 # W alphabet, independent sets as bitsets
    q: np.ndarray              # q[w, x] = Q(w|x), column-stochastic
    r: np.ndarray              # marginal of W
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


def korner_entropy(pg: ProbabilisticGraph, tol: float = 1e-9,
                   max_iter: int = 100_000, mis_limit: int = 1_000_000) -> KornerSolution:
    """Koerner graph entropy min I(W;X) s.t. X in W, W independent.

    The W alphabet is restricted to maximal independent sets: enlarging any
    independent W to a maximal superset keeps X in W and cannot increase
    I(W;X).  Alternating minimization collapses to an iteration on the
    W-marginal r alone: for fixed r the best Q(.|x) is the restriction of r
    to the sets containing x, which makes the objective
    J(r) = -sum_x P(x) log2 c(x) with coverage c(x) = sum_{w: x in w} r(w),
    and the marginal update is r <- r * (M @ (P / c)).  J is non-increasing,
    always an upper bound on the entropy, and converges to it.
    """
    g = pg.graph
    sets = [w.vertices for w in maximal_independent_sets(g, mis_limit)]
    m, n = len(sets), g.n
    member = np.zeros((m, n))
    for k, mask in enumerate(sets):
        for v in bits_of(mask):
            member[k, v] = 1.0
    p = np.array([float(x) for x in pg.dist.weights])
    support = p > 0
    r = np.full(m, 1.0 / m)

    def objective(cov):
        return float(-(p[support] * np.log2(cov[support])).sum())

    cov = member.T @ r
    prev = objective(cov)
    history = [prev]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        ratio = np.where(cov > 0, p / np.maximum(cov, 1e-300), 0.0)
        r = r * (member @ ratio)
        total = r.sum()
        if total <= 0:
            break
        r /= total
        cov = member.T @ r
        cur = objective(cov)
        history.append(cur)
        if prev - cur < tol:
            converged = True
            prev = cur
            break
        prev = cur
    # reconstruct the conditional simplices Q(w|x) = r(w) 1[x in w] / c(x)
    safe_cov = np.where(cov > 0, cov, 1.0)
    q = (r[:, None] * member) / safe_cov[None, :]
    return KornerSolution(max(prev, 0.0), sets, q, r, iterations, converged, history)


@dataclass(frozen=True)
class CapacityValue:
    value: float
    korner: KornerSolution
    perfect_assumed: bool


def relative_capacity_perfect(pg: ProbabilisticGraph, assume_perfect: bool = False,
                              tol: float = 1e-9, perfect_budget: int = 14) -> CapacityValue:
    """Zero-error capacity relative to the vertex distribution, exact for
    perfect graphs: H(P) - Koerner entropy.

    Refuses when perfectness is not established and not asserted by the
    caller; an asserted perfectness is recorded in the result.
    """
    assumed = bool(assume_perfect)
    if not assume_perfect:
        perfect, _, _ = is_perfect(pg.graph, perfect_budget)
        if not perfect:
            raise ZeroErrError("graph is not perfect; relative capacity formula "
                               "H(P) - H_kappa does not apply")
    sol = korner_entropy(pg, tol)
    return CapacityValue(pg.dist.entropy() - sol.value, sol, assumed)


# ---------------------------------------------------------------------------
# capacity-achieving distribution by mirror ascent


def perfect_capacity_evaluator(g: Graph, assume_perfect: bool = False,
                               tol: float = 1e-10, perfect_budget: int = 14):
    """Evaluator P -> (C(G,P), supergradient) for perfect graphs.

    Supergradient component for vertex x: -log P(x) - 1/ln 2 - D(Q*(.|x)||r*),
    from the envelope theorem on the inner minimization.
    """
    if not assume_perfect:
        perfect, _, _ = is_perfect(g, perfect_budget)
        if not perfect:
            raise ZeroErrError("graph is not perfect; supply a custom evaluator")

    def evaluate(weights):
        pg = ProbabilisticGraph(g, Distribution(tuple(weights)))
        sol = korner_entropy(pg, tol)
        value = pg.dist.entropy() - sol.value
        grad = np.empty(g.n)
        for x in range(g.n):
            col = sol.q[:, x]
            mask = col > 0
            div = float(np.sum(col[mask] * np.log2(col[mask] / np.maximum(sol.r[mask], 1e-300))))
            px = float(weights[x])
            grad[x] = (-math.log2(px) if px > 0 else 60.0) - 1.0 / LN2 - div
        return value, grad

    return evaluate


@dataclass(frozen=True)
class CapacityOptimum:
    dist: Distribution
    value: float
    converged: bool
    exact_evaluator: bool
    iterations: int


def capacity_achieving_distribution(g: Graph, evaluator=None, tol: float = 1e-5,
                                    max_iter: int = 2000,
                                    exact_evaluator: bool = True) -> CapacityOptimum:
    """Maximize P -> C(G,P) on the simplex by exponentiated gradient ascent.

    The problem is concave, so supergradient stationarity within `tol`
    certifies global optimality of the value.  When a custom evaluator only
    lower-bounds C(G,P), pass exact_evaluator=False; the result is then
    labeled a lower bound on C0.
    """
    if evaluator is None:
        evaluator = perfect_capacity_evaluator(g)
    n = g.n
    p = np.full(n, 1.0 / n)
    best_val, best_p = -math.inf, p.copy()
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        value, grad = evaluator(tuple(p))
        if value > best_val:
            best_val, best_p = value, p.copy()
        gap = float(np.max(grad) - grad @ p)
        if gap <= tol:
            converged = True
            break
        step = 0.5 / math.sqrt(iterations)
        logits = np.log(np.maximum(p, 1e-300)) / LN2 + step * grad
        logits -= logits.max()
        p = np.exp2(logits)
        p /= p.sum()
    return CapacityOptimum(Distribution(tuple(float(x) for x in best_p)),
                           best_val, converged, exact_evaluator, iterations)


# ---------------------------------------------------------------------------
# sum of channels


def sum_channel_weights(c0_values):
    """Optimal channel-selection weights for a sum of channels and the
    resulting rate log2(sum_a 2^C0a); closed form, full support always."""
    vals = [float(v) for v in c0_values]
    if not vals or any(math.isinf(v) or math.isnan(v) for v in vals):
        raise ValueError("capacity values must be finite")
    top = max(vals)
    scaled = [2.0 ** (v - top) for v in vals]
    total = sum(scaled)
    weights = Distribution(tuple(s / total for s in scaled))
    return weights, top + math.log2(total)


# ---------------------------------------------------------------------------
# eigenvalue theta for vertex- and edge-transitive graphs


def jacobi_eigenvalues(matrix: np.ndarray, off_threshold: float = 1e-12,
                       max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.

    Deterministic sweep order (p ascending, then q); terminates when the
    off-diagonal Frobenius norm drops below `off_threshold`.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("matrix must be symmetric square")
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float((a * a).sum() - (np.diag(a) ** 2).sum())))
        if off < off_threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < off_threshold / max(1, n * n):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    return np.sort(np.diag(a))


def theta_transitive(g: Graph, assume_transitive: bool = False,
                     node_budget: int = 10_000_000) -> float:
    """Lovasz number for regular vertex- and edge-transitive graphs via the
    eigenvalue formula theta = n (-lambda_min) / (d - lambda_min).

    log2 of the result is a certified upper bound on the zero-error capacity
    under the stated precondition.  Refuses non-regular inputs; transitivity
    is either verified (n <= 32) or asserted by the caller.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if not g.is_regular():
        raise ZeroErrError("theta eigenvalue formula needs a regular graph")
    d = g.degree(0)
    if d == 0:
        return float(g.n)
    if not assume_transitive:
        if not is_vertex_transitive(g, node_budget):
            raise ZeroErrError("graph is not vertex-transitive")
        if not is_edge_transitive(g, node_budget):
            raise ZeroErrError("graph is not edge-transitive")
    adj = np.zeros((g.n, g.n))
    for i in range(g.n):
        for j in bits_of(g.rows[i]):
            adj[i, j] = 1.0
    lam_min = float(jacobi_eigenvalues(adj)[0])
    return g.n * (-lam_min) / (d - lam_min)


# ---------------------------------------------------------------------------
# Haemers rank bound over a prime field


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FiniteFieldMatrix:
    p: int
    entries: tuple  # tuple of row tuples, values in [0, p)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            if any(not 0 <= v < self.p for v in row):
                raise ValueError("entries must lie in [0, p)")

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_json_dict(self) -> dict:
        return {"p": self.p, "rows": [list(r) for r in self.entries]}


def matrix_from_json_dict(d: dict) -> FiniteFieldMatrix:
    try:
        return FiniteFieldMatrix(int(d["p"]), tuple(tuple(int(v) for v in r) for r in d["rows"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc


def gf_rank(m: FiniteFieldMatrix) -> int:
    """Rank over GF(p) by Gaussian elimination."""
    p = m.p
    rows = [list(r) for r in m.entries]
    n = m.n
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, n) if rows[r][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == n:
            break
    return rank


def haemers_bound(g: Graph, b: FiniteFieldMatrix) -> float:
    """log2 rank of a fitting matrix: certified upper bound on C0(g).

    A matrix fits when its diagonal is nonzero and it vanishes on distinct
    non-adjacent pairs; then alpha(G^n) <= rank(B)^n.
    """
    if b.n != g.n:
        raise ValueError("matrix size must match the graph")
    for i in range(g.n):
        if b.entries[i][i] == 0:
            raise ZeroErrError(f"matrix does not fit: zero diagonal at ({i},{i})")
        for j in range(g.n):
            if i != j and not g.has_edge(i, j) and b.entries[i][j] != 0:
                raise ZeroErrError(f"matrix does not fit: nonzero entry at non-edge ({i},{j})")
    return math.log2(gf_rank(b))


def adjacency_plus_identity(g: Graph, p: int) -> FiniteFieldMatrix:
    """Default Haemers candidate A + I over GF(p)."""
    rows = []
    for i in range(g.n):
        rows.append(tuple(1 if (i == j or g.has_edge(i, j)) else 0 for j in range(g.n)))
    return FiniteFieldMatrix(p, tuple(rows))
