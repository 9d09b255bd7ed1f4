"""Non-negative adversary certificates, explicit constructions, relation bounds.

A certificate is a labeled symmetric non-negative matrix G that vanishes on
same-value pairs; its value is ||G|| / max_j ||G o D_j||, where D_j masks the
pairs differing at position j.  Any such certificate lower-bounds quantum
query complexity, so the constructions here are verifiable witnesses, not
optima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from .boolfn import BitString, PartialFunction
from .measures import FbsSolution
from .sabotage import DAGGER, STAR, SabString, StrongInput, make_strong

DIM_CAP = 5000
SYMMETRY_TOL = 1e-12
RESIDUAL_TOL = 1e-10


class AdversaryError(ValueError):
    """Invalid matrix, certificate pattern violation, or empty relation."""


def spectral_norm(m: np.ndarray, tol: float = RESIDUAL_TOL, max_iter: int = 20_000) -> float:
    """Largest singular value of a symmetric real matrix.

    Power iteration on m @ m (so paired +/- eigenvalues cannot stall it),
    followed by extraction of a signed eigenvector.  Converged when the
    residual ||m v - lam v|| drops below tol * ||m||_F.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise AdversaryError(f"matrix must be square, got shape {m.shape}")
    if m.shape[0] > DIM_CAP:
        raise AdversaryError(f"dimension {m.shape[0]} exceeds cap {DIM_CAP}")
    scale = np.abs(m).max(initial=0.0)
    if not np.allclose(m, m.T, atol=SYMMETRY_TOL * max(1.0, scale), rtol=0.0):
        raise AdversaryError("matrix is not symmetric")
    if scale == 0.0:
        return 0.0

    fro = float(np.linalg.norm(m))
    rng = np.random.default_rng(0x5AB1AB)
    v = rng.standard_normal(m.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = m @ (m @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # v is in the kernel of m^2; restart from a fresh direction.
            v = rng.standard_normal(m.shape[0])
            v /= np.linalg.norm(v)
            continue
        v_next = w / norm_w
        mv = m @ v_next
        lam = float(np.linalg.norm(mv))
        # Split v into the +lam / -lam eigenvector candidates and keep the
        # dominant one; for a clean eigenvector one candidate vanishes.
        plus = mv + lam * v_next
        minus = mv - lam * v_next
        cand = plus if np.linalg.norm(plus) >= np.linalg.norm(minus) else minus
        norm_c = np.linalg.norm(cand)
        if norm_c > 0:
            u = cand / norm_c
            lam_u = float(u @ (m @ u))
            if np.linalg.norm(m @ u - lam_u * u) <= tol * fro:
                return abs(lam_u)
        v = v_next
    raise AdversaryError("power iteration did not converge")


@dataclass(frozen=True)
class AdversaryCertificate:
    """Labeled certificate with its norm, per-position norms, and value."""

    labels: tuple[Hashable, ...]
    gamma: np.ndarray
    norm_gamma: float
    column_norms: tuple[float, ...]
    value: float

    def to_json_dict(self) -> dict:
        return {
            "labels": [str(label) for label in self.labels],
            "value": self.value,
            "norm_gamma": self.norm_gamma,
            "column_norms": list(self.column_norms),
        }


def evaluate_certificate(
    labels: Sequence[Hashable],
    gamma: np.ndarray,
    *,
    arity: int,
    fvalue: Callable[[Hashable], int],
    differs: Callable[[Hashable, Hashable, int], bool] | None = None,
    tol: float = RESIDUAL_TOL,
) -> AdversaryCertificate:
    """Norms and value of an adversary matrix over the given labels.

    ``differs(u, v, j)`` decides whether two labels differ at 1-based position
    j; by default position j of a label is ``label[j - 1]`` and tuples are
    compared whole, which is the right notion for strong inputs.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    d = len(labels)
    if gamma.shape != (d, d):
        raise AdversaryError(f"gamma shape {gamma.shape} does not match {d} labels")
    if gamma.min(initial=0.0) < 0:
        raise AdversaryError("gamma has negative entries")
    if not np.allclose(gamma, gamma.T, atol=SYMMETRY_TOL * max(1.0, gamma.max(initial=0.0)), rtol=0.0):
        raise AdversaryError("gamma is not symmetric")
    if not gamma.any():
        raise AdversaryError("gamma is the zero matrix")
    values = [fvalue(label) for label in labels]
    for a in range(d):
        for b in range(d):
            if values[a] == values[b] and gamma[a, b] != 0.0:
                raise AdversaryError(
                    f"pattern violation: gamma[{labels[a]}, {labels[b]}] nonzero on equal values"
                )

    if differs is None:
        differs = lambda u, v, j: u[j - 1] != v[j - 1]
    column_norms = []
    for j in range(1, arity + 1):
        masked = np.zeros_like(gamma)
        for a in range(d):
            for b in range(a + 1, d):
                if gamma[a, b] != 0.0 and differs(labels[a], labels[b], j):
                    masked[a, b] = masked[b, a] = gamma[a, b]
        column_norms.append(spectral_norm(masked, tol=tol) if masked.any() else 0.0)
    norm_gamma = spectral_norm(gamma, tol=tol)
    worst = max(column_norms)
    if worst == 0.0:
        raise AdversaryError("all per-position norms vanish")
    return AdversaryCertificate(
        labels=tuple(labels),
        gamma=gamma,
        norm_gamma=norm_gamma,
        column_norms=tuple(column_norms),
        value=norm_gamma / worst,
    )


def build_fbs_adversary(
    f: PartialFunction, sol: FbsSolution, tol: float = RESIDUAL_TOL
) -> AdversaryCertificate:
    """Star-shaped certificate with entries sqrt(w_y) between x and each y.

    Its norm squares to the fbs value while every per-position norm stays
    at most 1, certifying a sqrt(fbs) lower bound.
    """
    pairs = [(y, float(w)) for y, w in sorted(sol.weights.items()) if w > 0]
    if not pairs:
        raise AdversaryError("weight vector is identically zero")
    labels: list[Hashable] = [sol.x] + [y for y, _ in pairs]
    d = len(labels)
    gamma = np.zeros((d, d))
    for i, (_, w) in enumerate(pairs, start=1):
        gamma[0, i] = gamma[i, 0] = math.sqrt(w)
    return evaluate_certificate(
        labels, gamma, arity=f.n, fvalue=lambda lab: f.value(lab), tol=tol  # type: ignore[arg-type]
    )


def build_sabotage_adversary(
    f: PartialFunction, sol: FbsSolution, tol: float = RESIDUAL_TOL
) -> AdversaryCertificate:
    """Certificate over strong inputs pairing star and dagger copies of blocks.

    The entry between (x, y, star) and (x, y', dagger) is sqrt(w_y w_y'), so
    the matrix is a rank-one block tensored with an off-diagonal 2x2 flip;
    its norm equals the fbs value and per-position norms stay within
    1 + sqrt(fbs).
    """
    pairs = [(y, float(w)) for y, w in sorted(sol.weights.items()) if w > 0]
    if not pairs:
        raise AdversaryError("weight vector is identically zero")
    x = sol.x
    fx = f.value(x)
    labels: list[Hashable] = []
    for y, _ in pairs:
        if fx == 0:
            star, dagger = make_strong(f, x, y, STAR), make_strong(f, x, y, DAGGER)
        else:
            star, dagger = make_strong(f, y, x, STAR), make_strong(f, y, x, DAGGER)
        labels.extend([star, dagger])
    d = len(labels)
    gamma = np.zeros((d, d))
    roots = [math.sqrt(w) for _, w in pairs]
    for a, ra in enumerate(roots):
        for b, rb in enumerate(roots):
            gamma[2 * a, 2 * b + 1] = gamma[2 * b + 1, 2 * a] = ra * rb
    return evaluate_certificate(
        labels,
        gamma,
        arity=f.n,
        fvalue=lambda lab: 0 if lab.marker == STAR else 1,  # type: ignore[union-attr]
        tol=tol,
    )


@dataclass(frozen=True)
class Relation:
    """Bipartite relation between inputs of different function value."""

    x_side: tuple[Hashable, ...]
    y_side: tuple[Hashable, ...]
    pairs: frozenset[tuple[Hashable, Hashable]]
    arity: int
    alphabet_size: int

    def __post_init__(self) -> None:
        if not self.pairs:
            raise AdversaryError("relation is empty")
        for u, v in self.pairs:
            if not any(u[i] != v[i] for i in range(self.arity)):
                raise AdversaryError(f"pair ({u}, {v}) has no differing position")


@dataclass(frozen=True)
class RelationBound:
    """Neighbor-multiplicity counting bound sqrt(m_x * m_y / l_max)."""

    m_x: int
    m_y: int
    l_max: int
    bound: float
    per_position: Mapping[int, int]

    def to_json_dict(self) -> dict:
        return {
            "m_x": self.m_x,
            "m_y": self.m_y,
            "l_max": self.l_max,
            "bound": self.bound,
            "per_position": {str(j): v for j, v in sorted(self.per_position.items())},
        }


def relation_bound(rel: Relation) -> RelationBound:
    """m_x, m_y, the max load product l_max, and the query lower bound.

    ``per_position`` maps each 1-based position to the largest product
    l_{x,i} * l_{y,i} over relation pairs differing there.
    """
    nx: dict[Hashable, list[Hashable]] = {u: [] for u in rel.x_side}
    ny: dict[Hashable, list[Hashable]] = {v: [] for v in rel.y_side}
    for u, v in rel.pairs:
        nx[u].append(v)
        ny[v].append(u)
    m_x = min(len(vs) for vs in nx.values())
    m_y = min(len(us) for us in ny.values())

    lx: dict[tuple[Hashable, int], int] = {}
    ly: dict[tuple[Hashable, int], int] = {}
    for u, vs in nx.items():
        for i in range(rel.arity):
            lx[(u, i)] = sum(1 for v in vs if u[i] != v[i])
    for v, us in ny.items():
        for i in range(rel.arity):
            ly[(v, i)] = sum(1 for u in us if u[i] != v[i])

    per_position: dict[int, int] = {}
    for u, v in rel.pairs:
        for i in range(rel.arity):
            if u[i] != v[i]:
                product = lx[(u, i)] * ly[(v, i)]
                j = i + 1
                if product > per_position.get(j, 0):
                    per_position[j] = product
    l_max = max(per_position.values())
    return RelationBound(
        m_x=m_x,
        m_y=m_y,
        l_max=l_max,
        bound=math.sqrt(m_x * m_y / l_max),
        per_position=per_position,
    )


def build_indexing_relation(n: int, strong: bool = False) -> Relation:
    """Hard relation for the sabotaged indexing function.

    Star side: address a with a lone star at the data position a addresses;
    dagger side the same with daggers.  Pairs connect sides whose addresses
    are at Hamming distance exactly 2.
    """
    if not 1 <= n <= 4:
        raise AdversaryError(f"indexing arity {n} outside 1..4")
    size = 1 << n
    addresses = [tuple((k >> (n - 1 - i)) & 1 for i in range(n)) for k in range(size)]

    def weak_label(addr: tuple[int, ...], marker: int) -> SabString:
        data = [0] * size
        data[int("".join(map(str, addr)), 2)] = marker
        return SabString(tuple(addr) + tuple(data))

    def strong_label(addr: tuple[int, ...], marker: int) -> StrongInput:
        # Unique preimage pair: x = (addr, all-zero data), y = x with the
        # addressed data bit set, so f(x) = 0 and f(y) = 1.
        data_pos = int("".join(map(str, addr)), 2)
        x = BitString(tuple(addr) + tuple(0 for _ in range(size)))
        y = x.flip([n + data_pos + 1])
        return StrongInput.from_pair(x, y, marker)

    make = strong_label if strong else weak_label
    x_side = tuple(make(a, STAR) for a in addresses)
    y_side = tuple(make(a, DAGGER) for a in addresses)
    pairs = frozenset(
        (x_side[i], y_side[k])
        for i, a in enumerate(addresses)
        for k, b in enumerate(addresses)
        if sum(p != q for p, q in zip(a, b)) == 2
    )
    if not pairs:
        raise AdversaryError(f"indexing relation is empty at n = {n}")
    return Relation(
        x_side=x_side,
        y_side=y_side,
        pairs=pairs,
        arity=n + size,
        alphabet_size=4,
    )
