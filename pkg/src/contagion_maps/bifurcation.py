"""Analytic WFP / ANC bifurcation curves for gamma = 0 networks.

Probabilities are evaluated in exact rational arithmetic and only
converted to float at the end, so CDFs reach exactly 1 at k = dNG.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# fewest active geometric neighbours that carry a wavefront, per geometric degree
WFP_NUMERATORS = {4: 1, 8: 3, 12: 4}


@dataclass(frozen=True)
class RegimeQuery:
    dG: int
    dNG: int
    N: int
    q_t: int
    w: int = 0
    delta: float | None = None

    def __post_init__(self):
        if self.dG not in WFP_NUMERATORS:
            raise ValueError(f"dG must be one of {sorted(WFP_NUMERATORS)}, got {self.dG}")
        if self.dNG < 0 or self.w < 0 or self.q_t < 0:
            raise ValueError("dNG, w and q_t must be nonnegative")
        if self.q_t > self.N:
            raise ValueError("q_t cannot exceed N")
        if self.delta is not None and not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")


@dataclass(frozen=True)
class AncThreshold:
    value: float
    k: int
    no_anc: bool
    neighborhood: int


def t_wfp(dG: int, dNG: int) -> float:
    """Largest threshold (exclusive) at which a wavefront still advances."""
    if dG not in WFP_NUMERATORS:
        raise ValueError(
            f"no closed form for dG={dG}; T^WFP must be derived per geometric degree "
            f"(supported: {sorted(WFP_NUMERATORS)})")
    if dNG < 0:
        raise ValueError("dNG must be nonnegative")
    return WFP_NUMERATORS[dG] / (dG + dNG)


def anc_horizon(dG: int, dNG: int) -> float:
    if dG + dNG <= 0:
        raise ValueError("total degree must be positive")
    return dNG / (dG + dNG)


def anc_lower_bound(q: RegimeQuery) -> float:
    """Threshold below which every inactive node is expected to activate via ANC.

    With ``q.delta`` set, delta * H^ANC is returned instead of using q_t.
    """
    frac = Fraction(q.q_t, q.N - 1) if q.delta is None else Fraction(q.delta)
    return float(frac * q.dNG / (q.dG + q.dNG))


def neighborhood_size(q_t: int, w: int) -> int:
    """(sqrt(q_t) + 2w)^2 rounded to the nearest integer (halves round up)."""
    if q_t < 0 or w < 0:
        raise ValueError("q_t and w must be nonnegative")
    return math.floor((math.sqrt(q_t) + 2 * w) ** 2 + 0.5)


def _fits(q: int, N: int, dG: int) -> bool:
    # exact test of (sqrt(q) + 2 dG)^2 <= 0.9 N, i.e. 4 dG sqrt(q) <= 9N/10 - q - 4 dG^2
    rhs = Fraction(9 * N, 10) - q - 4 * dG * dG
    return rhs >= 0 and 16 * dG * dG * q <= rhs * rhs


def q_max(N: int, dG: int) -> int:
    """Largest active count whose width-dG neighbourhood covers at most 90% of N."""
    if not _fits(0, N, dG) or not _fits(1, N, dG):
        raise ValueError(f"network too small: N={N} cannot hold a dG={dG} periphery")
    q = max(1, math.floor((math.sqrt(0.9 * N) - 2 * dG) ** 2))
    while not _fits(q, N, dG):
        q -= 1
    while _fits(q + 1, N, dG):
        q += 1
    return q


def d_in_pmf(dNG: int, q_t: int, N: int, mode: str = "binomial") -> list[Fraction]:
    """P(d_in = k) for k = 0..dNG.

    ``binomial`` uses success probability q_t / N; ``exact`` draws dNG
    distinct partners from the N - 1 other nodes without replacement.
    """
    if mode == "binomial":
        p = Fraction(q_t, N)
        return [math.comb(dNG, k) * p ** k * (1 - p) ** (dNG - k) for k in range(dNG + 1)]
    if mode == "exact":
        if q_t > N - 1:
            raise ValueError("q_t must be at most N - 1")
        denom = math.prod(N - 1 - j for j in range(dNG))
        out = []
        for k in range(dNG + 1):
            active = math.prod(q_t - j for j in range(k))
            inactive = math.prod(N - 1 - q_t - j for j in range(dNG - k))
            out.append(Fraction(math.comb(dNG, k) * active * inactive, denom))
        return out
    raise ValueError(f"unknown mode {mode!r}")


def _cdf_exact(k: int, dNG: int, q_t: int, N: int, mode: str) -> Fraction:
    if not 0 <= k <= dNG:
        raise ValueError(f"k must lie in [0, {dNG}]")
    return sum(d_in_pmf(dNG, q_t, N, mode)[:k + 1], Fraction(0))


def d_in_cdf(k: int, dNG: int, q_t: int, N: int, mode: str = "binomial") -> float:
    return float(_cdf_exact(k, dNG, q_t, N, mode))


def t_anc(q: RegimeQuery, mode: str = "binomial") -> AncThreshold:
    """k*/(dG + dNG) with k* the largest k whose expected count of remote nodes
    having more than k active neighbours is at least one."""
    if q.dNG < 1:
        raise ValueError("T^ANC needs dNG >= 1")
    size = neighborhood_size(q.q_t, q.w)
    if size >= q.N:
        raise ValueError(f"neighbourhood of {size} nodes does not fit in N={q.N}")
    outside = q.N - size
    lhs = Fraction(outside - 1, outside)
    cdf = Fraction(0)
    k_star = -1
    for k, pk in enumerate(d_in_pmf(q.dNG, q.q_t, q.N, mode)):
        cdf += pk
        if lhs >= cdf:
            k_star = k
    if k_star < 1:
        return AncThreshold(0.0, max(k_star, 0), True, size)
    return AncThreshold(k_star / (q.dG + q.dNG), k_star, False, size)


def bifurcation_table(dG: int, N: int, q_t: int | str, w: int = 0, dng_values=range(0, 26),
                      mode: str = "binomial", delta: float | None = None) -> list[dict]:
    """Rows of (dNG, t_wfp, anc_horizon, anc_lower_bound, t_anc, no_anc).

    ``q_t`` may be an active-node count, ``"max"`` for q_max(N, dG), or
    ``"seed"`` for the cluster-seed size 1 + dG + dNG of each row.
    """
    rows = []
    for dNG in dng_values:
        if q_t == "max":
            qt = q_max(N, dG)
        elif q_t == "seed":
            qt = 1 + dG + dNG
        else:
            qt = int(q_t)
        q = RegimeQuery(dG=dG, dNG=dNG, N=N, q_t=qt, w=w, delta=delta)
        if dNG >= 1:
            anc = t_anc(q, mode)
            t, flag = anc.value, anc.no_anc
        else:
            t, flag = 0.0, True
        rows.append({
            "dNG": dNG,
            "t_wfp": t_wfp(dG, dNG),
            "anc_horizon": anc_horizon(dG, dNG),
            "anc_lower_bound": anc_lower_bound(q),
            "t_anc": t,
            "no_anc": flag,
        })
    return rows


def sandwich_violations(dG: int, N: int, q_t_values, w_values, dng_values=range(1, 26),
                        mode: str = "binomial") -> list[dict]:
    """Queries where anc_lower_bound <= t_anc < anc_horizon fails."""
    out = []
    for q_t in q_t_values:
        for w in w_values:
            for dNG in dng_values:
                q = RegimeQuery(dG=dG, dNG=dNG, N=N, q_t=q_t, w=w)
                anc = t_anc(q, mode)
                lo, hi = anc_lower_bound(q), anc_horizon(dG, dNG)
                if not lo <= anc.value < hi:
                    out.append({"q_t": q_t, "w": w, "dNG": dNG, "k": anc.k, "t_anc": anc.value,
                                "lower": lo, "horizon": hi})
    return out
