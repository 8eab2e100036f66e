"""Finite-size glass verification engine.

Exact Gibbs expectations by full spin enumeration for small systems,
Monte Carlo over quenched Gaussian disorder, overlap moments over up to
four independent replicas, and the conservation-law polynomial
residuals that the streaming relations predict to vanish as the system
grows.

Everything here is exact in the thermal average (2^n enumeration) and
statistical only in the disorder average.  Disorder is drawn from a
counter-based generator keyed by (seed, sample index), so any subset of
samples can be regenerated independently and in parallel without
changing the stream.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .plane import SkParams

MAX_SITES = 14


def _check_site_count(n) -> None:
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"site count must be an integer, got {n!r}")
    if n < 1 or n > MAX_SITES:
        raise ValueError(
            f"site count must be in [1, {MAX_SITES}] (2^n enumeration), got {n}")


@lru_cache(maxsize=4)
def _spin_tables(n: int):
    """Per-size enumeration tables, built once and shared read-only.

    spins[c, i] is the value of site i in configuration c (bit i of c,
    with bit 0 mapped to +1).  pair_prod collects the products over the
    i < j edges in row-major order, pair_all the full n^2 ordered grid
    (diagonal columns are identically 1, which is what keeps the
    all-indices-summed overlap monomials literal).
    """
    count = 1 << n
    bits = (np.arange(count, dtype=np.uint32)[:, None]
            >> np.arange(n, dtype=np.uint32)[None, :]) & 1
    spins = 1.0 - 2.0 * bits.astype(np.float64)
    upper_i, upper_j = np.triu_indices(n, k=1)
    pair_prod = spins[:, upper_i] * spins[:, upper_j]
    pair_all = (spins[:, :, None] * spins[:, None, :]).reshape(count, n * n)
    spins.setflags(write=False)
    pair_prod.setflags(write=False)
    pair_all.setflags(write=False)
    return spins, pair_prod, pair_all


@dataclass(frozen=True)
class DisorderSample:
    """One realization of the quenched randomness.

    couplings holds the upper-triangular pair couplings J_ij (i < j,
    row-major), site_fields the per-site cavity variables J_i; both are
    standard normal and reproducible from (seed, index) alone.
    """
    seed: int
    index: int
    couplings: np.ndarray
    site_fields: np.ndarray

    @property
    def n(self) -> int:
        return self.site_fields.shape[0]


def draw_disorder(seed: int, index: int, n: int) -> DisorderSample:
    """Draw sample number `index` of the stream identified by `seed`.

    Uses a Philox counter generator keyed by (seed, index) with a fixed
    draw order, pair couplings first then site fields, so the sample
    does not depend on how many other samples were drawn before it.
    """
    _check_site_count(n)
    for name, value in (("seed", seed), ("index", index)):
        if not isinstance(value, (int, np.integer)) or value < 0 or value >= 2 ** 64:
            raise ValueError(f"{name} must be an integer in [0, 2^64), got {value!r}")
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))
    n_pairs = n * (n - 1) // 2
    draws = rng.standard_normal(n_pairs + n)
    return DisorderSample(seed=int(seed), index=int(index),
                          couplings=draws[:n_pairs], site_fields=draws[n_pairs:])


class GibbsCorrelators:
    """Exact thermal correlator oracle for one disorder sample.

    Enumerates all 2^n configurations once, storing the normalized
    Boltzmann weights for log-weights sqrt(t/n) sum_{i<j} J_ij s_i s_j
    + sum_i (beta_h + sqrt(x) J_i) s_i.  Calling the object with a site
    multiset returns the Gibbs expectation of the corresponding spin
    product; repeated sites are kept literally (s_i^2 = 1 takes care of
    them).
    """

    def __init__(self, sample: DisorderSample, params: SkParams):
        n = sample.n
        _check_site_count(n)
        if sample.couplings.shape != (n * (n - 1) // 2,):
            raise ValueError("couplings length does not match the site count")
        spins, pair_prod, _ = _spin_tables(n)
        log_weights = pair_prod @ (math.sqrt(params.t / n) * sample.couplings)
        log_weights += spins @ (params.beta_h + math.sqrt(params.x) * sample.site_fields)
        log_weights -= log_weights.max()
        weights = np.exp(log_weights)
        self.n = n
        self.sample = sample
        self.params = params
        self.prob = weights / weights.sum()

    def __call__(self, sites) -> float:
        spins, _, _ = _spin_tables(self.n)
        product = self.prob.copy()
        for i in sites:
            if not 0 <= i < self.n:
                raise ValueError(f"site index {i} outside [0, {self.n})")
            product *= spins[:, i]
        return float(product.sum())


def gibbs_correlators(sample: DisorderSample, params: SkParams,
                      n: int | None = None) -> GibbsCorrelators:
    """Build the exact correlator oracle for one sample; n <= 14 guarded."""
    if n is not None and n != sample.n:
        raise ValueError(f"requested n={n} but sample carries n={sample.n}")
    return GibbsCorrelators(sample, params)


def _sample_statistics(prob: np.ndarray, n: int):
    """Replica-factorized overlap statistics for one disorder sample.

    The thermal average over independent replicas factorizes into
    contractions of the one-, two-, three- and four-point correlator
    tensors, each obtained from the probability vector by a single
    matrix product against the enumeration tables.  Cost is
    O(n^4 2^n), dominated by the four-point table.

    Returns (q1, q2, o1, e1, e2) where q1 = O(q12), q2 = O(q12^2),
    o1 = O(q12^2 - 4 q12 q23 + 3 q12 q34),
    e1 = O(q12^3 - 4 q12 q23^2 + 3 q12 q34^2),
    e2 = O(q12^4 - 4 q12^2 q23^2 + 3 q12^2 q34^2),
    with O the thermal average at fixed disorder.
    """
    spins, _, pair_all = _spin_tables(n)
    one_pt = spins.T @ prob
    two_pt = pair_all.T @ prob
    weighted = pair_all * prob[:, None]
    three_pt = weighted.T @ spins
    four_pt = weighted.T @ pair_all

    q1 = float(one_pt @ one_pt) / n
    q2 = float(two_pt @ two_pt) / n ** 2
    q3 = float(np.einsum("ij,ij->", three_pt, three_pt)) / n ** 3
    q4 = float(np.einsum("ij,ij->", four_pt, four_pt)) / n ** 4
    q_q23 = float(one_pt @ (two_pt.reshape(n, n) @ one_pt)) / n ** 2
    q_q23sq = float(two_pt @ (three_pt @ one_pt)) / n ** 3
    q2_q23sq = float(two_pt @ (four_pt @ two_pt)) / n ** 4

    o1 = q2 - 4.0 * q_q23 + 3.0 * q1 * q1
    e1 = q3 - 4.0 * q_q23sq + 3.0 * q1 * q2
    e2 = q4 - 4.0 * q2_q23sq + 3.0 * q2 * q2
    return q1, q2, o1, e1, e2


@dataclass(frozen=True)
class OverlapMoments:
    """Disorder-averaged overlap moments and identity polynomials.

    std_errors line up with (q1, q2, poly_p1, poly_p2, poly_p3,
    poly_p4).  Plain means carry the sample standard deviation over
    sqrt(n_samples); the polynomial combinations involve products of
    disorder means, so their errors come from leave-one-out
    (jackknife) propagation over the same samples.
    """
    n: int
    n_samples: int
    seed: int
    q1: float
    q2: float
    poly_p1: float
    poly_p2: float
    poly_p3: float
    poly_p4: float
    std_errors: tuple
    v_n: float
    v_n_std_error: float


def _jackknife(loo_values: np.ndarray) -> float:
    count = loo_values.shape[0]
    centered = loo_values - loo_values.mean()
    return math.sqrt((count - 1) / count * float(centered @ centered))


def quenched_overlap_moments(params: SkParams, n: int, n_samples: int,
                             seed: int, n_jobs: int = 1) -> OverlapMoments:
    """Average the per-sample overlap statistics over quenched disorder.

    Each sample is an independent unit of work keyed by (seed, index);
    n_jobs > 1 evaluates them in a thread pool (the enumeration is all
    matrix products, which release the interpreter lock).  Results are
    written into a preallocated table by index, so the aggregation
    order, and hence every output bit, is independent of scheduling.
    """
    _check_site_count(n)
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise ValueError(f"need at least 2 disorder samples, got {n_samples}")
    if n_jobs < 1:
        raise ValueError(f"n_jobs must be >= 1, got {n_jobs}")

    def one_sample(index: int):
        oracle = GibbsCorrelators(draw_disorder(seed, index, n), params)
        return _sample_statistics(oracle.prob, n)

    table = np.empty((n_samples, 5))
    if n_jobs == 1:
        for index in range(n_samples):
            table[index] = one_sample(index)
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            for index, row in enumerate(pool.map(one_sample, range(n_samples))):
                table[index] = row

    mean = table.mean(axis=0)
    m_q1, m_q2, m_o1, m_e1, m_e2 = mean

    # leave-one-out means, one row per deleted sample
    loo = (n_samples * mean[None, :] - table) / (n_samples - 1)
    l_q1, l_q2, l_o1, l_e1, l_e2 = loo.T

    sem = table.std(axis=0, ddof=1) / math.sqrt(n_samples)
    p1 = m_e1 - m_q1 * m_o1
    p2 = m_e2 - m_q1 * m_e1
    p3 = m_e2 - m_q1 * m_q1 * m_o1
    p4 = m_e2
    v_n = 0.5 * (m_q2 - m_q1 * m_q1)

    p1_se = _jackknife(l_e1 - l_q1 * l_o1)
    p2_se = _jackknife(l_e2 - l_q1 * l_e1)
    p3_se = _jackknife(l_e2 - l_q1 * l_q1 * l_o1)
    v_n_se = _jackknife(0.5 * (l_q2 - l_q1 * l_q1))

    return OverlapMoments(
        n=n, n_samples=int(n_samples), seed=int(seed),
        q1=float(m_q1), q2=float(m_q2),
        poly_p1=float(p1), poly_p2=float(p2), poly_p3=float(p3), poly_p4=float(p4),
        std_errors=(float(sem[0]), float(sem[1]), float(p1_se),
                    float(p2_se), float(p3_se), float(sem[4])),
        v_n=float(v_n), v_n_std_error=float(v_n_se))


def sk_identity_residuals(params: SkParams, n: int, n_samples: int,
                          seed: int, n_jobs: int = 1) -> OverlapMoments:
    """Conservation-law and gauge polynomial residuals at finite size.

    p1 and p2 are the momentum and energy streaming relations, p3 their
    combination with the squared first moment, and p4 the bare quartic
    combination whose decay holds only with no external field.  All are
    disorder averages of thermal polynomials in the replica overlaps
    and are expected to shrink like 1/n in the high-temperature phase;
    v_n is half the full overlap variance, the potential term whose
    vanishing defines the replica-symmetric regime.

    Identical to quenched_overlap_moments; this entry point exists so
    callers asking for the identity report do not need to know the
    moments carry it.
    """
    return quenched_overlap_moments(params, n, n_samples, seed, n_jobs=n_jobs)
