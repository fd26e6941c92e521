"""Monte Carlo estimates of pattern frequencies in random walks with i.i.d. steps.

Randomness comes from numpy's counter-based Philox generator. Trials are cut
into fixed-size chunks and chunk c draws from the stream keyed by
``SeedSequence([seed, c])``, so the counts depend only on (seed, trials) and
never on how chunks are spread over workers.
"""

from __future__ import annotations

import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .equivalence import EquivalenceClass
from .errors import LengthMismatch, SizeTooLarge
from .perm import Permutation

CHUNK = 1 << 16
MAX_WALK_N = 15  # pattern codes n^n must fit in int64
FORMAT_VERSION = 1

# kind -> (parameter names, defaults for trailing optional parameters)
KINDS: dict[str, tuple[tuple[str, ...], tuple[float, ...]]] = {
    "uniform": (("lo", "hi"), ()),
    "gaussian": (("mean", "sd"), ()),
    "exponential": (("rate", "loc"), (0.0,)),
    "cauchy": (("loc", "scale"), ()),
    "lognormal": (("mu", "sigma"), ()),
    "shifted-uniform": (("lo", "hi"), ()),
}


def _fmt(x: float) -> str:
    return format(x, "g")


@dataclass(frozen=True)
class StepDistribution:
    """A continuous step law, written ``kind:p1,p2`` on the command line."""

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution {self.kind!r}; choose from {', '.join(KINDS)}")
        names, defaults = KINDS[self.kind]
        p = tuple(float(x) for x in self.params)
        if not len(names) - len(defaults) <= len(p) <= len(names):
            raise ValueError(f"{self.kind} takes parameters {','.join(names)}")
        p = p + defaults[len(p) - (len(names) - len(defaults)) :]
        if not all(math.isfinite(x) for x in p):
            raise ValueError("distribution parameters must be finite")
        object.__setattr__(self, "params", p)
        a, b = p[0], p[1]
        if self.kind in ("uniform", "shifted-uniform") and not a < b:
            raise ValueError(f"{self.kind} needs lo < hi")
        if self.kind == "shifted-uniform" and not a > 0:
            raise ValueError("shifted-uniform needs lo > 0")
        if self.kind in ("gaussian", "cauchy", "lognormal") and not b > 0:
            raise ValueError(f"{self.kind} needs a positive scale")
        if self.kind == "exponential" and not a > 0:
            raise ValueError("exponential needs rate > 0")

    @classmethod
    def parse(cls, text: str) -> StepDistribution:
        kind, _, rest = text.strip().partition(":")
        try:
            params = tuple(float(x) for x in rest.split(",")) if rest else ()
        except ValueError:
            raise ValueError(f"malformed distribution parameters in {text!r}") from None
        return cls(kind, params)

    @property
    def label(self) -> str:
        return f"{self.kind}:{','.join(_fmt(x) for x in self.params)}"

    def __str__(self) -> str:
        return self.label

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        a, b = self.params[0], self.params[1]
        if self.kind in ("uniform", "shifted-uniform"):
            return rng.uniform(a, b, size)
        if self.kind == "gaussian":
            return rng.normal(a, b, size)
        if self.kind == "exponential":
            return rng.exponential(1.0 / a, size) + b
        if self.kind == "cauchy":
            return a + b * rng.standard_cauchy(size)
        return rng.lognormal(a, b, size)


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def _weights(n: int) -> np.ndarray:
    return n ** np.arange(n - 1, -1, -1, dtype=np.int64)


def decode(code: int, n: int) -> Permutation:
    digits = []
    for _ in range(n):
        code, r = divmod(code, n)
        digits.append(r + 1)
    return Permutation._trusted(tuple(reversed(digits)))


def encode(pi: Permutation) -> int:
    n = len(pi)
    code = 0
    for x in pi.entries:
        code = code * n + (x - 1)
    return code


def _draw_codes(dist: StepDistribution, n: int, size: int, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Pattern codes for ``size`` walks, redrawing any walk with a repeated value."""
    if n == 1:
        return np.zeros(size, dtype=np.int64), 0
    weights = _weights(n)
    codes = np.empty(size, dtype=np.int64)
    todo = np.arange(size)
    rejected = 0
    while todo.size:
        m = todo.size
        walk = np.zeros((m, n))
        np.cumsum(dist.sample(rng, (m, n - 1)), axis=1, out=walk[:, 1:])
        order = np.argsort(walk, axis=1, kind="stable")
        tie = (np.diff(np.take_along_axis(walk, order, axis=1), axis=1) == 0).any(axis=1)
        ranks = np.empty_like(order)
        np.put_along_axis(ranks, order, np.broadcast_to(np.arange(n), (m, n)), axis=1)
        ok = ~tie
        codes[todo[ok]] = ranks[ok] @ weights
        rejected += int(tie.sum())
        todo = todo[tie]
    return codes, rejected


def sample_pattern(dist: StepDistribution, n: int, rng: np.random.Generator) -> tuple[Permutation, int]:
    """One pattern and the number of tied walks rejected before it."""
    codes, rejected = _draw_codes(dist, n, 1, rng)
    return decode(int(codes[0]), n), rejected


def _count_chunk(args: tuple[StepDistribution, int, int, int, int]) -> tuple[dict[int, int], int]:
    dist, n, seed, chunk, size = args
    codes, rejected = _draw_codes(dist, n, size, _rng(seed, chunk))
    values, counts = np.unique(codes, return_counts=True)
    return dict(zip(values.tolist(), counts.tolist())), rejected


@dataclass
class FrequencyTable:
    n: int
    trials: int
    seed: int
    distribution: StepDistribution
    counts: dict[Permutation, int]
    tie_rejections: int = 0

    def count(self, pi: Permutation) -> int:
        return self.counts.get(pi, 0)

    def frequency(self, pi: Permutation) -> float:
        return self.count(pi) / self.trials

    def header(self) -> str:
        return (
            f"# walkpatterns frequency-table v{FORMAT_VERSION}; n={self.n}; trials={self.trials}; "
            f"seed={self.seed}; dist={self.distribution.label}; tie_rejections={self.tie_rejections}"
        )

    def to_csv(self, classes: Optional[Sequence[EquivalenceClass]] = None) -> str:
        """One row per pattern of S_n (zero counts included) in lexicographic order."""
        rep = {}
        for cl in classes or ():
            for m in cl.members:
                rep[m] = cl.representative
        buf = io.StringIO()
        buf.write(self.header() + "\n")
        buf.write("pattern,count,frequency,class_representative\n")
        for pi in Permutation.all(self.n):
            c = self.count(pi)
            r = rep.get(pi)
            buf.write(f"{pi},{c},{c / self.trials:.8f},{'' if r is None else r}\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "format": f"frequency-table/{FORMAT_VERSION}",
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "distribution": {"kind": self.distribution.kind, "params": list(self.distribution.params)},
            "tie_rejections": self.tie_rejections,
            "counts": {str(pi): c for pi, c in sorted(self.counts.items())},
        }


def estimate_frequencies(
    dist: StepDistribution, n: int, trials: int, seed: int, workers: int = 1
) -> FrequencyTable:
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_WALK_N:
        raise SizeTooLarge(f"n={n} exceeds {MAX_WALK_N} for simulation")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    jobs = [
        (dist, n, seed, c, min(CHUNK, trials - c * CHUNK)) for c in range(math.ceil(trials / CHUNK))
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_chunk, jobs))
    else:
        parts = [_count_chunk(job) for job in jobs]
    total: Counter[int] = Counter()
    rejected = 0
    for counts, rej in parts:
        total.update(counts)
        rejected += rej
    return FrequencyTable(
        n=n,
        trials=trials,
        seed=seed,
        distribution=dist,
        counts={decode(code, n): c for code, c in sorted(total.items())},
        tie_rejections=rejected,
    )


@dataclass(frozen=True)
class ClassRow:
    representative: Permutation
    members: tuple[Permutation, ...]
    counts: tuple[int, ...]
    statistic: float
    df: int
    p_value: float
    rejected: bool

    @property
    def pooled_count(self) -> int:
        return sum(self.counts)


@dataclass
class ClassReport:
    n: int
    trials: int
    seed: int
    distribution: StepDistribution
    alpha: float
    rows: list[ClassRow]
    missing_patterns: list[Permutation] = field(default_factory=list)

    @property
    def homogeneous(self) -> bool:
        return not any(r.rejected for r in self.rows)

    @property
    def rejected_rows(self) -> list[ClassRow]:
        return [r for r in self.rows if r.rejected]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            f"# walkpatterns class-report v{FORMAT_VERSION}; n={self.n}; trials={self.trials}; "
            f"seed={self.seed}; dist={self.distribution.label}; alpha={_fmt(self.alpha)}\n"
        )
        buf.write("representative,size,pooled_count,pooled_frequency,chi2,df,p_value,rejected,members\n")
        for r in self.rows:
            members = " ".join(f"{m}:{c}" for m, c in zip(r.members, r.counts))
            buf.write(
                f"{r.representative},{len(r.members)},{r.pooled_count},"
                f"{r.pooled_count / self.trials:.8f},{r.statistic:.6f},{r.df},{r.p_value:.6g},"
                f"{int(r.rejected)},{members}\n"
            )
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "format": f"class-report/{FORMAT_VERSION}",
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "distribution": {"kind": self.distribution.kind, "params": list(self.distribution.params)},
            "alpha": self.alpha,
            "homogeneous": self.homogeneous,
            "classes": [
                {
                    "representative": str(r.representative),
                    "members": {str(m): c for m, c in zip(r.members, r.counts)},
                    "chi2": r.statistic,
                    "df": r.df,
                    "p_value": r.p_value,
                    "rejected": r.rejected,
                }
                for r in self.rows
            ],
            "missing_patterns": [str(m) for m in self.missing_patterns],
        }


def homogeneity(counts: Sequence[int]) -> tuple[float, int, float]:
    """Pearson chi-square of ``counts`` against their common mean: (statistic, df, p-value)."""
    df = len(counts) - 1
    total = sum(counts)
    if df == 0 or total == 0:
        return 0.0, df, 1.0
    mean = total / len(counts)
    stat = sum((c - mean) ** 2 for c in counts) / mean
    return stat, df, float(stats.chi2.sf(stat, df))


def class_report(freqs: FrequencyTable, classes: Sequence[EquivalenceClass], alpha: float = 1e-3) -> ClassReport:
    """Test every class for equal member frequencies.

    A class is flagged when its chi-square statistic exceeds the (1 - alpha)
    quantile of the chi-square law with (size - 1) degrees of freedom.
    """
    seen: set[Permutation] = set()
    rows = []
    for cl in classes:
        if cl.n != freqs.n:
            raise LengthMismatch(f"class of length {cl.n} against a table for n={freqs.n}")
        seen.update(cl.members)
        counts = tuple(freqs.count(m) for m in cl.members)
        stat, df, p = homogeneity(counts)
        rejected = df > 0 and stat > float(stats.chi2.ppf(1 - alpha, df))
        rows.append(ClassRow(cl.representative, cl.members, counts, stat, df, p, rejected))
    if len(seen) != math.factorial(freqs.n) or sum(len(cl) for cl in classes) != len(seen):
        raise ValueError("classes must partition S_n")
    missing = [pi for pi in Permutation.all(freqs.n) if freqs.count(pi) == 0]
    return ClassReport(freqs.n, freqs.trials, freqs.seed, freqs.distribution, alpha, rows, missing)


@dataclass
class DiscriminationReport:
    """How well a family of step laws tells patterns apart.

    ``z[a, b]`` is the largest standardized frequency gap between patterns a
    and b (lexicographic indices) over all distributions, and ``best[a, b]``
    the index of the distribution achieving it.
    """

    n: int
    trials: int
    seed: int
    distributions: list[StepDistribution]
    z_threshold: float
    patterns: list[Permutation]
    class_index: list[int]
    z: np.ndarray
    best: np.ndarray

    def _idx(self, pi: Permutation) -> int:
        return self.patterns.index(pi)

    def pair(self, pi: Permutation, tau: Permutation) -> tuple[float, Optional[StepDistribution]]:
        a, b = self._idx(pi), self._idx(tau)
        if not self.distributions:
            return 0.0, None
        return float(self.z[a, b]), self.distributions[int(self.best[a, b])]

    def separated(self, pi: Permutation, tau: Permutation) -> bool:
        return self.pair(pi, tau)[0] > self.z_threshold

    def _pairs(self, same_class: bool) -> list[tuple[int, int]]:
        m = len(self.patterns)
        ci = self.class_index
        return [(a, b) for a in range(m) for b in range(a + 1, m) if (ci[a] == ci[b]) == same_class]

    def unseparated_cross_pairs(self) -> list[tuple[Permutation, Permutation]]:
        """Pairs in different classes that no listed distribution tells apart."""
        return [
            (self.patterns[a], self.patterns[b])
            for a, b in self._pairs(False)
            if not self.z[a, b] > self.z_threshold
        ]

    def separated_within_class(self) -> list[tuple[Permutation, Permutation]]:
        return [
            (self.patterns[a], self.patterns[b])
            for a, b in self._pairs(True)
            if self.z[a, b] > self.z_threshold
        ]

    def summary(self) -> str:
        cross = self._pairs(False)
        within = self._pairs(True)
        sep = sum(1 for a, b in cross if self.z[a, b] > self.z_threshold)
        max_within = max((float(self.z[a, b]) for a, b in within), default=0.0)
        return (
            f"n={self.n} trials={self.trials} seed={self.seed} "
            f"dists={' '.join(d.label for d in self.distributions)}\n"
            f"cross-class pairs separated: {sep}/{len(cross)} (z > {_fmt(self.z_threshold)})\n"
            f"within-class pairs: {len(within)}, largest z {max_within:.3f}"
        )


def _pair_z(counts: np.ndarray, trials: int) -> np.ndarray:
    p = counts / trials
    diff = p[:, None] - p[None, :]
    var = (p[:, None] + p[None, :] - diff**2) / trials
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.abs(diff) / np.sqrt(var)
    z[(diff == 0)] = 0.0
    return z


def cross_distribution_discrimination(
    n: int,
    dists: Sequence[StepDistribution],
    trials: int,
    seed: int,
    classes: Sequence[EquivalenceClass],
    z_threshold: float = 5.0,
    workers: int = 1,
) -> DiscriminationReport:
    """Evidence on whether patterns from different classes ever have different frequencies.

    This never asserts anything; it reports, for every pair of patterns, the
    largest two-sample z-score across the listed step laws.
    """
    if n > 6:
        raise SizeTooLarge(f"n={n} exceeds 6 for the pairwise discrimination report")
    patterns = list(Permutation.all(n))
    where = {}
    for idx, cl in enumerate(classes):
        for m in cl.members:
            where[m] = idx
    if len(where) != len(patterns):
        raise ValueError("classes must partition S_n")
    m = len(patterns)
    z = np.zeros((m, m))
    best = np.zeros((m, m), dtype=np.int64)
    for d_idx, dist in enumerate(dists):
        table = estimate_frequencies(dist, n, trials, seed, workers)
        counts = np.array([table.count(pi) for pi in patterns], dtype=float)
        zd = _pair_z(counts, trials)
        better = zd > z
        z[better] = zd[better]
        best[better] = d_idx
    return DiscriminationReport(
        n, trials, seed, list(dists), z_threshold, patterns, [where[p] for p in patterns], z, best
    )


def plot_rows(table: FrequencyTable, classes: Sequence[EquivalenceClass]) -> list[tuple[str, float, str]]:
    """(pattern, frequency, class representative) triples for external plotting."""
    rep = {m: cl.representative for cl in classes for m in cl.members}
    return [(str(pi), table.frequency(pi), str(rep[pi])) for pi in Permutation.all(table.n)]


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


__all__ = [
    "StepDistribution",
    "FrequencyTable",
    "ClassReport",
    "ClassRow",
    "DiscriminationReport",
    "sample_pattern",
    "estimate_frequencies",
    "class_report",
    "cross_distribution_discrimination",
    "homogeneity",
    "plot_rows",
]
