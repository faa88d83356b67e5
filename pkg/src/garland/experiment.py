"""Batch experiments over the random models: one seeded trial per index,
each analyzed at level dim - 1 and checked against the soundness
implications."""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .cohomology import theorem_check
from .complex import face_poset, validate
from .generators import GeneratorError, RandomModelParams, sample
from .rng import derive_seed

COLUMNS = [
    "trialIndex", "derivedSeed", "model", "h", "d", "k", "sampleSeed", "attempts",
    "resamples", "fVector", "level", "components", "verdict", "threshold", "minGap",
    "alpha", "beta", "betti", "bettiAll", "dimL", "dimT", "dimLplusT", "h0B",
    "theoremConsistent", "timeMs",
]
TIMING_COLUMNS = ("timeMs",)
MAX_RESAMPLES = 1000


class TrialError(RuntimeError):
    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


@dataclass
class ExperimentRecord:
    trialIndex: int
    derivedSeed: int
    model: str
    h: int
    d: int
    k: int
    sampleSeed: int
    attempts: int
    resamples: int
    fVector: str
    level: int
    components: int
    verdict: str
    threshold: str
    minGap: float
    alpha: float
    beta: float
    betti: int
    bettiAll: str
    dimL: int
    dimT: int
    dimLplusT: int
    h0B: int
    theoremConsistent: bool
    timeMs: int

    def row(self):
        out = []
        for name in COLUMNS:
            x = getattr(self, name)
            out.append(_fmt(x))
        return out


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "inf" if x == math.inf else "-inf" if x == -math.inf else repr(x)
    return str(x)


def soundness(alpha, beta, h0, betti, dim_lt, verdict):
    """The three implications every instance must satisfy."""
    return ((not beta < alpha) or h0 == 0) and \
        (verdict != "holds" or betti == dim_lt) and \
        h0 == betti - dim_lt


def run_trial(model, h, d, k, master_seed, index, rank_mode="exact", band=None, tol=None,
              max_resamples=MAX_RESAMPLES):
    start = time.perf_counter()
    seed = derive_seed(master_seed, index)
    attempts = resamples = 0
    for r in range(max_resamples + 1):
        sample_seed = seed if r == 0 else derive_seed(seed, r)
        try:
            s = sample(RandomModelParams(model, h, d, k, sample_seed))
        except GeneratorError as exc:
            raise TrialError("generate", str(exc)) from None
        attempts += s.attempts
        if validate(s.complex).ok:
            break
        resamples += 1
    else:
        raise TrialError("validate", f"no valid sample after {max_resamples} resamples "
                                     f"(model={model}, h={h}, d={d}, k={k})")
    fp = face_poset(s.complex)
    level = fp.dim - 1
    if level < 0:
        raise TrialError("validate", f"{model} with k={k} yields a {fp.dim}-dimensional complex; "
                                     "analysis needs dimension at least 1")
    tc = theorem_check(fp, level, mode=rank_mode, band=band, tol=tol)
    rep, ab, ver = tc.report, tc.alpha_beta, tc.verdict
    gaps = [g for _, g, _ in ver.per_component]
    b = rep.betti[level]
    return ExperimentRecord(
        trialIndex=index, derivedSeed=seed, model=model, h=h, d=d, k=k,
        sampleSeed=sample_seed, attempts=attempts, resamples=resamples,
        fVector=";".join(map(str, s.complex.f_vector())), level=level,
        components=len(gaps), verdict=ver.overall, threshold=str(ver.threshold),
        minGap=min(gaps, default=math.inf), alpha=ab.alpha, beta=ab.beta,
        betti=b, bettiAll=";".join(str(rep.betti[x]) for x in sorted(rep.betti)),
        dimL=rep.dimL, dimT=rep.dimT, dimLplusT=rep.dimLplusT, h0B=ab.h0B,
        theoremConsistent=soundness(ab.alpha, ab.beta, ab.h0B, b, rep.dimLplusT, ver.overall),
        timeMs=int(round((time.perf_counter() - start) * 1000)),
    )


def _trial_star(args):
    return run_trial(*args)


def worker_count(threads=None):
    if threads is None:
        threads = int(os.environ.get("GARLAND_THREADS", "1") or 1)
    return max(1, int(threads))


def run_experiment(model, h, d, k, trials, seed, threads=None, rank_mode="exact", band=None, tol=None):
    """Records in trialIndex order.  Trials run in worker processes when
    more than one worker is requested; results do not depend on the count."""
    jobs = [(model, h, d, k, seed, i, rank_mode, band, tol) for i in range(trials)]
    n = worker_count(threads)
    if n == 1 or trials <= 1:
        return [_trial_star(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(n, trials)) as pool:
        return list(pool.map(_trial_star, jobs))


def to_csv(records, include_timing=True):
    cols = [c for c in COLUMNS if include_timing or c not in TIMING_COLUMNS]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(cols)
    for r in records:
        row = dict(zip(COLUMNS, r.row()))
        wr.writerow([row[c] for c in cols])
    return buf.getvalue()


def summarize(records):
    n = len(records)
    rates = {}
    for r in records:
        rates[r.verdict] = rates.get(r.verdict, 0) + 1
    buckets = {}
    for r in records:
        key = "inf" if r.minGap == math.inf else f"{min(math.floor(r.minGap * 10), 19) / 10:.1f}"
        buckets[key] = buckets.get(key, 0) + 1
    return {
        "trials": n,
        "verdictRates": {v: c / n for v, c in sorted(rates.items())} if n else {},
        "gapHistogram": dict(sorted(buckets.items())),
        "meanBetti": sum(r.betti for r in records) / n if n else 0.0,
        "totalAttempts": sum(r.attempts for r in records),
        "totalResamples": sum(r.resamples for r in records),
        "allConsistent": all(r.theoremConsistent for r in records),
        "inconsistentTrials": [r.trialIndex for r in records if not r.theoremConsistent],
    }


def record_dict(r):
    return asdict(r)
