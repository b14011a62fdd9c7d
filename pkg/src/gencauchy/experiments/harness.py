"""Monte Carlo harness for the normalized-statistic and prediction-ratio
experiments, plus the single-shot subcommands.

Each replicate is a pure function of ``(seed, replicate index, cell)``; the
random streams are keyed by ``(seed, replicate)`` only, so cells that share a
replicate index share locations and noise (common random numbers).  A
consequence is that at ``x = gamma0`` the normalized statistic equals
``sqrt(n/2) (eta' eta / n - 1)`` whatever the practical range, so those rows
coincide across ranges.

Replicates run in a process pool when ``workers > 1``; results are collected
in replicate order, so the output does not depend on the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import math
import time
from typing import Optional
import warnings

import numpy as np
from scipy import special

from .. import equivalence, estimate, predict, simulate
from ..covmodels import LocationSet, generalized_cauchy, practical_range_to_scale
from ..errors import FitError, NotPositiveDefinite, ValidationError
from .config import format_model, parse_model

QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)
FAILURE_FLAG_FRACTION = 0.01
TABLE1_SCALES = (("gamma_hat", None), ("gamma0", 1.0), ("1.25gamma0", 1.25), ("0.75gamma0", 0.75))
TABLE1_COLUMNS = ("range", "x", "n", "replicates", "failures", "flagged",
                  "q05", "q25", "q50", "q75", "q95", "mean", "var")


@dataclass
class ExperimentReport:
    """Rows of one experiment plus run metadata (seed, counts, timing)."""

    kind: str
    columns: tuple
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def run_pool(func, items, workers):
    """``[func(x) for x in items]``, in a process pool when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def summarize(values):
    """Type-7 quantiles, mean and sample variance (``ddof=1``)."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return {k: math.nan for k in ("q05", "q25", "q50", "q75", "q95", "mean", "var")}
    q = np.quantile(v, QUANTILES, method="linear")
    var = float(np.var(v, ddof=1)) if v.size > 1 else math.nan
    return dict(zip(("q05", "q25", "q50", "q75", "q95"), (float(x) for x in q)),
                mean=float(np.mean(v)), var=var)


def normal_reference_row():
    """Closed-form N(0, 1) row (never simulated)."""
    q = [float(special.ndtri(p)) for p in QUANTILES]
    return dict(range="", x="N(0,1)", n="", replicates="", failures="", flagged="",
                q05=q[0], q25=q[1], q50=q[2], q75=q[3], q95=q[4], mean=0.0, var=1.0)


# -- table 1 ----------------------------------------------------------------------

@dataclass(frozen=True)
class Table1Replicate:
    replicate: int
    stats: Optional[dict]
    fit: Optional[estimate.MLFit]
    error: str = ""


def table1_replicate(replicate, seed, practical_range, n, pool_size, delta, lam, sigma2=1.0, dim=1,
                     interval_eps=1e-12, interval_factor=10.0):
    """One replicate: simulate, fit the scale, evaluate the normalized statistic.

    Returns a :class:`Table1Replicate` whose ``stats`` maps each scale choice
    (``gamma_hat``, ``gamma0``, ``1.25gamma0``, ``0.75gamma0``) to the
    statistic, or ``None`` with ``error`` set when the replicate failed.
    """
    gamma0 = practical_range_to_scale("GC", practical_range, delta, lam)
    model = generalized_cauchy(delta, lam, gamma0, sigma2, dim=dim)
    try:
        locs = simulate.sample_uniform_locations(n, dim, seed, pool_size, replicate=replicate)
        z = simulate.simulate_gp(locs, model, seed, replicate=replicate).values
        pl = estimate.ProfileLikelihood(z, locs, delta, lam)
        fit = estimate.fit_scale(z, locs, delta, lam, (interval_eps, interval_factor * gamma0))
        stats = {}
        for name, mult in TABLE1_SCALES:
            if mult is None:
                s2, x = fit.sigma2_hat, fit.gamma_hat
            else:
                x = mult * gamma0
                s2 = pl.sigma2(x)
            stats[name] = estimate.normalized_stat(s2, x, gamma0, sigma2, delta, n)
        return Table1Replicate(replicate, stats, fit)
    except (NotPositiveDefinite, FitError, ArithmeticError) as exc:
        return Table1Replicate(replicate, None, None, f"{type(exc).__name__}: {exc}")


def _table1_task(args):
    rep, kw = args
    return table1_replicate(rep, **kw)


def run_table1(cfg):
    """Distribution of the normalized microergodic statistic per cell."""
    if cfg.experiment != "table1":
        raise ValidationError("run_table1 needs a table1 config")
    t0 = time.perf_counter()
    report = ExperimentReport("table1", TABLE1_COLUMNS)
    for pr in cfg.ranges:
        for n in cfg.n:
            kw = dict(seed=cfg.seed, practical_range=pr, n=n, pool_size=cfg.pool_size, delta=cfg.delta,
                      lam=cfg.lam, sigma2=cfg.sigma2, dim=cfg.dim, interval_eps=cfg.interval_eps,
                      interval_factor=cfg.interval_factor)
            results = run_pool(_table1_task, [(r, kw) for r in range(cfg.replicates)], cfg.workers)
            ok = [r for r in results if r.stats is not None]
            failures = len(results) - len(ok)
            for name, _ in TABLE1_SCALES:
                row = dict(range=pr, x=name, n=n, replicates=len(ok), failures=failures,
                           flagged=int(failures > FAILURE_FLAG_FRACTION * len(results)))
                row.update(summarize([r.stats[name] for r in ok]))
                report.rows.append(row)
    report.rows.append(normal_reference_row())
    report.metadata.update(_meta(cfg, t0))
    return report


# -- table 2 ----------------------------------------------------------------------

def table2_replicate(replicate, seed, delta, practical_range, n, pool_size, lam=5.0, sigma2=1.0,
                     dim=2, supports=(0.5, 1.0, 2.0), site=(0.26, 0.48)):
    """Prediction ratios for one location draw.

    Returns ``(u1 per support multiple, u2)`` or None on a failed factorization.
    """
    gamma1 = practical_range_to_scale("GC", practical_range, delta, lam)
    gc = generalized_cauchy(delta, lam, gamma1, sigma2, dim=dim)
    gw = equivalence.equivalent_gw_model(gc, variance=1.0, d=dim)
    locs = simulate.sample_uniform_locations(n, dim, seed, pool_size, replicate=replicate)
    cache = predict.FactorCache(locs)
    try:
        u1 = tuple(predict.ratio_u1(gc, gw.with_scale(x * gw.scale), locs, site, cache) for x in supports)
        u2 = predict.ratio_u2(gc, gw, locs, site, cache)
    except (NotPositiveDefinite, ArithmeticError):
        return None
    return u1, u2


def _table2_task(args):
    rep, kw = args
    return table2_replicate(rep, **kw)


def run_table2(cfg):
    """Mean prediction-efficiency ratios per (delta, practical range, n)."""
    if cfg.experiment != "table2":
        raise ValidationError("run_table2 needs a table2 config")
    t0 = time.perf_counter()
    columns = ("delta", "range", "n", "beta_star", "replicates", "failures", "flagged") \
        + tuple(f"U1_{x:g}" for x in cfg.supports) + ("U2",)
    report = ExperimentReport("table2", columns)
    for delta in cfg.deltas:
        for pr in cfg.ranges:
            gamma1 = practical_range_to_scale("GC", pr, delta, cfg.lam)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                beta = equivalence.equivalent_gw_support(
                    generalized_cauchy(delta, cfg.lam, gamma1, cfg.sigma2, dim=cfg.dim), d=cfg.dim)
            for n in cfg.n:
                kw = dict(seed=cfg.seed, delta=delta, practical_range=pr, n=n, pool_size=cfg.pool_size,
                          lam=cfg.lam, sigma2=cfg.sigma2, dim=cfg.dim, supports=cfg.supports,
                          site=cfg.site)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", UserWarning)
                    results = run_pool(_table2_task, [(r, kw) for r in range(cfg.replicates)], cfg.workers)
                ok = [r for r in results if r is not None]
                failures = len(results) - len(ok)
                row = dict(delta=delta, range=pr, n=n, beta_star=beta, replicates=len(ok), failures=failures,
                           flagged=int(failures > FAILURE_FLAG_FRACTION * len(results)))
                for i, x in enumerate(cfg.supports):
                    row[f"U1_{x:g}"] = float(np.mean([r[0][i] for r in ok])) if ok else math.nan
                row["U2"] = float(np.mean([r[1] for r in ok])) if ok else math.nan
                report.rows.append(row)
    report.metadata.update(_meta(cfg, t0))
    return report


# -- single-shot subcommands ---------------------------------------------------------

def run_equiv(cfg):
    """Compatibility verdict, microergodic values and solved equivalent parameters."""
    t0 = time.perf_counter()
    true, _ = parse_model(cfg.true, cfg.dim, label="true model")
    working, auto = parse_model(cfg.working, cfg.dim, allow_auto=True, label="working model")
    rows = [dict(key="true", value=format_model(true))]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if auto is not None:
            if true.family.value != "GC":
                raise ValidationError("automatic GW support needs a GC true model")
            s2, mu, kappa = auto
            working = equivalence.equivalent_gw_model(true, kappa, mu, s2, cfg.dim)
        if true.family.value == "GC" and cfg.dim / 2 < true.shape1 < 2:
            rows.append(dict(key="equivalent_mt_alpha", value=equivalence.equivalent_mt_scale(true, 1.0)))
            if true.shape1 >= 1:
                rows.append(dict(key="equivalent_gw_beta",
                                 value=equivalence.equivalent_gw_support(true, None, None, 1.0, cfg.dim)))
        verdict = equivalence.compatible(true, working, cfg.dim)
    rows.insert(1, dict(key="working", value=format_model(working)))
    for label, m in (("true", true), ("working", working)):
        try:
            me = equivalence.microergodic(m)
            rows.append(dict(key=f"microergodic_{label}", value=me.value))
            rows.append(dict(key=f"microergodic_{label}_formula", value=me.formula))
        except ValidationError:
            pass
    rows.append(dict(key="verdict", value=verdict.status))
    for c in verdict.conditions:
        rows.append(dict(key=f"condition_{c.name}", value="pass" if c.passed else "fail"))
    report = ExperimentReport("equiv", ("key", "value"), rows)
    report.metadata.update(_meta(cfg, t0))
    report.metadata["verdict_text"] = str(verdict)
    report.metadata["warnings"] = list(dict.fromkeys(str(w.message) for w in caught))
    return report


def run_simulate(cfg):
    """One realization (two with ``paired``) on uniformly drawn locations."""
    t0 = time.perf_counter()
    model, _ = parse_model(cfg.model, cfg.dim, label="model")
    n = cfg.n[0]
    locs = simulate.sample_uniform_locations(n, cfg.dim, cfg.seed, max(cfg.pool_size, n))
    coords = [f"s{i + 1}" for i in range(cfg.dim)]
    if cfg.paired:
        other, _ = parse_model(cfg.paired, cfg.dim, label="paired model")
        a, b = simulate.simulate_paired(locs, model, other, cfg.seed)
        cols = tuple(coords) + ("value", "value_paired")
        vals = zip(a.values, b.values)
    else:
        a = simulate.simulate_gp(locs, model, cfg.seed)
        cols = tuple(coords) + ("value",)
        vals = ((v,) for v in a.values)
    rows = [dict(zip(cols, tuple(p) + tuple(v))) for p, v in zip(locs.points, vals)]
    report = ExperimentReport("simulate", cols, rows)
    report.metadata.update(_meta(cfg, t0))
    return report


def read_data(path, dim):
    """Read ``s1..sd,value`` columns from a CSV with a header row."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
    except OSError as exc:
        raise OSError(f"cannot read data file {path}: {exc.strerror}") from exc
    coords = [f"s{i + 1}" for i in range(dim)]
    try:
        pts = np.array([[float(r[c]) for c in coords] for r in rows])
        z = np.array([float(r["value"]) for r in rows])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"data file needs columns {', '.join(coords)}, value") from exc
    return LocationSet(pts), z


def run_fit(cfg):
    """Profile-likelihood fit of the GC scale with a microergodic interval."""
    t0 = time.perf_counter()
    locs, z = read_data(cfg.data, cfg.dim)
    if cfg.interval:
        lo, hi = cfg.interval
    else:
        # default: [eps, factor * largest pairwise distance]
        lo, hi = cfg.interval_eps, cfg.interval_factor * float(np.max(locs.distances()))
    fit = estimate.fit_scale(z, locs, cfg.delta, cfg.lam, (lo, hi))
    ci = estimate.microergodic_ci(fit, cfg.delta, cfg.lam, locs.n, cfg.level)
    cols = ("n", "gamma_hat", "sigma2_hat", "profile_loglik", "microergodic", "ci_lower", "ci_upper",
            "at_boundary", "iterations")
    row = dict(n=locs.n, gamma_hat=fit.gamma_hat, sigma2_hat=fit.sigma2_hat, profile_loglik=fit.profile_loglik,
               microergodic=ci.estimate, ci_lower=ci.lower, ci_upper=ci.upper,
               at_boundary=int(fit.at_boundary), iterations=fit.iterations)
    report = ExperimentReport("fit", cols, [row])
    report.metadata.update(_meta(cfg, t0))
    report.metadata["search_interval"] = list(fit.search_interval)
    return report


def run_predict(cfg):
    """Kriging prediction at ``site`` with true, working and misspecified errors."""
    t0 = time.perf_counter()
    locs, z = read_data(cfg.data, cfg.dim)
    true, _ = parse_model(cfg.true, cfg.dim, label="true model")
    working, _ = parse_model(cfg.working, cfg.dim, label="working model")
    if len(cfg.site) != cfg.dim:
        raise ValidationError("prediction site dimension must match dim")
    a = predict.assess(true, working, locs, cfg.site, z)
    cols = ("prediction", "mse_true", "mse_working", "mse_misspecified", "U1", "U2")
    row = dict(prediction=a.prediction, mse_true=a.mse_under["true"], mse_working=a.mse_under["working"],
               mse_misspecified=a.mse_under["misspecified"],
               U1=a.u1 if a.u1 is not None else math.nan, U2=a.u2 if a.u2 is not None else math.nan)
    report = ExperimentReport("predict", cols, [row])
    report.metadata.update(_meta(cfg, t0))
    return report


RUNNERS = {"table1": run_table1, "table2": run_table2, "equiv": run_equiv,
           "simulate": run_simulate, "fit": run_fit, "predict": run_predict}


def _meta(cfg, t0):
    return dict(experiment=cfg.experiment, seed=cfg.seed, replicates=cfg.replicates,
                workers=cfg.workers, runtime_seconds=round(time.perf_counter() - t0, 3))
