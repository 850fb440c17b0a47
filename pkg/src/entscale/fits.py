"""Least-squares fits shared by the probes and reports."""
import numpy as np


def r_squared(y, pred):
    y = np.asarray(y, dtype=float)
    pred = np.asarray(pred, dtype=float)
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def line_fit(x, y):
    """(slope, intercept, r_squared) of an ordinary least-squares line."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    return float(slope), float(intercept), r_squared(y, design @ [slope, intercept])


class TailFitFlagged(Exception):
    """Raised when no spectrum offers a usable exponential tail."""


def schmidt_tail_fit(spectra):
    """Exponential tail of Schmidt spectra: s_j ~ 2^{kappa|t| - v j}.

    spectra: iterable of (t, coefficients). Per time, the fit takes the
    coefficients past the knee (the first j with s_j < s_0 / 10) and
    regresses log2 s_j on j: slope -v_t, intercept read as kappa|t|. The
    pooled fit shares one slope across times and recovers kappa from the
    intercepts through the origin. Returns a dict with per_t rows
    (t, v_t, intercept_t, r2_t, flagged) and pooled v, kappa, r2.
    """
    spectra = [(float(t), np.asarray(s, dtype=float)) for t, s in spectra]
    if len(spectra) < 3:
        raise ValueError("need spectra at >= 3 times")
    if any(s.size < 8 for _, s in spectra):
        raise ValueError("need >= 8 coefficients per spectrum")

    per_t = []
    usable = []
    for t, s in spectra:
        knee = None
        for j, val in enumerate(s):
            if val < s[0] / 10.0:
                knee = j
                break
        if knee is None:
            per_t.append((t, float("nan"), float("nan"), float("nan"), True))
            continue
        jj = np.arange(knee, s.size)
        tail = s[knee:]
        keep = tail > 1e-30
        jj, tail = jj[keep], tail[keep]
        if jj.size < 2:
            per_t.append((t, float("nan"), float("nan"), float("nan"), True))
            continue
        slope, intercept, r2 = line_fit(jj, np.log2(tail))
        per_t.append((t, -slope, intercept, r2, False))
        usable.append((t, jj, np.log2(tail)))

    if not usable:
        raise TailFitFlagged("every spectrum is rank deficient past the knee")

    # pooled: one shared slope, one intercept per time
    n_rows = sum(jj.size for _, jj, _ in usable)
    design = np.zeros((n_rows, len(usable) + 1))
    y = np.zeros(n_rows)
    row = 0
    for col, (t, jj, logs) in enumerate(usable):
        block = slice(row, row + jj.size)
        design[block, 0] = -jj
        design[block, col + 1] = 1.0
        y[block] = logs
        row += jj.size
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    v = float(coef[0])
    intercepts = coef[1:]
    times = np.array([abs(t) for t, _, _ in usable])
    kappa = float(np.sum(intercepts * times) / np.sum(times ** 2)) if np.any(times > 0) else 0.0
    r2 = r_squared(y, design @ coef)
    return {"per_t": tuple(per_t), "v": v, "kappa": kappa, "r_squared": r2}


def entropy_envelope_fit(t_values, s_values):
    """Line c0 + c1|t| through the running maximum of S.

    Returns (c0, c1, max_positive_residual) where the residual is measured on
    the raw S values against the fitted line, so a positive value means some
    point pokes above the envelope.
    """
    t_values = np.asarray([abs(float(t)) for t in t_values])
    s_values = np.asarray(s_values, dtype=float)
    if t_values.size < 5:
        raise ValueError("need at least 5 time points")
    order = np.argsort(t_values)
    tt, ss = t_values[order], s_values[order]
    running = np.maximum.accumulate(ss)
    c1, c0, _ = line_fit(tt, running)
    residual = float(np.max(ss - (c0 + c1 * tt)))
    return float(c0), float(c1), residual
