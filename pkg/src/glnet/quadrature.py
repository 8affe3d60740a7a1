"""Adaptive Simpson quadrature."""
from __future__ import annotations

import math

from .errors import NumericError

MAX_SUBINTERVALS = 10**6


def adaptive_simpson(f, a, b, tol=1e-9, max_subintervals=MAX_SUBINTERVALS):
    """Integrate ``f`` over ``[a, b]`` to absolute error ``tol``.

    Intervals are bisected until the two-panel and one-panel Simpson
    estimates agree to ``15 * tol_local``; the accepted value carries the
    Richardson correction. Raises ``NumericError`` once more than
    ``max_subintervals`` intervals have been created.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_subintervals)

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    created = 1
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        h = (hi - lo) / 12.0
        left = h * (flo + 4.0 * flm + fmid)
        right = h * (fmid + 4.0 * frm + fhi)
        diff = left + right - est
        # depth >= 2 keeps a lucky agreement of the coarsest panels from ending the search
        if depth >= 2 and abs(diff) <= 15.0 * eps or mid in (lo, hi):
            total += left + right + diff / 15.0
            continue
        created += 2
        if created > max_subintervals:
            raise NumericError(
                f"adaptive Simpson on [{a}, {b}] exceeded {max_subintervals} subintervals"
            )
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    if not math.isfinite(total):
        raise NumericError(f"non-finite integral on [{a}, {b}]")
    return total
