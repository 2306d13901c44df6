"""Pure-Python per-slot kernels.

Mirrors ``_core.pyx`` statement for statement so both backends agree to the
last bit on the same libm. Everything here works on flat floats; the public
wrappers in :mod:`d2dstream.optimizer` build dataclasses around the tuples.

A decision tuple is ``(priority, p_b1, p_b2, p_d, r1, r2)``.
"""
import math

import numpy as np

LN2 = math.log(2.0)
REL_TOL = 1e-9
EXP_CUTOFF = 709.0
# sum rates this close count as a tie, so rounding never decides between
# modes that both reach beta1 + beta2
TIE_TOL = 1e-12

CELLULAR = 1
DEDICATED = 2
REUSE = 3

CASE_BS_FIXED = 1
CASE_D2D_FIXED = 2


def rate(bw, snr):
    return bw * math.log1p(snr) / LN2


def snr_for(r, bw):
    """SNR needed for rate ``r`` on bandwidth ``bw``, i.e. 2**(r/bw) - 1."""
    x = r * LN2 / bw
    # expm1 overflows just above 709.78; C returns inf there, Python raises
    return math.expm1(x) if x < EXP_CUTOFF else math.inf


def exceeds(new, old):
    return new - old > TIE_TOL * abs(old)


def served(r, a, b):
    return r >= a - REL_TOL * b and r <= b + REL_TOL * b


def priority(ok1, ok2):
    if ok1 and ok2:
        return 1
    if ok1 or ok2:
        return 2
    return 3


def reuse_rates(B, N0, z11, z12, z21, z22, p1, p2):
    noise = N0 * B
    r1 = rate(B, p1 * z11 / (p2 * z21 + noise))
    r2 = rate(B, p2 * z22 / (p1 * z12 + noise))
    return r1, r2


def solve_cellular(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2):
    bw = B / 3.0
    noise = N0 * bw
    pb1 = 0.0
    pb2 = 0.0
    pd = 0.0
    if z11 > 0.0 and b1 > 0.0:
        r = min(rate(bw, pbmax * z11 / noise), b1)
        pb1 = min(snr_for(r, bw) * noise / z11, pbmax)
    if z12 > 0.0 and z23 > 0.0 and b2 > 0.0:
        r = min(rate(bw, pdmax * z23 / noise), rate(bw, pbmax * z12 / noise), b2)
        snr = snr_for(r, bw)
        pb2 = min(snr * noise / z12, pbmax)
        # same as (z12 / z23) * pb2, without the extra rounding
        pd = min(snr * noise / z23, pdmax)
    r1 = rate(bw, pb1 * z11 / noise)
    r2 = min(rate(bw, pd * z23 / noise), rate(bw, pb2 * z12 / noise))
    return (priority(served(r1, a1, b1), served(r2, a2, b2)), pb1, pb2, pd, r1, r2)


def solve_dedicated(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2):
    bw = B / 2.0
    noise = N0 * bw
    pb1 = 0.0
    pd = 0.0
    if z11 > 0.0 and b1 > 0.0:
        r = min(rate(bw, pbmax * z11 / noise), b1)
        pb1 = min(snr_for(r, bw) * noise / z11, pbmax)
    if z22 > 0.0 and b2 > 0.0:
        r = min(rate(bw, pdmax * z22 / noise), b2)
        pd = min(snr_for(r, bw) * noise / z22, pdmax)
    r1 = rate(bw, pb1 * z11 / noise)
    r2 = rate(bw, pd * z22 / noise)
    return (priority(served(r1, a1, b1), served(r2, a2, b2)), pb1, 0.0, pd, r1, r2)


def solve_reuse_interior(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2):
    """Both rates pinned at their upper targets; ``None`` when out of reach."""
    noise = N0 * B
    s1 = snr_for(b1, B)
    s2 = snr_for(b2, B)
    det = z11 * z22 - s1 * s2 * z12 * z21
    if not det > 0.0:
        return None
    p1 = s1 * (z22 + s2 * z21) * noise / det
    p2 = s2 * (z11 + s1 * z12) * noise / det
    if 0.0 <= p1 <= pbmax and 0.0 <= p2 <= pdmax:
        return p1, p2
    return None


def _own_interval(pf, g_if, g_own, noise, a, b, cap, B):
    # Free transmitter's own link, SINR = x*g_own / (pf*g_if + noise): increasing in x.
    if g_own > 0.0:
        scale = (noise + pf * g_if) / g_own
        lo = snr_for(a, B) * scale
        hi = snr_for(b, B) * scale
    elif served(0.0, a, b):
        lo, hi = 0.0, cap
    else:
        return math.inf, -math.inf
    return max(0.0, lo), min(cap, hi)


def _fixed_interval(pf, g_fix, g_x, noise, a, b, cap, B):
    # Fixed transmitter's link, SINR = pf*g_fix / (x*g_x + noise): decreasing in x.
    signal = pf * g_fix
    if g_x > 0.0 and signal > 0.0:
        sb = snr_for(b, B)
        sa = snr_for(a, B)
        lo = (signal / sb - noise) / g_x if sb > 0.0 else math.inf
        hi = (signal / sa - noise) / g_x if sa > 0.0 else math.inf
    elif served(rate(B, signal / noise), a, b):
        lo, hi = 0.0, cap
    else:
        return math.inf, -math.inf
    return max(0.0, lo), min(cap, hi)


def solve_reuse_boundary(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2, case):
    """Best point on one upper edge of the power box.

    ``case == 1`` pins the BS at ``pbmax`` and frees the D2D power; ``case == 2``
    pins D1 at ``pdmax`` and frees the BS power. ``p_b2`` is always 0.
    """
    noise = N0 * B
    if case == CASE_BS_FIXED:
        cap = pdmax
        lo1, hi1 = _fixed_interval(pbmax, z11, z21, noise, a1, b1, cap, B)
        lo2, hi2 = _own_interval(pbmax, z12, z22, noise, a2, b2, cap, B)
    else:
        cap = pbmax
        lo1, hi1 = _own_interval(pdmax, z21, z11, noise, a1, b1, cap, B)
        lo2, hi2 = _fixed_interval(pdmax, z22, z12, noise, a2, b2, cap, B)

    def total(x):
        if case == CASE_BS_FIXED:
            r1, r2 = reuse_rates(B, N0, z11, z12, z21, z22, pbmax, x)
        else:
            r1, r2 = reuse_rates(B, N0, z11, z12, z21, z22, x, pdmax)
        return r1 + r2

    ok1 = lo1 <= hi1
    ok2 = lo2 <= hi2
    lo = max(lo1, lo2)
    hi = min(hi1, hi2)
    if ok1 and ok2 and lo <= hi:
        pri = 1
        x = lo if total(lo) > total(hi) else hi
    elif ok1 or ok2:
        pri = 2
        cands = []
        if ok1:
            cands += [lo1, hi1]
        if ok2:
            cands += [lo2, hi2]
        x = cands[0]
        best = total(x)
        for c in cands[1:]:
            v = total(c)
            if v > best:
                x, best = c, v
    else:
        pri = 3
        x = 0.0 if total(0.0) > total(cap) else cap

    if case == CASE_BS_FIXED:
        p1, p2 = pbmax, x
    else:
        p1, p2 = x, pdmax
    r1, r2 = reuse_rates(B, N0, z11, z12, z21, z22, p1, p2)
    return (pri, p1, 0.0, p2, r1, r2)


def solve_reuse(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2):
    args = (B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2)
    inner = solve_reuse_interior(*args)
    if inner is not None:
        p1, p2 = inner
        r1, r2 = reuse_rates(B, N0, z11, z12, z21, z22, p1, p2)
        return (1, p1, 0.0, p2, r1, r2)
    d1 = solve_reuse_boundary(*args, CASE_BS_FIXED)
    d2 = solve_reuse_boundary(*args, CASE_D2D_FIXED)
    if d2[0] < d1[0] or (d2[0] == d1[0] and exceeds(d2[4] + d2[5], d1[4] + d1[5])):
        return d2
    return d1


def better(d, best):
    """True when ``d`` beats ``best``: lower priority, then clearly higher R_tot."""
    if d[0] != best[0]:
        return d[0] < best[0]
    return exceeds(d[4] + d[5], best[4] + best[5])


def solve_slot(forced, B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2):
    """Solve one slot.

    Returns ``(mode, d_cellular, d_dedicated, d_reuse)``; in forced mode only the
    forced decision is computed and the others are ``None``.
    """
    args = (B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2)
    if forced == CELLULAR:
        return CELLULAR, solve_cellular(*args), None, None
    if forced == DEDICATED:
        return DEDICATED, None, solve_dedicated(*args), None
    if forced == REUSE:
        return REUSE, None, None, solve_reuse(*args)
    dc = solve_cellular(*args)
    dd = solve_dedicated(*args)
    dr = solve_reuse(*args)
    mode, best = CELLULAR, dc
    if better(dd, best):
        mode, best = DEDICATED, dd
    if better(dr, best):
        mode = REUSE
    return mode, dc, dd, dr


# --- brute-force grid oracles -------------------------------------------------
# Vectorised over the grid. Rates are compared through SINR thresholds and the
# sum rate through the product (1 + s1)(1 + s2), so no log per grid point.


def _thresholds(a, b, bw):
    floor = a - REL_TOL * b
    lo = snr_for(floor, bw) if floor > 0.0 else -1.0
    return lo, snr_for(b + REL_TOL * b, bw)


def grid_reuse_best(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2, pri, n):
    """Best sum rate over an ``n`` x ``n`` power grid among points of class ``pri``.

    Returns ``-inf`` when no grid point falls in that class.
    """
    noise = N0 * B
    p1 = np.linspace(0.0, pbmax, n)[:, None]
    p2 = np.linspace(0.0, pdmax, n)[None, :]
    s1 = p1 * z11 / (p2 * z21 + noise)
    s2 = p2 * z22 / (p1 * z12 + noise)
    l1, h1 = _thresholds(a1, b1, B)
    l2, h2 = _thresholds(a2, b2, B)
    ok = (s1 >= l1) & (s1 <= h1)
    ok2 = (s2 >= l2) & (s2 <= h2)
    cls = 3 - ok.astype(np.int8) - ok2.astype(np.int8)
    prod = (1.0 + s1) * (1.0 + s2)
    sel = prod[cls == pri]
    if sel.size == 0:
        return -math.inf
    return B * math.log2(float(sel.max()))


def grid_cellular_best(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2, n):
    """Best sum rate on a grid subject only to the caps and R_m <= beta_m."""
    bw = B / 3.0
    noise = N0 * bw
    h1 = snr_for(b1 + REL_TOL * b1, bw)
    h2 = snr_for(b2 + REL_TOL * b2, bw)
    s1 = np.linspace(0.0, pbmax, n) * z11 / noise
    best1 = float(s1[s1 <= h1].max())
    pb2 = np.linspace(0.0, pbmax, n)[:, None]
    pd = np.linspace(0.0, pdmax, n)[None, :]
    s2 = np.minimum(pd * z23 / noise, pb2 * z12 / noise)
    best2 = float(s2[s2 <= h2].max())
    return rate(bw, best1) + rate(bw, best2)


def grid_dedicated_best(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2, n):
    bw = B / 2.0
    noise = N0 * bw
    h1 = snr_for(b1 + REL_TOL * b1, bw)
    h2 = snr_for(b2 + REL_TOL * b2, bw)
    s1 = (np.linspace(0.0, pbmax, n) * z11 / noise)[:, None]
    s2 = (np.linspace(0.0, pdmax, n) * z22 / noise)[None, :]
    prod = (1.0 + s1) * (1.0 + s2)
    sel = prod[(s1 <= h1) & (s2 <= h2)]
    return bw * math.log2(float(sel.max()))
