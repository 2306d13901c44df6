# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-slot kernels and grid oracles.

Same signatures and same floating-point operation order as ``_pycore``.
"""
from libc.math cimport log1p, expm1, log2, INFINITY

cdef double LN2 = 0.6931471805599453
cdef double REL_TOL = 1e-9
cdef double EXP_CUTOFF = 709.0
# sum rates this close count as a tie, so rounding never decides between
# modes that both reach beta1 + beta2
cdef double TIE_TOL = 1e-12

cdef enum:
    CELLULAR = 1
    DEDICATED = 2
    REUSE = 3


cdef inline double _rate(double bw, double snr) nogil:
    return bw * log1p(snr) / LN2


cdef inline double _snr_for(double r, double bw) nogil:
    cdef double x = r * LN2 / bw
    if x < EXP_CUTOFF:
        return expm1(x)
    return INFINITY


cdef inline bint _exceeds(double new, double old) nogil:
    return new - old > TIE_TOL * (old if old > 0.0 else -old)


cdef inline bint _served(double r, double a, double b) nogil:
    return r >= a - REL_TOL * b and r <= b + REL_TOL * b


cdef inline int _priority(bint ok1, bint ok2) nogil:
    if ok1 and ok2:
        return 1
    if ok1 or ok2:
        return 2
    return 3


cdef inline double _fmin(double a, double b) nogil:
    # Python's min(a, b) returns a unless b < a
    return b if b < a else a


cdef inline double _fmax(double a, double b) nogil:
    return b if b > a else a


ctypedef struct Decision:
    int pri
    double pb1
    double pb2
    double pd
    double r1
    double r2


cdef inline object _pack(Decision d):
    return (d.pri, d.pb1, d.pb2, d.pd, d.r1, d.r2)


cdef inline void _reuse_rates(double B, double N0, double z11, double z12,
                              double z21, double z22, double p1, double p2,
                              double* r1, double* r2) nogil:
    cdef double noise = N0 * B
    r1[0] = _rate(B, p1 * z11 / (p2 * z21 + noise))
    r2[0] = _rate(B, p2 * z22 / (p1 * z12 + noise))


cdef Decision _cellular(double B, double N0, double pbmax, double pdmax,
                        double z11, double z12, double z21, double z22, double z23,
                        double a1, double b1, double a2, double b2) nogil:
    cdef Decision d
    cdef double bw = B / 3.0
    cdef double noise = N0 * bw
    cdef double r, snr
    d.pb1 = 0.0
    d.pb2 = 0.0
    d.pd = 0.0
    if z11 > 0.0 and b1 > 0.0:
        r = _fmin(_rate(bw, pbmax * z11 / noise), b1)
        d.pb1 = _fmin(_snr_for(r, bw) * noise / z11, pbmax)
    if z12 > 0.0 and z23 > 0.0 and b2 > 0.0:
        r = _fmin(_fmin(_rate(bw, pdmax * z23 / noise), _rate(bw, pbmax * z12 / noise)), b2)
        snr = _snr_for(r, bw)
        d.pb2 = _fmin(snr * noise / z12, pbmax)
        d.pd = _fmin(snr * noise / z23, pdmax)
    d.r1 = _rate(bw, d.pb1 * z11 / noise)
    d.r2 = _fmin(_rate(bw, d.pd * z23 / noise), _rate(bw, d.pb2 * z12 / noise))
    d.pri = _priority(_served(d.r1, a1, b1), _served(d.r2, a2, b2))
    return d


cdef Decision _dedicated(double B, double N0, double pbmax, double pdmax,
                         double z11, double z12, double z21, double z22, double z23,
                         double a1, double b1, double a2, double b2) nogil:
    cdef Decision d
    cdef double bw = B / 2.0
    cdef double noise = N0 * bw
    cdef double r
    d.pb1 = 0.0
    d.pb2 = 0.0
    d.pd = 0.0
    if z11 > 0.0 and b1 > 0.0:
        r = _fmin(_rate(bw, pbmax * z11 / noise), b1)
        d.pb1 = _fmin(_snr_for(r, bw) * noise / z11, pbmax)
    if z22 > 0.0 and b2 > 0.0:
        r = _fmin(_rate(bw, pdmax * z22 / noise), b2)
        d.pd = _fmin(_snr_for(r, bw) * noise / z22, pdmax)
    d.r1 = _rate(bw, d.pb1 * z11 / noise)
    d.r2 = _rate(bw, d.pd * z22 / noise)
    d.pri = _priority(_served(d.r1, a1, b1), _served(d.r2, a2, b2))
    return d


cdef bint _interior(double B, double N0, double pbmax, double pdmax,
                    double z11, double z12, double z21, double z22,
                    double b1, double b2, double* p1, double* p2) nogil:
    cdef double noise = N0 * B
    cdef double s1 = _snr_for(b1, B)
    cdef double s2 = _snr_for(b2, B)
    cdef double det = z11 * z22 - s1 * s2 * z12 * z21
    if not det > 0.0:
        return False
    p1[0] = s1 * (z22 + s2 * z21) * noise / det
    p2[0] = s2 * (z11 + s1 * z12) * noise / det
    return 0.0 <= p1[0] <= pbmax and 0.0 <= p2[0] <= pdmax


cdef void _own_interval(double pf, double g_if, double g_own, double noise,
                        double a, double b, double cap, double B,
                        double* lo, double* hi) nogil:
    cdef double scale
    if g_own > 0.0:
        scale = (noise + pf * g_if) / g_own
        lo[0] = _fmax(0.0, _snr_for(a, B) * scale)
        hi[0] = _fmin(cap, _snr_for(b, B) * scale)
    elif _served(0.0, a, b):
        lo[0] = 0.0
        hi[0] = cap
    else:
        lo[0] = INFINITY
        hi[0] = -INFINITY


cdef void _fixed_interval(double pf, double g_fix, double g_x, double noise,
                          double a, double b, double cap, double B,
                          double* lo, double* hi) nogil:
    cdef double signal = pf * g_fix
    cdef double sa, sb, l, h
    if g_x > 0.0 and signal > 0.0:
        sb = _snr_for(b, B)
        sa = _snr_for(a, B)
        l = (signal / sb - noise) / g_x if sb > 0.0 else INFINITY
        h = (signal / sa - noise) / g_x if sa > 0.0 else INFINITY
        lo[0] = _fmax(0.0, l)
        hi[0] = _fmin(cap, h)
    elif _served(_rate(B, signal / noise), a, b):
        lo[0] = 0.0
        hi[0] = cap
    else:
        lo[0] = INFINITY
        hi[0] = -INFINITY


cdef inline double _edge_total(double B, double N0, double pbmax, double pdmax,
                               double z11, double z12, double z21, double z22,
                               int case, double x) nogil:
    cdef double r1, r2
    if case == 1:
        _reuse_rates(B, N0, z11, z12, z21, z22, pbmax, x, &r1, &r2)
    else:
        _reuse_rates(B, N0, z11, z12, z21, z22, x, pdmax, &r1, &r2)
    return r1 + r2


cdef Decision _boundary(double B, double N0, double pbmax, double pdmax,
                        double z11, double z12, double z21, double z22,
                        double a1, double b1, double a2, double b2, int case) nogil:
    cdef Decision d
    cdef double noise = N0 * B
    cdef double cap, lo1, hi1, lo2, hi2, lo, hi, x, best, v
    cdef double cands[4]
    cdef int nc = 0, k
    cdef bint ok1, ok2
    if case == 1:
        cap = pdmax
        _fixed_interval(pbmax, z11, z21, noise, a1, b1, cap, B, &lo1, &hi1)
        _own_interval(pbmax, z12, z22, noise, a2, b2, cap, B, &lo2, &hi2)
    else:
        cap = pbmax
        _own_interval(pdmax, z21, z11, noise, a1, b1, cap, B, &lo1, &hi1)
        _fixed_interval(pdmax, z22, z12, noise, a2, b2, cap, B, &lo2, &hi2)

    ok1 = lo1 <= hi1
    ok2 = lo2 <= hi2
    lo = _fmax(lo1, lo2)
    hi = _fmin(hi1, hi2)
    if ok1 and ok2 and lo <= hi:
        d.pri = 1
        if _edge_total(B, N0, pbmax, pdmax, z11, z12, z21, z22, case, lo) > \
                _edge_total(B, N0, pbmax, pdmax, z11, z12, z21, z22, case, hi):
            x = lo
        else:
            x = hi
    elif ok1 or ok2:
        d.pri = 2
        if ok1:
            cands[nc] = lo1
            cands[nc + 1] = hi1
            nc += 2
        if ok2:
            cands[nc] = lo2
            cands[nc + 1] = hi2
            nc += 2
        x = cands[0]
        best = _edge_total(B, N0, pbmax, pdmax, z11, z12, z21, z22, case, x)
        for k in range(1, nc):
            v = _edge_total(B, N0, pbmax, pdmax, z11, z12, z21, z22, case, cands[k])
            if v > best:
                x = cands[k]
                best = v
    else:
        d.pri = 3
        if _edge_total(B, N0, pbmax, pdmax, z11, z12, z21, z22, case, 0.0) > \
                _edge_total(B, N0, pbmax, pdmax, z11, z12, z21, z22, case, cap):
            x = 0.0
        else:
            x = cap

    if case == 1:
        d.pb1 = pbmax
        d.pd = x
    else:
        d.pb1 = x
        d.pd = pdmax
    d.pb2 = 0.0
    _reuse_rates(B, N0, z11, z12, z21, z22, d.pb1, d.pd, &d.r1, &d.r2)
    return d


cdef Decision _reuse(double B, double N0, double pbmax, double pdmax,
                     double z11, double z12, double z21, double z22,
                     double a1, double b1, double a2, double b2) nogil:
    cdef Decision d, d1, d2
    cdef double p1, p2
    if _interior(B, N0, pbmax, pdmax, z11, z12, z21, z22, b1, b2, &p1, &p2):
        d.pri = 1
        d.pb1 = p1
        d.pb2 = 0.0
        d.pd = p2
        _reuse_rates(B, N0, z11, z12, z21, z22, p1, p2, &d.r1, &d.r2)
        return d
    d1 = _boundary(B, N0, pbmax, pdmax, z11, z12, z21, z22, a1, b1, a2, b2, 1)
    d2 = _boundary(B, N0, pbmax, pdmax, z11, z12, z21, z22, a1, b1, a2, b2, 2)
    if d2.pri < d1.pri or (d2.pri == d1.pri and _exceeds(d2.r1 + d2.r2, d1.r1 + d1.r2)):
        return d2
    return d1


cdef inline bint _better(Decision* d, Decision* best) nogil:
    if d.pri != best.pri:
        return d.pri < best.pri
    return _exceeds(d.r1 + d.r2, best.r1 + best.r2)


# --- Python entry points ------------------------------------------------------

def exceeds(double new, double old):
    return _exceeds(new, old)


def rate(double bw, double snr):
    return _rate(bw, snr)


def snr_for(double r, double bw):
    return _snr_for(r, bw)


def reuse_rates(double B, double N0, double z11, double z12, double z21,
                double z22, double p1, double p2):
    cdef double r1, r2
    _reuse_rates(B, N0, z11, z12, z21, z22, p1, p2, &r1, &r2)
    return r1, r2


def solve_cellular(double B, double N0, double pbmax, double pdmax,
                   double z11, double z12, double z21, double z22, double z23,
                   double a1, double b1, double a2, double b2):
    return _pack(_cellular(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2))


def solve_dedicated(double B, double N0, double pbmax, double pdmax,
                    double z11, double z12, double z21, double z22, double z23,
                    double a1, double b1, double a2, double b2):
    return _pack(_dedicated(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2))


def solve_reuse_interior(double B, double N0, double pbmax, double pdmax,
                         double z11, double z12, double z21, double z22, double z23,
                         double a1, double b1, double a2, double b2):
    cdef double p1, p2
    if _interior(B, N0, pbmax, pdmax, z11, z12, z21, z22, b1, b2, &p1, &p2):
        return p1, p2
    return None


def solve_reuse_boundary(double B, double N0, double pbmax, double pdmax,
                         double z11, double z12, double z21, double z22, double z23,
                         double a1, double b1, double a2, double b2, int case):
    return _pack(_boundary(B, N0, pbmax, pdmax, z11, z12, z21, z22, a1, b1, a2, b2, case))


def solve_reuse(double B, double N0, double pbmax, double pdmax,
                double z11, double z12, double z21, double z22, double z23,
                double a1, double b1, double a2, double b2):
    return _pack(_reuse(B, N0, pbmax, pdmax, z11, z12, z21, z22, a1, b1, a2, b2))


def solve_slot(int forced, double B, double N0, double pbmax, double pdmax,
               double z11, double z12, double z21, double z22, double z23,
               double a1, double b1, double a2, double b2):
    cdef Decision dc, dd, dr
    cdef int mode
    if forced == CELLULAR:
        dc = _cellular(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2)
        return CELLULAR, _pack(dc), None, None
    if forced == DEDICATED:
        dd = _dedicated(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2)
        return DEDICATED, None, _pack(dd), None
    if forced == REUSE:
        dr = _reuse(B, N0, pbmax, pdmax, z11, z12, z21, z22, a1, b1, a2, b2)
        return REUSE, None, None, _pack(dr)
    dc = _cellular(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2)
    dd = _dedicated(B, N0, pbmax, pdmax, z11, z12, z21, z22, z23, a1, b1, a2, b2)
    dr = _reuse(B, N0, pbmax, pdmax, z11, z12, z21, z22, a1, b1, a2, b2)
    mode = CELLULAR
    if _better(&dd, &dc):
        mode = DEDICATED
        if _better(&dr, &dd):
            mode = REUSE
    elif _better(&dr, &dc):
        mode = REUSE
    return mode, _pack(dc), _pack(dd), _pack(dr)


# --- brute-force grid oracles -------------------------------------------------

cdef inline void _thresholds(double a, double b, double bw, double* lo, double* hi) nogil:
    cdef double floor = a - REL_TOL * b
    lo[0] = _snr_for(floor, bw) if floor > 0.0 else -1.0
    hi[0] = _snr_for(b + REL_TOL * b, bw)


cdef inline double _grid_point(double cap, Py_ssize_t i, Py_ssize_t n) nogil:
    # numpy.linspace(0, cap, n)[i]
    if i == n - 1:
        return cap
    return i * (cap / (n - 1))


def grid_reuse_best(double B, double N0, double pbmax, double pdmax,
                    double z11, double z12, double z21, double z22, double z23,
                    double a1, double b1, double a2, double b2, int pri, Py_ssize_t n):
    cdef double noise = N0 * B
    cdef double l1, h1, l2, h2, p1, p2, s1, s2, prod
    cdef double best = -1.0
    cdef Py_ssize_t i, j
    cdef int cls
    _thresholds(a1, b1, B, &l1, &h1)
    _thresholds(a2, b2, B, &l2, &h2)
    with nogil:
        for i in range(n):
            p1 = _grid_point(pbmax, i, n)
            for j in range(n):
                p2 = _grid_point(pdmax, j, n)
                s1 = p1 * z11 / (p2 * z21 + noise)
                s2 = p2 * z22 / (p1 * z12 + noise)
                cls = 3 - (s1 >= l1 and s1 <= h1) - (s2 >= l2 and s2 <= h2)
                if cls == pri:
                    prod = (1.0 + s1) * (1.0 + s2)
                    if prod > best:
                        best = prod
    if best < 0.0:
        return -INFINITY
    return B * log2(best)


def grid_cellular_best(double B, double N0, double pbmax, double pdmax,
                       double z11, double z12, double z21, double z22, double z23,
                       double a1, double b1, double a2, double b2, Py_ssize_t n):
    cdef double bw = B / 3.0
    cdef double noise = N0 * bw
    cdef double h1 = _snr_for(b1 + REL_TOL * b1, bw)
    cdef double h2 = _snr_for(b2 + REL_TOL * b2, bw)
    cdef double best1 = -1.0, best2 = -1.0, s, up, dn
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            s = _grid_point(pbmax, i, n) * z11 / noise
            if s <= h1 and s > best1:
                best1 = s
        for i in range(n):
            dn = _grid_point(pbmax, i, n) * z12 / noise
            for j in range(n):
                up = _grid_point(pdmax, j, n) * z23 / noise
                s = _fmin(up, dn)
                if s <= h2 and s > best2:
                    best2 = s
    return _rate(bw, best1) + _rate(bw, best2)


def grid_dedicated_best(double B, double N0, double pbmax, double pdmax,
                        double z11, double z12, double z21, double z22, double z23,
                        double a1, double b1, double a2, double b2, Py_ssize_t n):
    cdef double bw = B / 2.0
    cdef double noise = N0 * bw
    cdef double h1 = _snr_for(b1 + REL_TOL * b1, bw)
    cdef double h2 = _snr_for(b2 + REL_TOL * b2, bw)
    cdef double best = -1.0, s1, s2, prod
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            s1 = _grid_point(pbmax, i, n) * z11 / noise
            if not s1 <= h1:
                continue
            for j in range(n):
                s2 = _grid_point(pdmax, j, n) * z22 / noise
                if s2 <= h2:
                    prod = (1.0 + s1) * (1.0 + s2)
                    if prod > best:
                        best = prod
    return bw * log2(best)
