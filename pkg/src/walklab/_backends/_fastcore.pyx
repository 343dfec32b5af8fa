# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical core.

Twin of ``walklab._backends._pycore``: same algorithms, same operation order,
same constants, so both backends produce bit-identical doubles (built with
-ffp-contract=off). Keep the two files in sync; the algorithm notes and the
committed constants are documented in _pycore.py.
"""

from libc.math cimport log, log1p, exp, sqrt, fabs, erfc, NAN
from libc.stdlib cimport malloc, free

import numpy as np

BACKEND = "compiled"

cdef double LN2 = 0.6931471805599453
cdef double HALF_LN2PI = 0.9189385332046727
cdef double PI = 3.141592653589793

cdef double _SG1 = 8.333333333333333e-02
cdef double _SG2 = -2.777777777777778e-03
cdef double _SG3 = 7.936507936507937e-04
cdef double _SG4 = -5.952380952380953e-04
cdef double _SG5 = 8.417508417508417e-04
cdef double _SG6 = -1.9175269175269175e-03
cdef double _SG7 = 6.410256410256410e-03

cdef double _SD1 = 8.333333333333333e-02
cdef double _SD2 = -8.333333333333333e-03
cdef double _SD3 = 3.968253968253968e-03
cdef double _SD4 = -4.166666666666667e-03
cdef double _SD5 = 7.575757575757576e-03
cdef double _SD6 = -2.1092796092796094e-02
cdef double _SD7 = 8.333333333333333e-02

cdef double _BESSEL_SPLIT = 16.0


# ----------------------------------------------------------------------
# scalar special functions
# ----------------------------------------------------------------------

cdef double _stirling_tail_c(double z) noexcept nogil:
    cdef double w = 1.0 / (z * z)
    cdef double s = ((((((_SG7 * w + _SG6) * w + _SG5) * w + _SG4) * w + _SG3) * w
                      + _SG2) * w + _SG1)
    return s / z


cdef double _log_gamma_c(double z) noexcept nogil:
    cdef double acc
    if z <= 0.0 or z != z:
        return NAN
    if z < 8.0:
        acc = 1.0
        while z < 8.0:
            acc = acc * z
            z = z + 1.0
        return ((z - 0.5) * log(z) - z + HALF_LN2PI
                + _stirling_tail_c(z) - log(acc))
    return (z - 0.5) * log(z) - z + HALF_LN2PI + _stirling_tail_c(z)


cdef double _psi_tail_c(double z) noexcept nogil:
    cdef double w = 1.0 / (z * z)
    cdef double s = ((((((_SD7 * w + _SD6) * w + _SD5) * w + _SD4) * w + _SD3) * w
                      + _SD2) * w + _SD1)
    return s * w


cdef double _digamma_c(double z) noexcept nogil:
    cdef double acc = 0.0
    if z <= 0.0 or z != z:
        return NAN
    while z < 8.0:
        acc = acc + 1.0 / z
        z = z + 1.0
    return log(z) - 0.5 / z - _psi_tail_c(z) - acc


cdef double _besseli_e_asym_c(double mu, double z) noexcept nogil:
    cdef double s = 1.0
    cdef double u = 1.0
    cdef double m, unew
    cdef int k = 0
    while k < 30:
        m = 2.0 * k + 1.0
        unew = u * ((m * m - mu) / (8.0 * (k + 1.0) * z))
        if fabs(unew) >= fabs(u):
            break
        u = unew
        s = s + u
        if fabs(u) <= 1e-17 * fabs(s):
            break
        k += 1
    return s / sqrt(2.0 * PI * z)


cdef double _bessel_i0e_c(double z) noexcept nogil:
    cdef double q, s, term
    cdef int k
    if z < 0.0 or z != z:
        return NAN
    if z <= _BESSEL_SPLIT:
        q = 0.25 * z * z
        s = 1.0
        term = 1.0
        k = 1
        while k <= 60:
            term = term * (q / (k * k))
            s = s + term
            if term <= 1e-17 * s:
                break
            k += 1
        return s * exp(-z)
    return _besseli_e_asym_c(0.0, z)


cdef double _bessel_i1e_over_z_c(double z) noexcept nogil:
    cdef double q, s, term
    cdef int k
    if z < 0.0 or z != z:
        return NAN
    if z <= _BESSEL_SPLIT:
        q = 0.25 * z * z
        s = 1.0
        term = 1.0
        k = 1
        while k <= 60:
            term = term * (q / (k * (k + 1.0)))
            s = s + term
            if term <= 1e-17 * s:
                break
            k += 1
        return 0.5 * s * exp(-z)
    return _besseli_e_asym_c(4.0, z) / z


cdef double _bessel_i1e_c(double z) noexcept nogil:
    if z < 0.0 or z != z:
        return NAN
    if z <= _BESSEL_SPLIT:
        return _bessel_i1e_over_z_c(z) * z
    return _besseli_e_asym_c(4.0, z)


cdef double _gammainc_q_c(double a, double x) noexcept nogil:
    cdef double lg, ap, total, term, tiny, b, c, d, hcf, an, delt
    cdef int i
    if a <= 0.0 or x < 0.0 or a != a or x != x:
        return NAN
    if x == 0.0:
        return 1.0
    lg = _log_gamma_c(a)
    if x < a + 1.0:
        ap = a
        total = 1.0 / a
        term = total
        for i in range(500):
            ap = ap + 1.0
            term = term * (x / ap)
            total = total + term
            if fabs(term) < fabs(total) * 1e-16:
                break
        return 1.0 - total * exp(-x + a * log(x) - lg)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    hcf = d
    for i in range(1, 500):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        if fabs(d) < tiny:
            d = tiny
        c = b + an / c
        if fabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delt = d * c
        hcf = hcf * delt
        if fabs(delt - 1.0) < 1e-16:
            break
    return exp(-x + a * log(x) - lg) * hcf


# ----------------------------------------------------------------------
# kernels
# ----------------------------------------------------------------------

cdef double _rw_log_density_c(double t, double x) noexcept nogil:
    cdef double u = 0.5 * (t - x)
    cdef double v = 0.5 * (t + x)
    cdef double r, big, tails
    if u >= 8.0 and v >= 8.0:
        r = x / t
        big = (u + 0.5) * log1p(-r) + (v + 0.5) * log1p(r)
        tails = _stirling_tail_c(t) - _stirling_tail_c(u) - _stirling_tail_c(v)
        return -0.5 * log(t) - HALF_LN2PI - big + tails
    return (_log_gamma_c(t + 1.0) - _log_gamma_c(u + 1.0)
            - _log_gamma_c(v + 1.0) - (t + 1.0) * LN2)


cdef double _rho_rw_c(double x, double t) noexcept nogil:
    if t <= 0.0 or t != t:
        return NAN
    if fabs(x) > t:
        return 0.0
    return exp(_rw_log_density_c(t, x))


cdef double _psi_half_diff_c(double t, double x) noexcept nogil:
    cdef double u = 0.5 * (t - x)
    cdef double v = 0.5 * (t + x)
    cdef double r, lead, corr
    if u >= 8.0 and v >= 8.0:
        r = x / t
        lead = log1p(-r) - log1p(r)
        corr = 2.0 * x / ((t - x) * (t + x))
        return lead + corr - (_psi_tail_c(u) - _psi_tail_c(v))
    return _digamma_c(u + 1.0) - _digamma_c(v + 1.0)


cdef double _grad_rw_c(double x, double t) noexcept nogil:
    if t <= 0.0 or t != t:
        return NAN
    if fabs(x) >= t:
        return 0.0
    return 0.5 * _rho_rw_c(x, t) * _psi_half_diff_c(t, x)


cdef double _dt_log_rw_c(double t, double x) noexcept nogil:
    cdef double u = 0.5 * (t - x)
    cdef double v = 0.5 * (t + x)
    cdef double r, lead, corr, tails
    if u >= 8.0 and v >= 8.0:
        r = x / t
        lead = -0.5 * log1p(-(r * r))
        corr = 0.5 / t - t / ((t - x) * (t + x))
        tails = _psi_tail_c(t) - 0.5 * (_psi_tail_c(u) + _psi_tail_c(v))
        return lead + corr - tails
    return (_digamma_c(t + 1.0) - 0.5 * _digamma_c(u + 1.0)
            - 0.5 * _digamma_c(v + 1.0) - LN2)


cdef double _dt_rho_rw_c(double x, double t) noexcept nogil:
    if fabs(x) > t:
        return 0.0
    return _rho_rw_c(x, t) * _dt_log_rw_c(t, x)


cdef double _rho_g_c(double x, double t, double D) noexcept nogil:
    if t <= 0.0 or t != t:
        return NAN
    return exp(-(x * x) / (4.0 * D * t)) / sqrt(4.0 * PI * D * t)


cdef double _grad_g_c(double x, double t, double D) noexcept nogil:
    return -x / (2.0 * D * t) * _rho_g_c(x, t, D)


cdef double _dt_rho_g_c(double x, double t, double D) noexcept nogil:
    return _rho_g_c(x, t, D) * ((x * x) / (4.0 * D * t * t) - 0.5 / t)


cdef double _tail_mass_g_c(double x_star, double t, double D) noexcept nogil:
    return 0.5 * erfc(x_star / (2.0 * sqrt(D * t)))


cdef double _flux_g_c(double x_star, double t, double D) noexcept nogil:
    return (x_star / (2.0 * t)) * _rho_g_c(x_star, t, D)


cdef double _rho_te_c(double x, double t, double D, double tau) noexcept nogil:
    cdef double V, w, aw, s, expo
    if t < 0.0 or t != t:
        return NAN
    V = sqrt(D / tau)
    w = x / V
    aw = fabs(w)
    if aw > t:
        return 0.0
    s = sqrt((t - aw) * (t + aw))
    if aw == 0.0:
        expo = 0.0
    else:
        expo = -(w * w) / ((t + s) * (2.0 * tau))
    return exp(expo) * _bessel_i0e_c(s / (2.0 * tau)) / sqrt(4.0 * D * tau)


cdef double _grad_te_c(double x, double t, double D, double tau) noexcept nogil:
    cdef double V, w, aw, s, expo, den, pref
    if t <= 0.0 or t != t:
        return NAN
    V = sqrt(D / tau)
    w = x / V
    aw = fabs(w)
    if aw > t:
        return 0.0
    s = sqrt((t - aw) * (t + aw))
    if aw == 0.0:
        expo = 0.0
    else:
        expo = -(w * w) / ((t + s) * (2.0 * tau))
    den = 4.0 * D * tau
    pref = -x / (den * sqrt(den))
    return pref * exp(expo) * _bessel_i1e_over_z_c(s / (2.0 * tau))


cdef double _dt_rho_te_c(double x, double t, double D, double tau) noexcept nogil:
    cdef double V, w, aw, s, expo, u, val
    if t <= 0.0 or t != t:
        return NAN
    V = sqrt(D / tau)
    w = x / V
    aw = fabs(w)
    if aw > t:
        return 0.0
    s = sqrt((t - aw) * (t + aw))
    if aw == 0.0:
        expo = 0.0
    else:
        expo = -(w * w) / ((t + s) * (2.0 * tau))
    u = s / (2.0 * tau)
    val = t * _bessel_i1e_over_z_c(u) / (2.0 * tau) - _bessel_i0e_c(u)
    return exp(expo) * val / ((2.0 * tau) * sqrt(4.0 * D * tau))


# ----------------------------------------------------------------------
# adaptive Gauss-Kronrod 7/15 quadrature
# ----------------------------------------------------------------------

cdef double[8] _XGK = [0.99145537112081263921, 0.94910791234275852453,
                       0.86486442335976907279, 0.74153118559939443986,
                       0.58608723546769113029, 0.40584515137739716691,
                       0.20778495500789846760, 0.0]
cdef double[8] _WGK = [0.02293532201052922496, 0.06309209262997855329,
                       0.10479001032225018384, 0.14065325971552591875,
                       0.16900472663926790283, 0.19035057806478540991,
                       0.20443294007529889241, 0.20948214108472782801]
cdef double[4] _WG = [0.12948496616886969327, 0.27970539148927666790,
                      0.38183005050511894495, 0.41795918367346938776]

DEF FID_RHO_TE = 2
DEF FID_RHO_RW = 3
DEF FID_DT_RW_TE = 4
DEF FID_DT_RW_G = 5
DEF FID_DT_TE_G = 6
DEF FID_CATTANEO = 19

cdef double _INNER_EPSABS = 1e-18
cdef double _INNER_EPSREL = 1e-11
cdef double _TAIL_EPSABS = 1e-16
cdef double _TAIL_EPSREL = 1e-11


cdef double _flux_diff_c(int kind, double x, double t) noexcept nogil:
    cdef double rw_edge = exp(-(t + 1.0) * LN2)
    cdef double te_edge = exp(-t)
    cdef double b
    cdef int fid
    if kind == 0:
        b = rw_edge - te_edge
        fid = FID_DT_RW_TE
    elif kind == 1:
        b = rw_edge - _flux_g_c(t, t, 0.5)
        fid = FID_DT_RW_G
    else:
        b = te_edge - _flux_g_c(t, t, 0.5)
        fid = FID_DT_TE_G
    return b + _adaptive_c(fid, x, t, t, 0.0, 0.5, 0.5,
                           _INNER_EPSABS, _INNER_EPSREL, 256)


cdef double _tail_rw_c(double x, double t) noexcept nogil:
    cdef double a = -t if x < -t else x
    if a >= t:
        return 0.0
    return _adaptive_c(FID_RHO_RW, a, t, t, 0.0, 0.5, 0.5,
                       _TAIL_EPSABS, _TAIL_EPSREL, 512)


cdef void _cattaneo_terms_c(double x, double t, double h,
                            double* j_out, double* djdt_out) noexcept nogil:
    cdef double tm2 = _tail_rw_c(x, t - 2.0 * h)
    cdef double tm1 = _tail_rw_c(x, t - h)
    cdef double t0 = _tail_rw_c(x, t)
    cdef double tp1 = _tail_rw_c(x, t + h)
    cdef double tp2 = _tail_rw_c(x, t + 2.0 * h)
    j_out[0] = (tp1 - tm1) / (2.0 * h)
    djdt_out[0] = (tp2 - 2.0 * t0 + tm2) / (4.0 * h * h)


cdef double _integrand_c(int fid, double x, double t, double h,
                         double pD, double ptau) noexcept nogil:
    cdef double d, j, djdt
    if fid == FID_RHO_TE:
        return _rho_te_c(x, t, pD, ptau)
    if fid == FID_RHO_RW:
        return _rho_rw_c(x, t)
    if fid == FID_DT_RW_TE:
        return _dt_rho_rw_c(x, t) - _dt_rho_te_c(x, t, 0.5, 0.5)
    if fid == FID_DT_RW_G:
        return _dt_rho_rw_c(x, t) - _dt_rho_g_c(x, t, 0.5)
    if fid == FID_DT_TE_G:
        return _dt_rho_te_c(x, t, 0.5, 0.5) - _dt_rho_g_c(x, t, 0.5)
    if fid == 10:
        d = _rho_rw_c(x, t) - _rho_te_c(x, t, 0.5, 0.5)
    elif fid == 11:
        d = _rho_rw_c(x, t) - _rho_g_c(x, t, 0.5)
    elif fid == 12:
        d = _rho_te_c(x, t, 0.5, 0.5) - _rho_g_c(x, t, 0.5)
    elif fid == 13:
        d = _grad_rw_c(x, t) - _grad_te_c(x, t, 0.5, 0.5)
    elif fid == 14:
        d = _grad_rw_c(x, t) - _grad_g_c(x, t, 0.5)
    elif fid == 15:
        d = _grad_te_c(x, t, 0.5, 0.5) - _grad_g_c(x, t, 0.5)
    elif fid == 16:
        d = _flux_diff_c(0, x, t)
    elif fid == 17:
        d = _flux_diff_c(1, x, t)
    elif fid == 18:
        d = _flux_diff_c(2, x, t)
    else:
        _cattaneo_terms_c(x, t, h, &j, &djdt)
        d = (-0.5 * _grad_rw_c(x, t)) - (j + 0.5 * djdt)
    return d * d


cdef void _gk15_c(int fid, double a, double b, double t, double h,
                  double pD, double ptau,
                  double* val_out, double* err_out) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double hw = 0.5 * (b - a)
    cdef double fc = _integrand_c(fid, c, t, h, pD, ptau)
    cdef double resk = _WGK[7] * fc
    cdef double resg = _WG[3] * fc
    cdef double dx, f1, f2
    cdef int j
    for j in range(7):
        dx = hw * _XGK[j]
        f1 = _integrand_c(fid, c - dx, t, h, pD, ptau)
        f2 = _integrand_c(fid, c + dx, t, h, pD, ptau)
        resk = resk + _WGK[j] * (f1 + f2)
        if j == 1:
            resg = resg + _WG[0] * (f1 + f2)
        elif j == 3:
            resg = resg + _WG[1] * (f1 + f2)
        elif j == 5:
            resg = resg + _WG[2] * (f1 + f2)
    val_out[0] = resk * hw
    err_out[0] = fabs((resk - resg) * hw)


cdef double _adaptive_c(int fid, double a, double b, double t, double h,
                        double pD, double ptau,
                        double epsabs, double epsrel, int limit) noexcept nogil:
    cdef double* lo
    cdef double* hi
    cdef double* vals
    cdef double* errs
    cdef int n, i, worst
    cdef double total, toterr, tol, werr, wa, wb, mid, v1, e1, v2, e2
    if not a < b:
        return 0.0
    lo = <double*>malloc(limit * sizeof(double))
    hi = <double*>malloc(limit * sizeof(double))
    vals = <double*>malloc(limit * sizeof(double))
    errs = <double*>malloc(limit * sizeof(double))
    if lo == NULL or hi == NULL or vals == NULL or errs == NULL:
        if lo != NULL: free(lo)
        if hi != NULL: free(hi)
        if vals != NULL: free(vals)
        if errs != NULL: free(errs)
        return NAN
    lo[0] = a
    hi[0] = b
    _gk15_c(fid, a, b, t, h, pD, ptau, &vals[0], &errs[0])
    n = 1
    while True:
        total = 0.0
        toterr = 0.0
        for i in range(n):
            total = total + vals[i]
            toterr = toterr + errs[i]
        tol = epsabs if epsabs > epsrel * fabs(total) else epsrel * fabs(total)
        if toterr <= tol or n >= limit:
            break
        worst = 0
        werr = errs[0]
        for i in range(1, n):
            if errs[i] > werr:
                werr = errs[i]
                worst = i
        wa = lo[worst]
        wb = hi[worst]
        mid = 0.5 * (wa + wb)
        if mid <= wa or mid >= wb:
            break
        _gk15_c(fid, wa, mid, t, h, pD, ptau, &v1, &e1)
        _gk15_c(fid, mid, wb, t, h, pD, ptau, &v2, &e2)
        lo[worst] = wa
        hi[worst] = mid
        vals[worst] = v1
        errs[worst] = e1
        lo[n] = mid
        hi[n] = wb
        vals[n] = v2
        errs[n] = e2
        n += 1
    free(lo)
    free(hi)
    free(vals)
    free(errs)
    return total


# ----------------------------------------------------------------------
# Python-visible API (matches _pycore)
# ----------------------------------------------------------------------

def log_gamma(double z):
    return _log_gamma_c(z)

def digamma(double z):
    return _digamma_c(z)

def bessel_i0e(double z):
    return _bessel_i0e_c(z)

def bessel_i1e(double z):
    return _bessel_i1e_c(z)

def bessel_i1e_over_z(double z):
    return _bessel_i1e_over_z_c(z)

def gammainc_q(double a, double x):
    return _gammainc_q_c(a, x)

def rw_log_density(double t, double x):
    return _rw_log_density_c(t, x)

def rho_rw(double x, double t):
    return _rho_rw_c(x, t)

def psi_half_diff(double t, double x):
    return _psi_half_diff_c(t, x)

def grad_rw(double x, double t):
    return _grad_rw_c(x, t)

def dt_log_rw(double t, double x):
    return _dt_log_rw_c(t, x)

def dt_rho_rw(double x, double t):
    return _dt_rho_rw_c(x, t)

def rho_g(double x, double t, double D):
    return _rho_g_c(x, t, D)

def grad_g(double x, double t, double D):
    return _grad_g_c(x, t, D)

def dt_rho_g(double x, double t, double D):
    return _dt_rho_g_c(x, t, D)

def tail_mass_g(double x_star, double t, double D):
    return _tail_mass_g_c(x_star, t, D)

def flux_g(double x_star, double t, double D):
    return _flux_g_c(x_star, t, D)

def rho_te(double x, double t, double D, double tau):
    return _rho_te_c(x, t, D, tau)

def grad_te(double x, double t, double D, double tau):
    return _grad_te_c(x, t, D, tau)

def dt_rho_te(double x, double t, double D, double tau):
    return _dt_rho_te_c(x, t, D, tau)

def tail_mass_te(double x_star, double t, double D, double tau,
                 double epsabs=1e-16, double epsrel=1e-11):
    cdef double vt = sqrt(D / tau) * t
    cdef double a = -vt if x_star < -vt else x_star
    if a >= vt:
        return 0.0
    return _adaptive_c(FID_RHO_TE, a, vt, t, 0.0, D, tau, epsabs, epsrel, 512)

def tail_mass_rw(double x_star, double t):
    return _tail_rw_c(x_star, t)

def flux_fd_rw(double x_star, double t, double h):
    return (_tail_rw_c(x_star, t + h) - _tail_rw_c(x_star, t - h)) / (2.0 * h)

def flux_fd_te(double x_star, double t, double h, double D, double tau):
    return (tail_mass_te(x_star, t + h, D, tau)
            - tail_mass_te(x_star, t - h, D, tau)) / (2.0 * h)

def flux_terms_rw(double x, double t, double h):
    cdef double j, djdt
    _cattaneo_terms_c(x, t, h, &j, &djdt)
    return j, djdt

def l2_metric(int mid, double t):
    cdef double cut = 14.0 * sqrt(t)
    cdef double epsrel, val
    if cut > t:
        cut = t
    epsrel = 1e-9 if mid >= 6 else 1e-10
    val = _adaptive_c(10 + mid, 0.0, cut, t, 0.0, 0.5, 0.5,
                      1e-250, epsrel, 2048)
    if val < 0.0:
        val = 0.0
    return sqrt(val)

def cattaneo_l2(double t, double h):
    cdef double cut = 14.0 * sqrt(t)
    cdef double val
    if cut > t:
        cut = t
    val = _adaptive_c(FID_CATTANEO, 0.0, cut, t, h, 0.5, 0.5,
                      1e-250, 1e-5, 1024)
    if val < 0.0:
        val = 0.0
    return sqrt(val)

def f_exact_val(double x, double t, double h):
    cdef double j, djdt
    _cattaneo_terms_c(x, t, h, &j, &djdt)
    return -(j + 0.5 * djdt) / (0.5 * _grad_rw_c(x, t))


# ----------------------------------------------------------------------
# Monte Carlo core (SplitMix64; constants documented in _pycore)
# ----------------------------------------------------------------------

cdef unsigned long long _PHI = 0x9E3779B97F4A7C15ULL
cdef unsigned long long _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long _MIX2 = 0x94D049BB133111EBULL


cdef inline unsigned long long _mix64_c(unsigned long long z) noexcept nogil:
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


def mc_block(object seed, long long start, long long n, long long steps):
    """Histogram of final positions for walkers [start, start+n); see _pycore."""
    counts = np.zeros(2 * steps + 1, dtype=np.int64)
    cdef long long[::1] cv = counts
    cdef unsigned long long sd = <unsigned long long>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long state, draw
    cdef long long i, k, pos
    with nogil:
        for i in range(start + 1, start + n + 1):
            state = _mix64_c(sd + (<unsigned long long>i) * _PHI)
            pos = 0
            for k in range(1, steps + 1):
                draw = _mix64_c(state + (<unsigned long long>k) * _PHI)
                if draw & 1ULL:
                    pos += 1
                else:
                    pos -= 1
            cv[pos + steps] += 1
    return counts
