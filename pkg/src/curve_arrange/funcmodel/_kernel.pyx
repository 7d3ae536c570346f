# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled interval bytecode interpreter.

Same semantics as ``_pykernel.eval_iv``; products use fma for the
error-free transformation.
"""

from libc.math cimport fma, nextafter, sin, cos, exp, ceil, fabs, INFINITY, NAN, M_PI

BACKEND = "cython"

cdef enum:
    STACK = 256

cdef double TWO_PI = 2.0 * M_PI
cdef double HALF_PI = 0.5 * M_PI
cdef double SMALL = 1.0e-289
cdef double LARGE = 1.0e299

cdef inline bint finite(double x) noexcept nogil:
    return x - x == 0.0

cdef inline double add_down(double a, double b) noexcept nogil:
    cdef double s = a + b, bb, e
    if not finite(s):
        return s
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    if e < 0.0:
        return nextafter(s, -INFINITY)
    return s

cdef inline double add_up(double a, double b) noexcept nogil:
    cdef double s = a + b, bb, e
    if not finite(s):
        return s
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    if e > 0.0:
        return nextafter(s, INFINITY)
    return s

cdef inline double mul_down(double a, double b) noexcept nogil:
    cdef double p, e
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not finite(p):
        return p
    if fabs(p) < SMALL or fabs(a) > LARGE or fabs(b) > LARGE:
        return nextafter(p, -INFINITY)
    e = fma(a, b, -p)
    if e < 0.0:
        return nextafter(p, -INFINITY)
    return p

cdef inline double mul_up(double a, double b) noexcept nogil:
    cdef double p, e
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not finite(p):
        return p
    if fabs(p) < SMALL or fabs(a) > LARGE or fabs(b) > LARGE:
        return nextafter(p, INFINITY)
    e = fma(a, b, -p)
    if e > 0.0:
        return nextafter(p, INFINITY)
    return p

cdef inline double div_down(double a, double b) noexcept nogil:
    if a == 0.0:
        return 0.0
    return nextafter(a / b, -INFINITY)

cdef inline double div_up(double a, double b) noexcept nogil:
    if a == 0.0:
        return 0.0
    return nextafter(a / b, INFINITY)

cdef inline double dmin(double a, double b) noexcept nogil:
    return a if a < b else b

cdef inline double dmax(double a, double b) noexcept nogil:
    return a if a > b else b

cdef inline void ivmul(double alo, double ahi, double blo, double bhi, double* lo, double* hi) noexcept nogil:
    lo[0] = dmin(dmin(mul_down(alo, blo), mul_down(alo, bhi)), dmin(mul_down(ahi, blo), mul_down(ahi, bhi)))
    hi[0] = dmax(dmax(mul_up(alo, blo), mul_up(alo, bhi)), dmax(mul_up(ahi, blo), mul_up(ahi, bhi)))

cdef inline void ivpowi(double alo, double ahi, long n, double* lo, double* hi) noexcept nogil:
    cdef double rlo = 1.0, rhi = 1.0, blo = alo, bhi = ahi, tlo, thi
    cdef bint first = True
    if n == 0:
        lo[0] = 1.0
        hi[0] = 1.0
        return
    while n:
        if n & 1:
            if first:
                rlo = blo
                rhi = bhi
                first = False
            else:
                ivmul(rlo, rhi, blo, bhi, &tlo, &thi)
                rlo = tlo
                rhi = thi
        n >>= 1
        if n:
            ivmul(blo, bhi, blo, bhi, &tlo, &thi)
            blo = tlo
            bhi = thi
    lo[0] = rlo
    hi[0] = rhi

cdef inline bint hits(double lo, double hi, double phase) noexcept nogil:
    cdef double k = ceil((lo - phase) / TWO_PI - 1e-9)
    cdef double c = phase + k * TWO_PI
    return c <= hi + 1e-9 * (1.0 + fabs(c))

cdef inline void ivtrig(double lo, double hi, bint is_sin, double* rlo, double* rhi) noexcept nogil:
    cdef double a, b, mx_phase, mn_phase
    if not (finite(lo) and finite(hi)) or hi - lo >= 6.2 or fabs(lo) > 1e8 or fabs(hi) > 1e8:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    if is_sin:
        a = sin(lo)
        b = sin(hi)
        mx_phase = HALF_PI
        mn_phase = -HALF_PI
    else:
        a = cos(lo)
        b = cos(hi)
        mx_phase = 0.0
        mn_phase = M_PI
    rlo[0] = nextafter(nextafter(dmin(a, b), -INFINITY), -INFINITY)
    rhi[0] = nextafter(nextafter(dmax(a, b), INFINITY), INFINITY)
    if hits(lo, hi, mx_phase):
        rhi[0] = 1.0
    if hits(lo, hi, mn_phase):
        rlo[0] = -1.0
    if rlo[0] < -1.0:
        rlo[0] = -1.0
    if rhi[0] > 1.0:
        rhi[0] = 1.0


cdef int run(const long long[:] code, const double[:] consts,
             double xlo, double xhi, double ylo, double yhi,
             double* out_lo, double* out_hi) noexcept nogil:
    cdef double slo[STACK]
    cdef double shi[STACK]
    cdef int sp = 0
    cdef Py_ssize_t k = 0, n = code.shape[0]
    cdef long long op, arg
    cdef double alo, ahi, blo, bhi, lo, hi
    while k < n:
        op = code[k]
        arg = code[k + 1]
        k += 2
        if op == 0:
            slo[sp] = xlo; shi[sp] = xhi; sp += 1
        elif op == 1:
            slo[sp] = ylo; shi[sp] = yhi; sp += 1
        elif op == 2:
            slo[sp] = consts[2 * arg]; shi[sp] = consts[2 * arg + 1]; sp += 1
        elif op == 7:
            lo = slo[sp - 1]
            slo[sp - 1] = -shi[sp - 1]
            shi[sp - 1] = -lo
        elif op == 8:
            ivmul(slo[sp - 1], shi[sp - 1], slo[sp - 1], shi[sp - 1], &lo, &hi)
            slo[sp - 1] = lo; shi[sp - 1] = hi
        elif op == 9:
            ivpowi(slo[sp - 1], shi[sp - 1], arg, &lo, &hi)
            slo[sp - 1] = lo; shi[sp - 1] = hi
        elif op == 10 or op == 11:
            ivtrig(slo[sp - 1], shi[sp - 1], op == 10, &lo, &hi)
            slo[sp - 1] = lo; shi[sp - 1] = hi
        elif op == 12:
            lo = nextafter(nextafter(exp(slo[sp - 1]), -INFINITY), -INFINITY)
            hi = nextafter(nextafter(exp(shi[sp - 1]), INFINITY), INFINITY)
            if lo < 0.0:
                lo = 0.0
            slo[sp - 1] = lo; shi[sp - 1] = hi
        else:
            sp -= 1
            blo = slo[sp]; bhi = shi[sp]
            alo = slo[sp - 1]; ahi = shi[sp - 1]
            if op == 3:
                slo[sp - 1] = add_down(alo, blo); shi[sp - 1] = add_up(ahi, bhi)
            elif op == 4:
                slo[sp - 1] = add_down(alo, -bhi); shi[sp - 1] = add_up(ahi, -blo)
            elif op == 5:
                ivmul(alo, ahi, blo, bhi, &lo, &hi)
                slo[sp - 1] = lo; shi[sp - 1] = hi
            elif op == 6:
                if blo <= 0.0 <= bhi:
                    return 1
                slo[sp - 1] = dmin(dmin(div_down(alo, blo), div_down(alo, bhi)),
                                   dmin(div_down(ahi, blo), div_down(ahi, bhi)))
                shi[sp - 1] = dmax(dmax(div_up(alo, blo), div_up(alo, bhi)),
                                   dmax(div_up(ahi, blo), div_up(ahi, bhi)))
    out_lo[0] = slo[sp - 1]
    out_hi[0] = shi[sp - 1]
    return 0


def eval_iv(const long long[:] code, const double[:] consts,
            double xlo, double xhi, double ylo, double yhi):
    """Evaluate a compiled program over the box; ``(nan, nan)`` on domain error."""
    cdef double lo = 0.0, hi = 0.0
    cdef int status
    with nogil:
        status = run(code, consts, xlo, xhi, ylo, yhi, &lo, &hi)
    if status:
        return NAN, NAN
    return lo, hi
