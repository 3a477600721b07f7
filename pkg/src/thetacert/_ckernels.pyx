# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled series kernels.

Each kernel first runs on 64-bit integers with overflow detection and
falls back to Python integers as soon as a coefficient leaves that range.
"""
from libc.stdlib cimport malloc, free

cdef extern from *:
    bint add_ovf "__builtin_add_overflow"(long long a, long long b, long long *res) nogil
    bint sub_ovf "__builtin_sub_overflow"(long long a, long long b, long long *res) nogil
    bint mul_ovf "__builtin_mul_overflow"(long long a, long long b, long long *res) nogil

LIMIT = 2 ** 62


cdef long long* _to_c(list xs, Py_ssize_t n) except? NULL:
    cdef long long* buf = <long long*> malloc(max(n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef Py_ssize_t m = min(len(xs), n)
    try:
        for i in range(m):
            v = xs[i]
            if v >= LIMIT or v <= -LIMIT:
                free(buf)
                return NULL
            buf[i] = v
    except (OverflowError, TypeError):
        free(buf)
        return NULL
    for i in range(m, n):
        buf[i] = 0
    return buf


cdef list _from_c(long long* buf, Py_ssize_t n):
    return [buf[i] for i in range(n)]


cdef int _mul_c(long long* a, Py_ssize_t la, long long* b, Py_ssize_t lb,
                long long* out, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j, top
    cdef long long t
    for i in range(n):
        out[i] = 0
    for i in range(la):
        if a[i] == 0:
            continue
        top = lb if lb < n - i else n - i
        for j in range(top):
            if b[j] == 0:
                continue
            if mul_ovf(a[i], b[j], &t):
                return 1
            if add_ovf(out[i + j], t, &out[i + j]):
                return 1
    return 0


cdef list _mul_obj(list a, list b, Py_ssize_t n):
    cdef list out = [0] * n
    cdef Py_ssize_t i, j, top
    cdef Py_ssize_t la = min(len(a), n)
    cdef Py_ssize_t lb = min(len(b), n)
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = lb if lb < n - i else n - i
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def mul_trunc(list a, list b, Py_ssize_t n):
    if n <= 0:
        return []
    cdef Py_ssize_t la = min(len(a), n)
    cdef Py_ssize_t lb = min(len(b), n)
    cdef long long* ca = _to_c(a, la)
    if ca == NULL:
        return _mul_obj(a, b, n)
    cdef long long* cb = _to_c(b, lb)
    if cb == NULL:
        free(ca)
        return _mul_obj(a, b, n)
    cdef long long* out = <long long*> malloc(n * sizeof(long long))
    cdef int bad
    try:
        with nogil:
            bad = _mul_c(ca, la, cb, lb, out, n)
        if bad:
            return _mul_obj(a, b, n)
        return _from_c(out, n)
    finally:
        free(ca)
        free(cb)
        free(out)


cdef list _div_obj(list a, list b, Py_ssize_t n):
    b0 = b[0]
    cdef list out = [0] * n
    cdef Py_ssize_t k, j
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t la = len(a)
    for k in range(n):
        s = a[k] if k < la else 0
        for j in range(1, min(k, lb - 1) + 1):
            bj = b[j]
            if bj:
                s -= bj * out[k - j]
        out[k] = s if b0 == 1 else -s
    return out


def div_trunc(list a, list b, Py_ssize_t n):
    if not b or b[0] not in (1, -1):
        raise ValueError("leading coefficient of divisor must be +1 or -1")
    if n <= 0:
        return []
    cdef Py_ssize_t lb = min(len(b), n)
    cdef long long* ca = _to_c(a, n)
    if ca == NULL:
        return _div_obj(a, b, n)
    cdef long long* cb = _to_c(b, lb)
    if cb == NULL:
        free(ca)
        return _div_obj(a, b, n)
    cdef long long* out = <long long*> malloc(n * sizeof(long long))
    cdef Py_ssize_t k, j
    cdef long long s, t
    cdef bint bad = False
    cdef long long b0 = cb[0]
    try:
        with nogil:
            for k in range(n):
                s = ca[k]
                for j in range(1, (k if k < lb - 1 else lb - 1) + 1):
                    if cb[j] == 0:
                        continue
                    if mul_ovf(cb[j], out[k - j], &t) or sub_ovf(s, t, &s):
                        bad = True
                        break
                if bad:
                    break
                out[k] = s if b0 == 1 else -s
        if bad:
            return _div_obj(a, b, n)
        return _from_c(out, n)
    finally:
        free(ca)
        free(cb)
        free(out)


cdef list _euler_obj(list f, Py_ssize_t n):
    cdef list out = [0] * n
    out[0] = 1
    cdef Py_ssize_t m, i, r
    cdef long e
    for m in range(1, min(len(f), n)):
        e = f[m]
        if e > 0:
            for r in range(e):
                for i in range(n - 1, m - 1, -1):
                    out[i] -= out[i - m]
        elif e < 0:
            for r in range(-e):
                for i in range(m, n):
                    out[i] += out[i - m]
    return out


def euler_product(list f, Py_ssize_t n):
    if n <= 0:
        return []
    cdef Py_ssize_t lf = min(len(f), n)
    cdef long* cf = <long*> malloc(max(lf, 1) * sizeof(long))
    cdef long long* out = <long long*> malloc(n * sizeof(long long))
    cdef Py_ssize_t m, i, r
    cdef long e
    cdef bint bad = False
    try:
        for m in range(lf):
            cf[m] = f[m]
        with nogil:
            for i in range(n):
                out[i] = 0
            out[0] = 1
            for m in range(1, lf):
                e = cf[m]
                if e > 0:
                    for r in range(e):
                        for i in range(n - 1, m - 1, -1):
                            if sub_ovf(out[i], out[i - m], &out[i]):
                                bad = True
                                break
                        if bad:
                            break
                elif e < 0:
                    for r in range(-e):
                        for i in range(m, n):
                            if add_ovf(out[i], out[i - m], &out[i]):
                                bad = True
                                break
                        if bad:
                            break
                if bad:
                    break
        if bad:
            return _euler_obj(f, n)
        return _from_c(out, n)
    finally:
        free(cf)
        free(out)
