"""Pure-Python series kernels.

All kernels work on dense integer coefficient lists indexed from 0 and
return the first ``n`` coefficients of their result.
"""


def mul_trunc(a, b, n):
    out = [0] * n
    if not a or not b:
        return out
    la = min(len(a), n)
    lb = min(len(b), n)
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def div_trunc(a, b, n):
    """Quotient ``a / b`` where ``b[0]`` is +1 or -1."""
    b0 = b[0]
    if b0 not in (1, -1):
        raise ValueError("leading coefficient of divisor must be +1 or -1")
    out = [0] * n
    lb = len(b)
    for k in range(n):
        s = a[k] if k < len(a) else 0
        for j in range(1, min(k, lb - 1) + 1):
            bj = b[j]
            if bj:
                s -= bj * out[k - j]
        out[k] = s if b0 == 1 else -s
    return out


def euler_product(f, n):
    """Coefficients of prod_{m >= 1} (1 - x^m)^f[m] below x^n."""
    out = [0] * n
    if n == 0:
        return out
    out[0] = 1
    for m in range(1, min(len(f), n)):
        e = f[m]
        if e > 0:
            for _ in range(e):
                for i in range(n - 1, m - 1, -1):
                    out[i] -= out[i - m]
        elif e < 0:
            for _ in range(-e):
                for i in range(m, n):
                    out[i] += out[i - m]
    return out
