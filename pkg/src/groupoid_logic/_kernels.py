"""Hot enumeration loops, with a numba path and a pure-numpy path.

Every public kernel here dispatches to ``<name>_numba`` when numba is
importable and ``GROUPOID_LOGIC_DISABLE_NUMBA`` is unset (or ``0``), and to
``<name>_numpy`` otherwise.  Both variants are always defined so tests and the
benchmark can compare them directly; the numba variants are ``None`` when
numba is unavailable.

Index conventions: composition tables are dense ``int32`` arrays with ``-1``
for undefined entries, and ``compose[a, b]`` is ``a ∘ b`` (``b`` first).
Fibers are given in CSR form: ``ptr[j]:ptr[j + 1]`` slices ``idx``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False


def _env_disabled() -> bool:
    return os.environ.get("GROUPOID_LOGIC_DISABLE_NUMBA", "0").strip().lower() not in (
        "",
        "0",
        "false",
        "no",
    )


USE_NUMBA = NUMBA_AVAILABLE and not _env_disabled()

_jit = njit(cache=True, nogil=True) if NUMBA_AVAILABLE else None


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# associativity scan
# ---------------------------------------------------------------------------


def _assoc_py(compose, fib_ptr, fib_idx, source, limit):
    n = compose.shape[0]
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    count = 0
    for a in range(n):
        for b in range(n):
            ab = compose[a, b]
            if ab < 0:
                continue
            j = source[b]
            for k in range(fib_ptr[j], fib_ptr[j + 1]):
                c = fib_idx[k]
                bc = compose[b, c]
                if bc < 0:
                    continue
                lhs = compose[ab, c]
                rhs = compose[a, bc]
                if lhs != rhs or lhs < 0:
                    if count < limit:
                        out[count, 0] = a
                        out[count, 1] = b
                        out[count, 2] = c
                    count += 1
    return out, count


associativity_violations_numba = _jit(_assoc_py) if NUMBA_AVAILABLE else None


def associativity_violations_numpy(compose, fib_ptr, fib_idx, source, limit):
    a, b = np.nonzero(compose >= 0)
    ab = compose[a, b]
    j = source[b]
    sizes = fib_ptr[j + 1] - fib_ptr[j]
    rep = np.repeat(np.arange(a.size), sizes)
    # position of each repeated row inside its fiber slice
    offsets = np.arange(rep.size) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    c = fib_idx[fib_ptr[j[rep]] + offsets]
    a, b, ab = a[rep], b[rep], ab[rep]
    bc = compose[b, c]
    keep = bc >= 0
    a, b, c, ab, bc = a[keep], b[keep], c[keep], ab[keep], bc[keep]
    lhs = compose[ab, c]
    rhs = compose[a, bc]
    bad = (lhs != rhs) | (lhs < 0)
    triples = np.stack([a[bad], b[bad], c[bad]], axis=1).astype(np.int64)
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    m = min(limit, len(triples))
    out[:m] = triples[:m]
    return out, int(len(triples))


def associativity_violations(compose, fib_ptr, fib_idx, source, limit=64):
    """Composable triples ``(a, b, c)`` where ``(a∘b)∘c != a∘(b∘c)``.

    ``fib_ptr/fib_idx`` must index morphisms by target.  Returns at most
    ``limit`` triples plus the total count.
    """
    fn = associativity_violations_numba if USE_NUMBA else associativity_violations_numpy
    out, count = fn(compose, fib_ptr, fib_idx, source, limit)
    return out[: min(limit, count)], int(count)


# ---------------------------------------------------------------------------
# subset product  C = B ∘ A
# ---------------------------------------------------------------------------


def _set_product_py(a_mask, b_mask, compose, src_ptr, src_idx, target):
    n = a_mask.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for alpha in range(n):
        if not a_mask[alpha]:
            continue
        j = target[alpha]
        for k in range(src_ptr[j], src_ptr[j + 1]):
            beta = src_idx[k]
            if b_mask[beta]:
                out[compose[beta, alpha]] = True
    return out


set_product_numba = _jit(_set_product_py) if NUMBA_AVAILABLE else None


def set_product_numpy(a_mask, b_mask, compose, src_ptr, src_idx, target):
    out = np.zeros(a_mask.shape[0], dtype=np.bool_)
    sub = compose[np.ix_(np.flatnonzero(b_mask), np.flatnonzero(a_mask))]
    out[sub[sub >= 0]] = True
    return out


def set_product(a_mask, b_mask, compose, src_ptr, src_idx, target):
    """Mask of ``{β∘α : α ∈ A, β ∈ B}``; ``src_ptr/src_idx`` index by source."""
    fn = set_product_numba if USE_NUMBA else set_product_numpy
    return fn(a_mask, b_mask, compose, src_ptr, src_idx, target)


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------


def _convolve_py(f, h, weight, tgt_ptr, tgt_idx, inverse, compose, target):
    n = f.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for gamma in range(n):
        j = target[gamma]
        acc = 0j
        for k in range(tgt_ptr[j], tgt_ptr[j + 1]):
            alpha = tgt_idx[k]
            fa = f[alpha]
            if fa == 0:
                continue
            beta = compose[inverse[alpha], gamma]
            acc += fa * h[beta] * weight[alpha]
        out[gamma] = acc
    return out


convolve_numba = _jit(_convolve_py) if NUMBA_AVAILABLE else None


def convolve_numpy(f, h, weight, tgt_ptr, tgt_idx, inverse, compose, target):
    n = f.shape[0]
    sizes = np.diff(tgt_ptr)[target]
    gamma = np.repeat(np.arange(n), sizes)
    starts = np.repeat(tgt_ptr[target], sizes)
    offsets = np.arange(gamma.size) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    alpha = tgt_idx[starts + offsets]
    beta = compose[inverse[alpha], gamma]
    terms = f[alpha] * h[beta] * weight[alpha]
    re = np.bincount(gamma, weights=terms.real, minlength=n)
    im = np.bincount(gamma, weights=terms.imag, minlength=n)
    return re + 1j * im


def convolve(f, h, weight, tgt_ptr, tgt_idx, inverse, compose, target):
    """``out[γ] = Σ_{α ∈ G^{t(γ)}} f[α] h[α⁻¹∘γ] weight[α]``, α ascending."""
    fn = convolve_numba if USE_NUMBA else convolve_numpy
    return fn(
        np.ascontiguousarray(f, dtype=np.complex128),
        np.ascontiguousarray(h, dtype=np.complex128),
        weight,
        tgt_ptr,
        tgt_idx,
        inverse,
        compose,
        target,
    )


# ---------------------------------------------------------------------------
# grade-2 table over every subset of objects
# ---------------------------------------------------------------------------


def _grade2_table_py(source, target, weights, n_obj):
    size = 1 << n_obj
    out = np.zeros(size, dtype=np.complex128)
    m = source.shape[0]
    for mask in range(size):
        acc = 0j
        for g in range(m):
            if (mask >> source[g]) & 1 and (mask >> target[g]) & 1:
                acc += weights[g]
        out[mask] = acc
    return out


grade2_table_numba = _jit(_grade2_table_py) if NUMBA_AVAILABLE else None


def grade2_table_numpy(source, target, weights, n_obj):
    masks = np.arange(1 << n_obj, dtype=np.int64)
    inside = ((masks[:, None] >> source[None, :]) & 1) & ((masks[:, None] >> target[None, :]) & 1)
    return inside.astype(np.complex128) @ weights.astype(np.complex128)


def grade2_table(source, target, weights, n_obj):
    """``out[m] = Σ weights[γ]`` over γ with both endpoints in the subset ``m``."""
    fn = grade2_table_numba if USE_NUMBA else grade2_table_numpy
    return fn(
        source.astype(np.int64),
        target.astype(np.int64),
        np.ascontiguousarray(weights, dtype=np.complex128),
        n_obj,
    )


# ---------------------------------------------------------------------------
# third-order sum rule over every disjoint triple
# ---------------------------------------------------------------------------


def _decode(code, n):
    a = 0
    b = 0
    c = 0
    for i in range(n):
        d = code & 3
        code >>= 2
        if d == 1:
            a |= 1 << i
        elif d == 2:
            b |= 1 << i
        elif d == 3:
            c |= 1 << i
    return a, b, c


def _sorkin_py(mu2, n, start, stop):
    worst = -1.0
    worst_code = start
    for code in range(start, stop):
        a = 0
        b = 0
        c = 0
        x = code
        for i in range(n):
            d = x & 3
            x >>= 2
            if d == 1:
                a |= 1 << i
            elif d == 2:
                b |= 1 << i
            elif d == 3:
                c |= 1 << i
        r = (
            mu2[a | b | c]
            - mu2[a | b]
            - mu2[a | c]
            - mu2[b | c]
            + mu2[a]
            + mu2[b]
            + mu2[c]
        )
        r = abs(r)
        if r > worst:
            worst = r
            worst_code = code
    return worst, worst_code


sorkin_scan_numba = _jit(_sorkin_py) if NUMBA_AVAILABLE else None


def sorkin_scan_numpy(mu2, n, start, stop, chunk=1 << 18):
    worst = -1.0
    worst_code = start
    for lo in range(start, stop, chunk):
        codes = np.arange(lo, min(stop, lo + chunk), dtype=np.int64)
        a = np.zeros_like(codes)
        b = np.zeros_like(codes)
        c = np.zeros_like(codes)
        x = codes.copy()
        for i in range(n):
            d = x & 3
            x >>= 2
            a |= (d == 1).astype(np.int64) << i
            b |= (d == 2).astype(np.int64) << i
            c |= (d == 3).astype(np.int64) << i
        r = np.abs(
            mu2[a | b | c] - mu2[a | b] - mu2[a | c] - mu2[b | c] + mu2[a] + mu2[b] + mu2[c]
        )
        k = int(np.argmax(r))
        if r[k] > worst:
            worst = float(r[k])
            worst_code = int(codes[k])
    return worst, worst_code


def sorkin_scan(mu2, n, start, stop):
    """Max ``|I3|`` over assignment codes ``[start, stop)`` of ``4**n``.

    A code assigns each object base-4 digit 0 (none), 1 (a), 2 (b), 3 (c).
    Ties keep the smallest code, so chunked scans reduce deterministically.
    """
    fn = sorkin_scan_numba if USE_NUMBA else sorkin_scan_numpy
    worst, code = fn(np.ascontiguousarray(mu2, dtype=np.complex128), n, start, stop)
    return float(worst), int(code)


def decode_triple(code: int, n: int) -> tuple[int, int, int]:
    return _decode(code, n)


# ---------------------------------------------------------------------------
# conditioning relation over subsets
# ---------------------------------------------------------------------------


def subset_reach(reach_obj, masks):
    """For each bitmask in ``masks``, OR of ``reach_obj[i]`` over its bits."""
    out = np.zeros(masks.shape[0], dtype=np.int64)
    for i in range(reach_obj.shape[0]):
        has = ((masks >> i) & 1).astype(bool)
        out[has] |= reach_obj[i]
    return out


def _transitivity_py(rel):
    m = rel.shape[0]
    for a in range(m):
        for c in range(m):
            if rel[a, c]:
                continue
            for b in range(m):
                if rel[a, b] and rel[b, c]:
                    return a, b, c
    return -1, -1, -1


transitivity_witness_numba = _jit(_transitivity_py) if NUMBA_AVAILABLE else None


def transitivity_witness_numpy(rel):
    for a, c in zip(*np.nonzero(~rel)):
        hits = np.flatnonzero(rel[a] & rel[:, c])
        if hits.size:
            return int(a), int(hits[0]), int(c)
    return -1, -1, -1


def transitivity_witness(rel):
    """First ``(a, b, c)`` in row-major ``(a, c)`` order with aRb, bRc, not aRc."""
    fn = transitivity_witness_numba if USE_NUMBA else transitivity_witness_numpy
    a, b, c = fn(np.ascontiguousarray(rel, dtype=np.bool_))
    return int(a), int(b), int(c)


# ---------------------------------------------------------------------------
# lattice identities over triples
# ---------------------------------------------------------------------------


def _modular_py(leq, meet, join, limit):
    m = leq.shape[0]
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    count = 0
    for a in range(m):
        for c in range(m):
            if not leq[a, c]:
                continue
            for b in range(m):
                if join[a, meet[b, c]] != meet[join[a, b], c]:
                    if count < limit:
                        out[count, 0] = a
                        out[count, 1] = b
                        out[count, 2] = c
                    count += 1
    return out, count


def _distributive_py(meet, join, limit):
    m = meet.shape[0]
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    count = 0
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if meet[a, join[b, c]] != join[meet[a, b], meet[a, c]]:
                    if count < limit:
                        out[count, 0] = a
                        out[count, 1] = b
                        out[count, 2] = c
                    count += 1
    return out, count


modular_violations_numba = _jit(_modular_py) if NUMBA_AVAILABLE else None
distributive_violations_numba = _jit(_distributive_py) if NUMBA_AVAILABLE else None


def modular_violations_numpy(leq, meet, join, limit):
    found = []
    count = 0
    m = leq.shape[0]
    b = np.arange(m)
    for a in range(m):
        for c in np.flatnonzero(leq[a]):
            bad = b[join[a, meet[b, c]] != meet[join[a, b], c]]
            count += bad.size
            found.extend((a, int(x), int(c)) for x in bad[: max(0, limit - len(found))])
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    if found:
        out[: len(found)] = found
    return out, count


def distributive_violations_numpy(meet, join, limit):
    found = []
    count = 0
    m = meet.shape[0]
    for a in range(m):
        lhs = meet[a][join]
        rhs = join[meet[a][:, None], meet[a][None, :]]
        bb, cc = np.nonzero(lhs != rhs)
        count += bb.size
        found.extend((a, int(x), int(y)) for x, y in list(zip(bb, cc))[: max(0, limit - len(found))])
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    if found:
        out[: len(found)] = found
    return out, count


def modular_violations(leq, meet, join, limit=64):
    fn = modular_violations_numba if USE_NUMBA else modular_violations_numpy
    out, count = fn(leq, meet, join, limit)
    return out[: min(limit, count)], int(count)


def distributive_violations(meet, join, limit=64):
    fn = distributive_violations_numba if USE_NUMBA else distributive_violations_numpy
    out, count = fn(meet, join, limit)
    return out[: min(limit, count)], int(count)
