"""Accelerated kernels for the two hot loops: sparse-polynomial product and
edge-subset expansion.

Monomials are encoded as fixed-width rows ``[zexp, yexp, m_1 .. m_N]`` where
``m_i`` is the multiplicity of part size ``i`` in the x-partition, so a
monomial product is a row addition.  The numba path packs the int16 lanes
into int64 words (entry bounds make lane sums carry-free) and aggregates
into an open-addressing table hashed by additive row signatures; equality is
always decided by comparing full rows, never by the hash alone.

Backends
--------
``numba``   @njit kernels (default when numba imports).
``numpy``   vectorised fallback: chunked broadcast + unique-row aggregation.
``python``  plain dict arithmetic; always exact, used for tiny inputs and as
            the big-integer escape hatch.

Selection: the ``UPOLY_BACKEND`` environment variable, or ``set_backend()``.
Coefficients run through int64 only when a conservative bound proves the
whole aggregation fits; otherwise the dict path with Python integers is used,
so results are exact for coefficients of any size.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAS_NUMBA = False

__all__ = [
    "available_backends",
    "get_backend",
    "set_backend",
    "mul_terms",
    "subset_class_counts",
]

# Pair counts below this go straight to the dict path (encode/decode overhead
# dominates the kernel win for small products).
SMALL_PRODUCT_CUTOFF = 4096

# Margin below 2**63 for the int64 overflow guard.
_INT64_SAFE = 1 << 62

_UM = None  # lazy import of polycore.UMonomial to avoid a module cycle


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy", "python") if _HAS_NUMBA else ("numpy", "python")


def _default_backend() -> str:
    env = os.environ.get("UPOLY_BACKEND", "").strip().lower()
    if env in ("numba", "numpy", "python"):
        if env == "numba" and not _HAS_NUMBA:
            return "numpy"
        return env
    return "numba" if _HAS_NUMBA else "numpy"


_backend = _default_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Select the kernel backend ("numba", "numpy" or "python")."""
    global _backend
    if name not in ("numba", "numpy", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    _backend = name


# ---------------------------------------------------------------------------
# dict path (exact for arbitrary coefficient sizes)
# ---------------------------------------------------------------------------


def _monomial_type():
    global _UM
    if _UM is None:
        from .polycore import UMonomial

        _UM = UMonomial
    return _UM


def mul_dict(ta: dict, tb: dict) -> dict:
    """Plain dict product; keys are (xpart, zexp, yexp) tuples."""
    um = _monomial_type()
    if len(ta) < len(tb):
        ta, tb = tb, ta
    out: dict = {}
    for mb, cb in tb.items():
        pb, zb, yb = mb
        for ma, ca in ta.items():
            pa, za, ya = ma
            if pb:
                parts = tuple(sorted(pa + pb, reverse=True)) if pa else pb
            else:
                parts = pa
            key = um(parts, za + zb, ya + yb)
            c = out.get(key, 0) + ca * cb
            if c:
                out[key] = c
            else:
                del out[key]
    return out


# ---------------------------------------------------------------------------
# encode / decode between term dicts and int64 matrices
# ---------------------------------------------------------------------------


# Keys are encoded as int16 rows; entries must stay below this bound on each
# operand so that pairwise sums cannot wrap.
_KEY_ENTRY_LIMIT = 1 << 14


def _encode(terms: dict, width: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Encode to (int16 key matrix, int64 coefficients); None if out of range."""
    keys = np.zeros((len(terms), width), dtype=np.int16)
    coeffs = np.empty(len(terms), dtype=np.int64)
    for i, (mono, c) in enumerate(terms.items()):
        parts, zexp, yexp = mono
        if zexp >= _KEY_ENTRY_LIMIT or yexp >= _KEY_ENTRY_LIMIT or len(parts) >= _KEY_ENTRY_LIMIT:
            return None
        keys[i, 0] = zexp
        keys[i, 1] = yexp
        for p in parts:
            keys[i, p + 1] += 1
        coeffs[i] = c
    return keys, coeffs


def _decode(keys: np.ndarray, coeffs: np.ndarray) -> dict:
    um = _monomial_type()
    npart = keys.shape[1] - 2
    out: dict = {}
    for row, c in zip(keys.tolist(), coeffs.tolist()):
        parts: list[int] = []
        for p in range(npart, 0, -1):
            mult = row[p + 1]
            if mult:
                parts.extend((p,) * mult)
        out[um(tuple(parts), row[0], row[1])] = c
    return out


def _max_part(terms: dict) -> int:
    best = 0
    for mono in terms:
        parts = mono[0]
        if parts and parts[0] > best:
            best = parts[0]
    return best


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

_WEIGHT_CACHE: dict[int, np.ndarray] = {}


def _column_weights(width: int) -> np.ndarray:
    """Deterministic odd 64-bit column weights (splitmix stream).

    Row signatures are dot products with these weights mod 2**64, so the
    signature of a monomial product is the wrapping sum of the operand
    signatures: an O(1) hash per pair.  Collisions are resolved by full-row
    comparison, so results stay exact.
    """
    cached = _WEIGHT_CACHE.get(width)
    if cached is not None:
        return cached
    out = np.empty(width, dtype=np.uint64)
    x = 0x243F6A8885A308D3
    for t in range(width):
        x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        z ^= z >> 31
        out[t] = np.uint64(z | 1)
    _WEIGHT_CACHE[width] = out
    return out


def _row_signatures(keys: np.ndarray) -> np.ndarray:
    weights = _column_weights(keys.shape[1])
    with np.errstate(over="ignore"):
        return (keys.astype(np.uint64) * weights[None, :]).sum(axis=1, dtype=np.uint64)


def _pack_words(keys16: np.ndarray) -> np.ndarray:
    """Pack int16 key rows into int64 words, four lanes per word.

    Entry values stay below 2**14 on each operand, so lane-wise sums never
    carry across lanes and packed rows can be added as plain int64 words.
    """
    n, width = keys16.shape
    padded_width = (width + 3) & ~3
    if padded_width != width:
        padded = np.zeros((n, padded_width), dtype=np.int16)
        padded[:, :width] = keys16
    else:
        padded = keys16
    return np.ascontiguousarray(padded).view(np.int64)


def _unpack_words(packed: np.ndarray, width: int) -> np.ndarray:
    return np.ascontiguousarray(packed).view(np.int16)[:, :width]


if _HAS_NUMBA:

    @numba.njit(cache=True)
    def _packed_insert(tbl, sigs, row, sig, c):
        # tbl rows are [coefficient, key words...]; sigs==0 marks empty slots
        cap = sigs.shape[0]
        nwords = row.shape[0]
        idx = np.int64(sig & np.uint64(cap - 1))
        while True:
            s = sigs[idx]
            if s == np.uint64(0):
                sigs[idx] = sig
                tbl[idx, 0] = c
                for t in range(nwords):
                    tbl[idx, 1 + t] = row[t]
                return 1
            if s == sig:
                match = True
                for t in range(nwords):
                    if tbl[idx, 1 + t] != row[t]:
                        match = False
                        break
                if match:
                    tbl[idx, 0] += c
                    return 0
            idx += 1
            if idx == cap:
                idx = 0

    @numba.njit(cache=True)
    def _packed_rehash(ntbl, nsigs, tbl, slot, sig):
        cap = nsigs.shape[0]
        idx = np.int64(sig & np.uint64(cap - 1))
        while nsigs[idx] != np.uint64(0):
            idx += 1
            if idx == cap:
                idx = 0
        nsigs[idx] = sig
        for t in range(tbl.shape[1]):
            ntbl[idx, t] = tbl[slot, t]

    @numba.njit(cache=True)
    def _mul_kernel(pa, ca, siga, pb, cb, sigb):
        na = pa.shape[0]
        nb = pb.shape[0]
        nwords = pa.shape[1]
        cap = 1 << 12
        while cap < 4 * (na + nb):
            cap <<= 1
        tbl = np.empty((cap, nwords + 1), dtype=np.int64)
        sigs = np.zeros(cap, dtype=np.uint64)
        count = 0
        row = np.empty(nwords, dtype=np.int64)
        for i in range(na):
            ci = ca[i]
            si = siga[i]
            for j in range(nb):
                for t in range(nwords):
                    row[t] = pa[i, t] + pb[j, t]
                sig = si + sigb[j]
                if sig == np.uint64(0):  # 0 is the empty-slot sentinel
                    sig = np.uint64(1)
                if 2 * (count + 1) > cap:
                    ncap = cap << 1
                    ntbl = np.empty((ncap, nwords + 1), dtype=np.int64)
                    nsigs = np.zeros(ncap, dtype=np.uint64)
                    for slot in range(cap):
                        if sigs[slot] != np.uint64(0):
                            _packed_rehash(ntbl, nsigs, tbl, slot, sigs[slot])
                    tbl, sigs, cap = ntbl, nsigs, ncap
                count += _packed_insert(tbl, sigs, row, sig, ci * cb[j])
        out = np.empty((count, nwords + 1), dtype=np.int64)
        m = 0
        for slot in range(cap):
            if sigs[slot] != np.uint64(0) and tbl[slot, 0] != 0:
                for t in range(nwords + 1):
                    out[m, t] = tbl[slot, t]
                m += 1
        return out[:m]


# ---------------------------------------------------------------------------
# numpy fallback for the product
# ---------------------------------------------------------------------------


def _aggregate_sum(rows: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum vals over identical rows; drops zero sums."""
    arr = np.ascontiguousarray(rows)
    void = np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))
    flat = arr.reshape(arr.shape[0], -1).view(void).ravel()
    uniq, inverse = np.unique(flat, return_inverse=True)
    sums = np.zeros(uniq.shape[0], dtype=vals.dtype)
    np.add.at(sums, inverse, vals)
    nz = sums != 0
    out_rows = uniq.view(arr.dtype).reshape(-1, arr.shape[1])[nz]
    return out_rows, sums[nz]


def _mul_numpy(ka: np.ndarray, ca: np.ndarray, kb: np.ndarray, cb: np.ndarray):
    width = ka.shape[1]
    step = max(1, (1 << 20) // max(1, kb.shape[0]))
    acc_k: list[np.ndarray] = []
    acc_c: list[np.ndarray] = []
    acc_rows = 0
    for s0 in range(0, ka.shape[0], step):
        blk = (ka[s0 : s0 + step, None, :] + kb[None, :, :]).reshape(-1, width)
        vals = (ca[s0 : s0 + step, None] * cb[None, :]).reshape(-1)
        k2, v2 = _aggregate_sum(blk, vals)
        acc_k.append(k2)
        acc_c.append(v2)
        acc_rows += k2.shape[0]
        if acc_rows > (1 << 21):
            k3, v3 = _aggregate_sum(np.concatenate(acc_k), np.concatenate(acc_c))
            acc_k, acc_c, acc_rows = [k3], [v3], k3.shape[0]
    return _aggregate_sum(np.concatenate(acc_k), np.concatenate(acc_c))


def mul_terms(ta: dict, tb: dict) -> dict:
    """Exact product of two term dicts, dispatched to the active backend."""
    if not ta or not tb:
        return {}
    backend = _backend
    if (
        backend == "python"
        or len(ta) == 1
        or len(tb) == 1
        or len(ta) * len(tb) <= SMALL_PRODUCT_CUTOFF
    ):
        return mul_dict(ta, tb)
    max_a = max(abs(c) for c in ta.values())
    max_b = max(abs(c) for c in tb.values())
    if max_a * max_b * min(len(ta), len(tb)) >= _INT64_SAFE:
        return mul_dict(ta, tb)
    width = max(_max_part(ta), _max_part(tb)) + 2
    enc_a = _encode(ta, width)
    enc_b = _encode(tb, width)
    if enc_a is None or enc_b is None:  # exponents out of int16 range
        return mul_dict(ta, tb)
    ka, ca = enc_a
    kb, cb = enc_b
    if backend == "numba":
        out = _mul_kernel(
            _pack_words(ka), ca, _row_signatures(ka),
            _pack_words(kb), cb, _row_signatures(kb),
        )
        keys, coeffs = _unpack_words(out[:, 1:], width), out[:, 0]
    else:
        keys, coeffs = _mul_numpy(ka, ca, kb, cb)
    return _decode(keys, coeffs)


# ---------------------------------------------------------------------------
# edge-subset expansion
# ---------------------------------------------------------------------------


def _subset_rows_impl(n, eu, ev, root, s0, s1, out):
    m = eu.shape[0]
    parent = np.empty(n, dtype=np.int64)
    size = np.empty(n, dtype=np.int64)
    for s in range(s0, s1):
        for v in range(n):
            parent[v] = v
            size[v] = 1
        picked = 0
        for e in range(m):
            if (s >> e) & 1:
                picked += 1
                a = eu[e]
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                b = ev[e]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a != b:
                    if size[a] < size[b]:
                        a, b = b, a
                    parent[b] = a
                    size[a] += size[b]
        row = s - s0
        rootrep = -1
        if root >= 0:
            r = root
            while parent[r] != r:
                r = parent[r]
            rootrep = r
            out[row, 0] = size[r]
        ncomp = 0
        for v in range(n):
            if parent[v] == v:
                ncomp += 1
                if v != rootrep:
                    out[row, size[v] + 1] += 1
        out[row, 1] = picked - (n - ncomp)


if _HAS_NUMBA:
    _subset_rows_njit = numba.njit(cache=True)(_subset_rows_impl)


def subset_class_counts(
    n: int,
    edges: list[tuple[int, int]],
    root: int = -1,
    chunk_bits: int = 18,
) -> dict[tuple[int, int, tuple[int, ...]], int]:
    """Count edge subsets by their induced class.

    Returns ``{(root_component_size, nullity, other_parts): count}`` where
    ``nullity`` is ``|A| - rank(A)`` and ``other_parts`` is the non-increasing
    tuple of the remaining component sizes.  With ``root < 0`` every component
    lands in ``other_parts`` and the first slot is 0.
    """
    m = len(edges)
    eu = np.fromiter((e[0] for e in edges), dtype=np.int64, count=m)
    ev = np.fromiter((e[1] for e in edges), dtype=np.int64, count=m)
    fill = _subset_rows_njit if (_backend == "numba" and _HAS_NUMBA) else _subset_rows_impl
    counts: dict[tuple[int, int, tuple[int, ...]], int] = {}
    total = 1 << m
    step = 1 << min(chunk_bits, m)
    for s0 in range(0, total, step):
        s1 = min(total, s0 + step)
        out = np.zeros((s1 - s0, n + 2), dtype=np.int16)
        fill(n, eu, ev, root, s0, s1, out)
        urows, ucnt = _aggregate_count(out)
        for row, c in zip(urows.tolist(), ucnt.tolist()):
            parts: list[int] = []
            for p in range(n, 0, -1):
                mult = row[p + 1]
                if mult:
                    parts.extend((p,) * mult)
            key = (row[0], row[1], tuple(parts))
            counts[key] = counts.get(key, 0) + c
    return counts


def _aggregate_count(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    arr = np.ascontiguousarray(rows)
    void = np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))
    flat = arr.reshape(arr.shape[0], -1).view(void).ravel()
    uniq, cnt = np.unique(flat, return_counts=True)
    return uniq.view(arr.dtype).reshape(-1, arr.shape[1]), cnt
