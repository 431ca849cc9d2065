# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-DP kernel for the exact packing oracle.

Contract-identical to the pure-Python twin in _dppure.py. The 3^m * horizon
submask sweep runs on flat C arrays with the GIL released.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

cdef long long _INF = <long long>1 << 62


def solve_packing_dp(sizes, weights, ready, int capacity, int horizon):
    """Exact min weighted-bin-index packing.

    Returns (value, assignment) where assignment[i] is the 1-based bin of
    item i. Raises ValueError if no packing exists within the horizon.
    """
    cdef int m = len(sizes)
    if m == 0:
        return 0, []
    if m > 20:
        raise ValueError("kernel limited to 20 items")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    for s in sizes:
        if s > capacity:
            raise ValueError("item larger than the bin capacity")

    cdef size_t nmask = (<size_t>1) << m
    cdef int full = <int>(nmask - 1)
    cdef int *csize = <int *>calloc(m, sizeof(int))
    cdef long long *cweight = <long long *>calloc(m, sizeof(long long))
    cdef int *cready = <int *>calloc(m, sizeof(int))
    cdef int *ssum = <int *>calloc(nmask, sizeof(int))
    cdef long long *wsum = <long long *>calloc(nmask, sizeof(long long))
    cdef unsigned char *fits = <unsigned char *>calloc(nmask, 1)
    cdef long long *f_prev = <long long *>calloc(nmask, sizeof(long long))
    cdef long long *f_cur = <long long *>calloc(nmask, sizeof(long long))
    cdef int *choice = <int *>calloc(<size_t>horizon * nmask, sizeof(int))
    cdef int *rmask = <int *>calloc(horizon + 1, sizeof(int))
    if not (csize and cweight and cready and ssum and wsum and fits
            and f_prev and f_cur and choice and rmask):
        free(csize)
        free(cweight)
        free(cready)
        free(ssum)
        free(wsum)
        free(fits)
        free(f_prev)
        free(f_cur)
        free(choice)
        free(rmask)
        raise MemoryError()

    cdef int i, j, lsb_index
    cdef size_t mask, lsb, packed, avail, sub, tgt
    cdef long long base, cand, value
    cdef int *row
    try:
        for i in range(m):
            csize[i] = sizes[i]
            cweight[i] = weights[i]
            cready[i] = ready[i]
        for mask in range(1, nmask):
            lsb = mask & (~mask + 1)
            lsb_index = 0
            while (lsb >> (lsb_index + 1)) != 0:
                lsb_index += 1
            ssum[mask] = ssum[mask ^ lsb] + csize[lsb_index]
            wsum[mask] = wsum[mask ^ lsb] + cweight[lsb_index]
        for mask in range(nmask):
            fits[mask] = 1 if ssum[mask] <= capacity else 0
        for j in range(1, horizon + 1):
            for i in range(m):
                if cready[i] <= j:
                    rmask[j] |= 1 << i
        with nogil:
            for mask in range(nmask):
                f_prev[mask] = _INF
            f_prev[0] = 0
            for j in range(1, horizon + 1):
                memcpy(f_cur, f_prev, nmask * sizeof(long long))
                row = choice + (<size_t>(j - 1)) * nmask
                for packed in range(nmask):
                    base = f_prev[packed]
                    if base >= _INF:
                        continue
                    avail = ((<size_t>full) ^ packed) & <size_t>rmask[j]
                    sub = avail
                    while sub:
                        if fits[sub]:
                            cand = base + (<long long>j) * wsum[sub]
                            tgt = packed | sub
                            if cand < f_cur[tgt]:
                                f_cur[tgt] = cand
                                row[tgt] = <int>sub
                        sub = (sub - 1) & avail
                memcpy(f_prev, f_cur, nmask * sizeof(long long))
        value = f_prev[full]
        if value >= _INF:
            raise ValueError(f"no feasible packing within horizon {horizon}")
        assignment = [0] * m
        mask = <size_t>full
        j = horizon
        while mask:
            if j == 0:
                raise AssertionError("backtrack ran past bin 1")
            sub = <size_t>choice[(<size_t>(j - 1)) * nmask + mask]
            mask ^= sub
            while sub:
                lsb = sub & (~sub + 1)
                lsb_index = 0
                while (lsb >> (lsb_index + 1)) != 0:
                    lsb_index += 1
                assignment[lsb_index] = j
                sub ^= lsb
            j -= 1
        return value, assignment
    finally:
        free(csize)
        free(cweight)
        free(cready)
        free(ssum)
        free(wsum)
        free(fits)
        free(f_prev)
        free(f_cur)
        free(choice)
        free(rmask)
