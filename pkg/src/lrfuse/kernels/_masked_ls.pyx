# Compiled masked least-squares kernel.
#
# For each target column the observed rows are gathered into a compact
# column-major buffer and handed to LAPACK dgelss (SVD-based minimum-norm
# least squares with relative singular-value cutoff), with the GIL
# released for the whole column loop.  Semantics match
# lrfuse.kernels.reference.solve_columns.

from libc.stdlib cimport free, malloc

import numpy as np

from scipy.linalg.cython_lapack cimport dgelss

BACKEND_NAME = "compiled"


def solve_columns(factor, values, mask, double rcond):
    """Solve min ||factor[mask[:, j]] @ x - values[mask[:, j], j]|| for every j."""
    cdef double[:, ::1] f = np.ascontiguousarray(factor, dtype=np.float64)
    cdef double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef unsigned char[:, ::1] msk = np.ascontiguousarray(
        np.asarray(mask), dtype=np.uint8
    )
    cdef int m = f.shape[0]
    cdef int r = f.shape[1]
    cdef int n = v.shape[1]
    if v.shape[0] != m or msk.shape[0] != m or msk.shape[1] != n:
        raise ValueError("factor/values/mask shapes are inconsistent")

    out_arr = np.zeros((r, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef int ns = m if m < r else r
    cdef int bmax = m if m > r else r
    cdef double *a_buf = <double *> malloc(sizeof(double) * m * r)
    cdef double *b_buf = <double *> malloc(sizeof(double) * bmax)
    cdef double *s_buf = <double *> malloc(sizeof(double) * (ns if ns > 0 else 1))
    cdef int *idx = <int *> malloc(sizeof(int) * m)
    cdef double *work = NULL

    cdef int nrhs = 1, info = 0, rank = 0, lwork = -1
    cdef int mm = m, lda = m, ldb = bmax
    cdef double wk_query = 0.0
    cdef int j, i, c, k, cnt, bad = 0
    try:
        if a_buf == NULL or b_buf == NULL or s_buf == NULL or idx == NULL:
            raise MemoryError()
        # Workspace query for the largest sub-problem (all rows observed).
        dgelss(&mm, &r, &nrhs, a_buf, &lda, b_buf, &ldb, s_buf, &rcond,
               &rank, &wk_query, &lwork, &info)
        if info != 0:
            raise RuntimeError(f"dgelss workspace query failed (info={info})")
        lwork = <int> wk_query + 1
        work = <double *> malloc(sizeof(double) * lwork)
        if work == NULL:
            raise MemoryError()

        with nogil:
            for j in range(n):
                cnt = 0
                for i in range(m):
                    if msk[i, j]:
                        idx[cnt] = i
                        cnt += 1
                if cnt == 0:
                    continue  # out column stays zero
                # Column-major compact design and target.
                for c in range(r):
                    for k in range(cnt):
                        a_buf[c * cnt + k] = f[idx[k], c]
                for k in range(cnt):
                    b_buf[k] = v[idx[k], j]
                mm = cnt
                lda = cnt
                ldb = cnt if cnt > r else r
                info = 0
                dgelss(&mm, &r, &nrhs, a_buf, &lda, b_buf, &ldb, s_buf,
                       &rcond, &rank, work, &lwork, &info)
                if info != 0:
                    bad = j + 1
                    break
                for c in range(r):
                    out[c, j] = b_buf[c]
    finally:
        free(a_buf)
        free(b_buf)
        free(s_buf)
        free(work)
        free(idx)
    if bad:
        raise RuntimeError(f"dgelss failed to converge on column {bad - 1}")
    return out_arr
