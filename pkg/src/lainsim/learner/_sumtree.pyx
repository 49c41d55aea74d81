# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sum tree; numerically identical to the numpy fallback.

Parents are recomputed as child sums on every update, matching the
fallback's arithmetic exactly, so either backend can be swapped in
without changing sampled indices.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef long _next_pow2(long n):
    cdef long p = 1
    while p < n:
        p <<= 1
    return p


cdef class SumTree:
    cdef public long capacity
    cdef long _leaves
    cdef double[::1] _tree
    cdef object _tree_arr

    backend = "cython"

    def __init__(self, long capacity):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._leaves = _next_pow2(capacity)
        self._tree_arr = np.zeros(2 * self._leaves, dtype=np.float64)
        self._tree = self._tree_arr

    def total(self):
        return float(self._tree[1])

    def get(self, indices):
        idx = np.asarray(indices, dtype=np.int64)
        return self._tree_arr[self._leaves + idx].copy()

    def set_many(self, indices, values):
        cdef cnp.int64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
        cdef double[::1] vals = np.ascontiguousarray(values, dtype=np.float64)
        cdef Py_ssize_t i
        cdef long node
        cdef long n = idx.shape[0]
        for i in range(n):
            if idx[i] < 0 or idx[i] >= self.capacity:
                raise IndexError("leaf index out of range")
        for i in range(n):
            self._tree[self._leaves + idx[i]] = vals[i]
        for i in range(n):
            node = (self._leaves + idx[i]) >> 1
            while node >= 1:
                self._tree[node] = self._tree[2 * node] + self._tree[2 * node + 1]
                node >>= 1

    def sample(self, targets):
        cdef double[::1] v = np.ascontiguousarray(targets, dtype=np.float64)
        out_arr = np.empty(v.shape[0], dtype=np.int64)
        cdef cnp.int64_t[::1] out = out_arr
        cdef Py_ssize_t j
        cdef long node, left
        cdef double remaining, left_sum
        for j in range(v.shape[0]):
            node = 1
            remaining = v[j]
            while node < self._leaves:
                left = 2 * node
                left_sum = self._tree[left]
                if remaining <= left_sum:
                    node = left
                else:
                    remaining -= left_sum
                    node = left + 1
            out[j] = node - self._leaves
            if out[j] > self.capacity - 1:
                out[j] = self.capacity - 1
        return out_arr
