# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fault-masked Dijkstra over a CSR adjacency.

Semantics mirror the pure-Python engine exactly: the heap pops by
(distance, node id), neighbors relax in ascending id order (the CSR is
built sorted), and parents update only on strict improvement, so both
backends return identical distances and paths. The inner loop runs
without the GIL, so independent cores may be driven from worker threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY


cdef inline bint _heap_less(double ka, int na, double kb, int nb) nogil:
    return ka < kb or (ka == kb and na < nb)


cdef class DijkstraCore:
    cdef int n
    cdef int[:] indptr
    cdef int[:] nbr
    cdef double[:] wt
    cdef int[:] eid
    cdef unsigned char[:] vmask
    cdef unsigned char[:] emask
    cdef double[:] dist
    cdef int[:] parent
    cdef unsigned char[:] done
    cdef double[:] heap_key
    cdef int[:] heap_node
    cdef object _vset_prev
    cdef object _eset_prev

    def __init__(self, indptr, nbr, wt, eid, int n, int m):
        self.n = n
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int32)
        self.nbr = np.ascontiguousarray(nbr, dtype=np.int32)
        self.wt = np.ascontiguousarray(wt, dtype=np.float64)
        self.eid = np.ascontiguousarray(eid, dtype=np.int32)
        self.vmask = np.zeros(n if n else 1, dtype=np.uint8)
        self.emask = np.zeros(m if m else 1, dtype=np.uint8)
        self.dist = np.empty(n if n else 1, dtype=np.float64)
        self.parent = np.empty(n if n else 1, dtype=np.int32)
        self.done = np.empty(n if n else 1, dtype=np.uint8)
        cdef int cap = len(nbr) + 2
        self.heap_key = np.empty(cap, dtype=np.float64)
        self.heap_node = np.empty(cap, dtype=np.int32)
        self._vset_prev = []
        self._eset_prev = []

    def set_faults(self, vertex_ids, edge_ids):
        cdef int x
        for x in self._vset_prev:
            self.vmask[x] = 0
        for x in self._eset_prev:
            self.emask[x] = 0
        for x in vertex_ids:
            self.vmask[x] = 1
        for x in edge_ids:
            self.emask[x] = 1
        self._vset_prev = list(vertex_ids)
        self._eset_prev = list(edge_ids)

    cdef void _run(self, int source, int target) nogil:
        cdef int i, x, y, e, size, child, pos
        cdef double d, nd, key
        cdef int node
        for i in range(self.n):
            self.dist[i] = INFINITY
            self.parent[i] = -1
            self.done[i] = 0
        self.dist[source] = 0.0
        self.heap_key[0] = 0.0
        self.heap_node[0] = source
        size = 1
        while size > 0:
            # pop min
            d = self.heap_key[0]
            x = self.heap_node[0]
            size -= 1
            key = self.heap_key[size]
            node = self.heap_node[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                if child + 1 < size and _heap_less(
                        self.heap_key[child + 1], self.heap_node[child + 1],
                        self.heap_key[child], self.heap_node[child]):
                    child += 1
                if _heap_less(self.heap_key[child], self.heap_node[child], key, node):
                    self.heap_key[pos] = self.heap_key[child]
                    self.heap_node[pos] = self.heap_node[child]
                    pos = child
                else:
                    break
            if size > 0:
                self.heap_key[pos] = key
                self.heap_node[pos] = node
            if self.done[x]:
                continue
            self.done[x] = 1
            if x == target:
                return
            for i in range(self.indptr[x], self.indptr[x + 1]):
                y = self.nbr[i]
                e = self.eid[i]
                if self.vmask[y] or self.emask[e] or self.done[y]:
                    continue
                nd = d + self.wt[i]
                if nd < self.dist[y]:
                    self.dist[y] = nd
                    self.parent[y] = x
                    # push (nd, y)
                    pos = size
                    size += 1
                    while pos > 0:
                        child = (pos - 1) // 2
                        if _heap_less(nd, y, self.heap_key[child], self.heap_node[child]):
                            self.heap_key[pos] = self.heap_key[child]
                            self.heap_node[pos] = self.heap_node[child]
                            pos = child
                        else:
                            break
                    self.heap_key[pos] = nd
                    self.heap_node[pos] = y

    def distance(self, int source, int target):
        if source == target:
            return 0.0
        with nogil:
            self._run(source, target)
        return self.dist[target]

    def path_to(self, int source, int target):
        # valid after distance(source, target) returned a finite value
        cdef list path = [target]
        cdef int x = target
        while x != source:
            x = self.parent[x]
            path.append(x)
        path.reverse()
        return path

    def distances_from(self, int source):
        with nogil:
            self._run(source, -1)
        return np.asarray(self.dist).copy()
