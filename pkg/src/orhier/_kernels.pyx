# cython: boundscheck=False, wraparound=False
"""Compiled word kernels; same contract as ``_kernels_py``."""

from libc.stdlib cimport malloc, free


def free_reduce(letters):
    cdef Py_ssize_t n = len(letters)
    cdef long *buf = <long *> malloc((n + 1) * sizeof(long))
    cdef Py_ssize_t top = 0
    cdef long x
    try:
        for item in letters:
            x = item
            if top > 0 and buf[top - 1] == -x:
                top -= 1
            else:
                buf[top] = x
                top += 1
        return tuple([buf[i] for i in range(top)])
    finally:
        free(buf)


def cyclic_core(tuple word):
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t j = len(word)
    while j - i >= 2 and <long> word[i] == -(<long> word[j - 1]):
        i += 1
        j -= 1
    return i, j


def substitute(tuple word, images):
    cdef Py_ssize_t cap = 16
    cdef Py_ssize_t top = 0
    cdef long x, y
    cdef Py_ssize_t k, m
    cdef tuple seq
    cdef long *buf = <long *> malloc(cap * sizeof(long))
    cdef long *grown
    try:
        for item in word:
            x = item
            if x > 0:
                seq = tuple(images[x - 1])
            else:
                seq = tuple(images[-x - 1])
            m = len(seq)
            if top + m + 1 > cap:
                while top + m + 1 > cap:
                    cap *= 2
                grown = <long *> malloc(cap * sizeof(long))
                for k in range(top):
                    grown[k] = buf[k]
                free(buf)
                buf = grown
            for k in range(m):
                if x > 0:
                    y = seq[k]
                else:
                    y = -(<long> seq[m - 1 - k])
                if top > 0 and buf[top - 1] == -y:
                    top -= 1
                else:
                    buf[top] = y
                    top += 1
        return tuple([buf[k] for k in range(top)])
    finally:
        free(buf)


def prefix_function(seq):
    cdef Py_ssize_t n = len(seq)
    cdef long *s = <long *> malloc((n + 1) * sizeof(long))
    cdef long *pi = <long *> malloc((n + 1) * sizeof(long))
    cdef Py_ssize_t q, k = 0
    try:
        for q in range(n):
            s[q] = seq[q]
        if n:
            pi[0] = 0
        for q in range(1, n):
            while k > 0 and s[k] != s[q]:
                k = pi[k - 1]
            if s[k] == s[q]:
                k += 1
            pi[q] = k
        return [pi[q] for q in range(n)]
    finally:
        free(s)
        free(pi)


def whitehead_graph(tuple word, int rank):
    cdef int size = 2 * rank
    cdef list counts = [0] * (size * size)
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t pos
    cdef long x, y
    cdef int u, v
    for pos in range(n):
        x = word[pos]
        y = -(<long> word[(pos + 1) % n])
        u = 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1
        v = 2 * (y - 1) if y > 0 else 2 * (-y - 1) + 1
        counts[u * size + v] += 1
        if u != v:
            counts[v * size + u] += 1
    return counts
