"""Pure-Python word kernels.

Letters are nonzero ints: ``k`` is generator ``k-1`` and ``-k`` its inverse.
The compiled module ``_kernels`` exposes the same functions.
"""


def free_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_core(word):
    """Return ``(i, j)`` with ``word[i:j]`` cyclically reduced.

    ``word`` must already be freely reduced; ``word[:i]`` is then the inverse
    of ``word[j:]`` read backwards.
    """
    i, j = 0, len(word)
    while j - i >= 2 and word[i] == -word[j - 1]:
        i += 1
        j -= 1
    return i, j


def substitute(word, images):
    """Apply the endomorphism sending generator ``k`` to ``images[k]``."""
    out = []
    for x in word:
        if x > 0:
            seq = images[x - 1]
        else:
            seq = [-y for y in reversed(images[-x - 1])]
        for y in seq:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def prefix_function(seq):
    n = len(seq)
    pi = [0] * n
    k = 0
    for q in range(1, n):
        while k > 0 and seq[k] != seq[q]:
            k = pi[k - 1]
        if seq[k] == seq[q]:
            k += 1
        pi[q] = k
    return pi


def whitehead_graph(word, rank):
    """Edge multiplicities of the cyclic Whitehead graph.

    Vertices are indexed ``0..2*rank-1``: letter ``k`` maps to ``2*(k-1)`` and
    ``-k`` to ``2*(k-1)+1``.  Each cyclic junction ``x y`` contributes an edge
    between ``x`` and ``y^-1``.
    """
    size = 2 * rank
    counts = [0] * (size * size)
    n = len(word)
    for pos in range(n):
        x = word[pos]
        y = -word[(pos + 1) % n]
        u = 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1
        v = 2 * (y - 1) if y > 0 else 2 * (-y - 1) + 1
        counts[u * size + v] += 1
        if u != v:
            counts[v * size + u] += 1
    return counts
