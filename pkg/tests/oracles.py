"""Brute-force reference computations built from raw groupoid tables only.

Nothing here calls the package's kernels or derived measures; each routine
enumerates pairs of morphisms in plain Python.
"""

import math

import numpy as np


def composable_pairs(g):
    out = []
    for a in range(g.n_morphisms):
        for b in range(g.n_morphisms):
            c = int(g.compose_table[a, b])
            if c >= 0:
                out.append((a, b, c))
    return out


def product_set(g, A, B):
    """``B∘A`` as a Python set of morphism indices."""
    A, B = set(A), set(B)
    return {c for b, a, c in composable_pairs(g) if a in A and b in B}


def source_preimage(g, a):
    return {k for k in range(g.n_morphisms) if int(g.source[k]) in a}


def target_preimage(g, b):
    return {k for k in range(g.n_morphisms) if int(g.target[k]) in b}


def fiber_sizes(g):
    sizes = [0] * g.n_objects
    for k in range(g.n_morphisms):
        sizes[int(g.target[k])] += 1
    return sizes


def mu(g, lam, w):
    return [lam[int(g.target[k])] * w[k] for k in range(g.n_morphisms)]


def Lambda(g, lam, w):
    m = mu(g, lam, w)
    return [math.sqrt(m[k] * m[int(g.inverse[k])]) for k in range(g.n_morphisms)]


def decoherence(g, lam, w, b, a, S=None):
    """Enumerate ``t⁻¹(b)∘s⁻¹(a)`` pair by pair and sum ``e^{iS}Λ``."""
    L = Lambda(g, lam, w)
    prod = product_set(g, source_preimage(g, a), target_preimage(g, b))
    if S is None:
        return math.fsum(L[k] for k in prod)
    return sum(complex(math.cos(S[k]), math.sin(S[k])) * L[k] for k in prod)


def convolve(g, w, f, h):
    """``(f⋆h)(γ) = Σ_{α∘β=γ} f(α) h(β) w(α)`` over all composable pairs."""
    out = [0j] * g.n_morphisms
    for a, b, c in composable_pairs(g):
        out[c] += f[a] * h[b] * w[a]
    return np.array(out)


def involution(g, lam, w, f):
    m = mu(g, lam, w)
    out = []
    for k in range(g.n_morphisms):
        inv = int(g.inverse[k])
        val = f[inv].conjugate() if isinstance(f[inv], complex) else np.conj(f[inv])
        out.append(val * (m[k] / m[inv]) if val != 0 else 0j)
    return np.array(out, dtype=complex)


def state(g, lam, w, f):
    m = mu(g, lam, w)
    return sum(f[k] * m[k] for k in range(g.n_morphisms))


def subsets(n):
    for bits in range(1 << n):
        yield {i for i in range(n) if (bits >> i) & 1}


def orbit_labels(g):
    """Connected components of the object graph, by breadth-first search."""
    adj = {j: set() for j in range(g.n_objects)}
    for k in range(g.n_morphisms):
        s, t = int(g.source[k]), int(g.target[k])
        adj[s].add(t)
        adj[t].add(s)
    label = [-1] * g.n_objects
    for start in range(g.n_objects):
        if label[start] >= 0:
            continue
        label[start] = start
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = start
                    frontier.append(y)
    return label


def normalized_weights(g, lam):
    """``λ(s)/(h·λ(orbit))`` per morphism; ``1/|G^s|`` where ``λ(s) = 0``."""
    orb = orbit_labels(g)
    lam_orb = {}
    for j, o in enumerate(orb):
        lam_orb[o] = lam_orb.get(o, 0.0) + lam[j]
    loops = [0] * g.n_objects
    for k in range(g.n_morphisms):
        if g.source[k] == g.target[k]:
            loops[int(g.source[k])] += 1
    sizes = fiber_sizes(g)
    out = []
    for k in range(g.n_morphisms):
        s = int(g.source[k])
        out.append(lam[s] / (loops[s] * lam_orb[orb[s]]) if lam[s] > 0 else 1.0 / sizes[s])
    return out
