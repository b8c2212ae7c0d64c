"""Independent oracles the tests check library output against.

Everything here deliberately uses a different algorithm from the library:
orbit sets come from filtering raw edge tuples, orbit counts from inverting
the transfer-matrix totals, and invariant factors from gcds of minors.
Slow is fine; these only run on small inputs.
"""

import math
from itertools import combinations, product

from cheblink import IntMatrix, class_index, conjugacy_classes, exact_counts


def brute_force_orbits(s, max_len):
    """All primitive orbits as (length, canonical edge tuple) pairs.

    Enumerates every edge tuple of each length, keeps the closed paths,
    drops the non-primitive ones, and canonicalizes by least rotation.
    """
    out = set()
    for n in range(1, max_len + 1):
        for seq in product(range(len(s.edges)), repeat=n):
            if any(s.edge_dst[seq[i]] != s.edge_src[seq[(i + 1) % n]]
                   for i in range(n)):
                continue
            if any(seq == seq[d:] + seq[:d] for d in range(1, n)):
                continue
            out.add((n, min(seq[i:] + seq[:i] for i in range(n))))
    return out


def element_power(g, i, m):
    acc = g.identity
    for _ in range(m):
        acc = g.mul(acc, i)
    return acc


def dp_orbit_counts(s, max_n):
    """Orbit counts per (length, class) from the transfer totals.

    exact_counts(s, n) tallies basepointed closed paths by the class of
    their label product.  An orbit of length d dividing n contributes d
    such paths, with label the d-orbit's holonomy raised to n/d.  Peeling
    the proper divisors off and dividing by n leaves the primitive orbit
    count — no orbit is ever enumerated.
    """
    g = s.hom.target
    classes = conjugacy_classes(g)
    k = len(classes)
    power_class = {}
    for dj in range(k):
        rep = classes[dj].representative
        for m in range(1, max_n + 1):
            power_class[(dj, m)] = class_index(g, element_power(g, rep, m))
    counts = {}
    for n in range(1, max_n + 1):
        totals = list(exact_counts(s, n))
        for ci in range(k):
            t = totals[ci]
            for d in range(1, n):
                if n % d:
                    continue
                for dj in range(k):
                    if power_class[(dj, n // d)] == ci:
                        t -= d * counts[(d, dj)]
            assert t % n == 0, (n, ci, t)
            counts[(n, ci)] = t // n
    return counts


def laplace_det(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    rest = rows[1:]
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rest]
        total += (-1) ** j * rows[0][j] * laplace_det(minor)
    return total


def minor_gcd_factors(m: IntMatrix) -> list[int]:
    """Invariant factors as d_k / d_{k-1}, d_k = gcd of all k x k minors."""
    entries = [list(r) for r in m.entries]
    out = []
    prev = 1
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for ri in combinations(range(m.rows), k):
            for ci in combinations(range(m.cols), k):
                sub = [[entries[i][j] for j in ci] for i in ri]
                g = math.gcd(g, laplace_det(sub))
        if g == 0:
            out.extend([0] * (min(m.rows, m.cols) + 1 - k))
            return out
        out.append(g // prev)
        prev = g
    return out
