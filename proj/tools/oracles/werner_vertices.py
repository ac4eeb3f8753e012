#!/usr/bin/env python3
"""Exact vertex enumeration for the gamma-constrained binary sets.

For H = [[gamma, 1], [-1, 1]] the level-n set is
  { Q >= 0, sum Q = 1, (H tensor^n) Q >= 0 }.
Vertices are found by brute force over tight-constraint subsets with exact
rational arithmetic. Output is meant to be frozen into unit tests as an
independent cross-check of the C++ runtime enumeration.
"""

from fractions import Fraction
from itertools import combinations, product
import sys


def kron(a, b):
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    out = [[Fraction(0)] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l]
    return out


def solve_exact(rows, rhs):
    """Gaussian elimination over the rationals; None if singular."""
    m = [row[:] + [r] for row, r in zip(rows, rhs)]
    dim = len(rows[0])
    if len(m) != dim:
        return None
    for col in range(dim):
        piv = next((r for r in range(col, dim) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = Fraction(1, 1) / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(dim):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][dim] for r in range(dim)]


def vertices(gamma, n):
    h = [[gamma, Fraction(1)], [Fraction(-1), Fraction(1)]]
    hn = h
    for _ in range(n - 1):
        hn = kron(hn, h)
    dim = 2 ** n
    ineq = []
    for i in range(dim):  # nonnegativity rows
        ineq.append([Fraction(1) if j == i else Fraction(0) for j in range(dim)])
    ineq.extend(hn)  # constraint rows
    eq = [Fraction(1)] * dim

    found = set()
    for tight in combinations(range(len(ineq)), dim - 1):
        rows = [eq] + [ineq[t] for t in tight]
        rhs = [Fraction(1)] + [Fraction(0)] * (dim - 1)
        q = solve_exact(rows, rhs)
        if q is None:
            continue
        if all(sum(r * x for r, x in zip(row, q)) >= 0 for row in ineq):
            found.add(tuple(q))
    return sorted(found)


def main():
    gammas = [Fraction(3, 2), Fraction(2), Fraction(5, 2)]
    for gamma in gammas:
        for n in (1, 2):
            vs = vertices(gamma, n)
            print(f"gamma={gamma} n={n} vertices={len(vs)}")
            for v in vs:
                print("  " + ", ".join(str(x) for x in v))
    return 0


if __name__ == "__main__":
    sys.exit(main())
