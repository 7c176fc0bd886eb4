"""Independent reference computations used by the tests.

None of these call into the code paths they are used to check.
"""

import itertools
import math

import numpy as np


def eigen_distance(e):
    """max |1 - lambda|; equals the invariant operator norm of I - e for finite-order e."""
    return float(np.max(np.abs(1.0 - np.linalg.eigvals(e))))


def form_op_norm(p, a):
    """Operator norm of ``a`` for the vector norm sqrt(v^H p v), via the generalized eigenproblem."""
    m = np.linalg.solve(p, a.conj().T @ p @ a)
    return float(math.sqrt(max(np.linalg.eigvals(m).real)))


def brute_force_closure(gens, n, tol=1e-8, limit=5000):
    """Quadratic-time closure by repeated multiplication of every known pair."""
    elems = [np.eye(n, dtype=complex)] + [np.asarray(g, dtype=complex) for g in gens]
    changed = True
    while changed:
        changed = False
        for a, b in itertools.product(list(elems), repeat=2):
            c = a @ b
            if all(np.linalg.norm(c - e) > tol for e in elems):
                elems.append(c)
                changed = True
                assert len(elems) < limit
    unique = []
    for e in elems:
        if all(np.linalg.norm(e - u) > tol for u in unique):
            unique.append(e)
    return unique


def permutation_matrix_on_zero_sum(perm):
    """Restriction of a coordinate permutation to the zero-sum hyperplane, via least squares."""
    k = len(perm)
    p = np.zeros((k, k))
    for i, j in enumerate(perm):
        p[j, i] = 1
    basis = np.zeros((k, k - 1))
    for i in range(k - 1):
        basis[i, i], basis[i + 1, i] = 1, -1
    x, *_ = np.linalg.lstsq(basis, p @ basis, rcond=None)
    return x


def ball_ratio_exact(n, r_outer, r_inner):
    return (r_outer / r_inner) ** (2 * n * n)
