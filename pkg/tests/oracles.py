"""Reference computations that do not share code paths with the package."""
import itertools

import numpy as np


def weighted_gauss(alpha, n_points=200):
    """Gauss-Legendre nodes (numpy) with the Jacobi weight folded into the weights.

    For non-integer alpha the rule is applied after x = sin(t), which makes
    (1 - x^2)^alpha dx = cos(t)^(2 alpha + 1) dt smooth for alpha >= -1/2.
    """
    if float(alpha).is_integer() and alpha >= 0:
        x, w = np.polynomial.legendre.leggauss(n_points)
        return x, w * (1 - x * x) ** alpha
    t, w = np.polynomial.legendre.leggauss(n_points)
    t = t * np.pi / 2
    return np.sin(t), w * np.pi / 2 * np.cos(t) ** (2 * alpha + 1)


def gram_schmidt_polys(alpha, n_max, x_eval):
    """Orthonormalize monomials 1, x, ..., x^n_max under (1 - x^2)^alpha dx.

    Returns the values of p_0..p_n_max at ``x_eval`` with positive leading
    coefficients.
    """
    xq, wq = weighted_gauss(alpha)
    V = np.vander(xq, n_max + 1, increasing=True)
    E = np.vander(np.atleast_1d(x_eval), n_max + 1, increasing=True)
    Q, Ev = [], []
    for j in range(n_max + 1):
        v, e = V[:, j].copy(), E[:, j].copy()
        for _ in range(2):
            for q, eq in zip(Q, Ev):
                proj = np.sum(wq * v * q)
                v -= proj * q
                e -= proj * eq
        nrm = np.sqrt(np.sum(wq * v * v))
        Q.append(v / nrm)
        Ev.append(e / nrm)
    return np.array(Ev)


def best_s_term_bruteforce(z, s):
    z = np.abs(np.asarray(z))
    n = z.size
    return min(
        np.sum(np.delete(z, list(keep))) for keep in itertools.combinations(range(n), s)
    )


def two_by_two_rip(Psi):
    """delta_2 from closed-form eigenvalues of every 2x2 Gram block."""
    G = Psi.conj().T @ Psi
    best = 0.0
    for i, j in itertools.combinations(range(G.shape[0]), 2):
        a, d, g = G[i, i].real, G[j, j].real, abs(G[i, j])
        mid, rad = (a + d) / 2, np.hypot((a - d) / 2, g)
        best = max(best, mid + rad - 1, 1 - (mid - rad))
    return best


def one_sparse_certificate(Psi, b, tol=1e-9):
    """Unique 1-sparse solution of Psi z = b and whether it is the unique l1 minimizer.

    Candidates come from least squares on every single column.  Optimality is
    certified by the minimal-norm dual vector w = Psi_j sgn / ||Psi_j||^2,
    which proves uniqueness when |<Psi_i, w>| < 1 off the support.
    """
    N = Psi.shape[1]
    hits = []
    for j in range(N):
        col = Psi[:, j]
        coef = np.vdot(col, b) / np.vdot(col, col)
        if np.linalg.norm(col * coef - b) <= tol * max(1.0, np.linalg.norm(b)):
            hits.append((j, coef))
    if len(hits) != 1:
        return None, False
    j, coef = hits[0]
    x = np.zeros(N, dtype=complex)
    x[j] = coef
    w = Psi[:, j] * (coef / abs(coef)) / np.vdot(Psi[:, j], Psi[:, j]).real
    corr = np.abs(Psi.conj().T @ w)
    corr[j] = 0.0
    return x, bool(corr.max() < 1.0 - 1e-9)
