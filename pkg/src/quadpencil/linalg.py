"""Dense linear algebra for the generalized eigenproblems ``A V = B V D``.

Everything is written out in numpy so the eigensolvers are self-contained:

* real symmetric-definite pencils: Cholesky reduction, Householder
  tridiagonalization and implicit QL with Wilkinson shifts;
* complex pencils with Hermitian positive definite ``B``: Cholesky
  reduction, Householder reduction to Hessenberg form, shifted QR for the
  eigenvalues and inverse iteration for the eigenvectors.

Matrices are small (tens of rows); clarity is preferred over blocking.
"""

import numpy as np

from .errors import DefectivePencil, NoConvergence, NotPositiveDefinite, SingularMatrix
from .model import EigenDecomposition

__all__ = [
    "cholesky",
    "solve_lower",
    "solve_upper",
    "lu_factor",
    "lu_solve",
    "solve_linear",
    "inverse",
    "condition_estimate",
    "tridiagonalize",
    "tridiagonal_ql",
    "hessenberg",
    "hessenberg_eigenvalues",
    "sym_definite_geig",
    "general_geig",
]

EPS = np.finfo(float).eps
# sweeps allowed per unit of matrix order before giving up
SWEEPS_PER_ORDER = 40
# inverse iteration: residual accepted per unit of ||C||_F, and sweeps per vector
INVIT_RTOL = 1e-12
INVIT_SWEEPS = 4


def _herm(M):
    return M.conj().T


def cholesky(B):
    """Lower triangular ``L`` with ``B = L L^*``.

    Raises NotPositiveDefinite with the (zero-based) failing pivot.
    """
    B = np.asarray(B)
    n = B.shape[0]
    if B.ndim != 2 or B.shape[1] != n:
        raise ValueError("cholesky needs a square matrix")
    scale = np.max(np.abs(B)) if n else 0.0
    if np.max(np.abs(B - _herm(B)), initial=0.0) > 1e-12 * scale:
        raise ValueError("cholesky needs a symmetric/Hermitian matrix")
    dtype = complex if np.iscomplexobj(B) else float
    L = np.zeros((n, n), dtype=dtype)
    for j in range(n):
        row = L[j, :j]
        d = B[j, j].real - np.vdot(row, row).real
        if not d > 0 or not np.isfinite(d):
            raise NotPositiveDefinite(j)
        L[j, j] = np.sqrt(d)
        L[j + 1:, j] = (B[j + 1:, j] - L[j + 1:, :j] @ row.conj()) / L[j, j]
    return L


def solve_lower(L, rhs):
    """Forward substitution for lower triangular ``L``."""
    rhs = np.asarray(rhs)
    X = np.array(rhs, dtype=np.result_type(L, rhs, float))
    for i in range(L.shape[0]):
        X[i] = (X[i] - L[i, :i] @ X[:i]) / L[i, i]
    return X


def solve_upper(U, rhs):
    """Back substitution for upper triangular ``U``."""
    rhs = np.asarray(rhs)
    X = np.array(rhs, dtype=np.result_type(U, rhs, float))
    n = U.shape[0]
    for i in range(n - 1, -1, -1):
        X[i] = (X[i] - U[i, i + 1:] @ X[i + 1:]) / U[i, i]
    return X


def lu_factor(M, *, zero_pivot=None):
    """LU with partial pivoting, packed as ``(LU, perm)``.

    An exactly zero pivot raises SingularMatrix, unless ``zero_pivot`` is
    given, in which case it is substituted (useful for inverse iteration).
    """
    M = np.asarray(M)
    LU = np.array(M, dtype=np.result_type(M, float))
    n = LU.shape[0]
    if LU.ndim != 2 or LU.shape[1] != n:
        raise ValueError("LU needs a square matrix")
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(LU[k:, k])))
        if p != k:
            LU[[k, p]] = LU[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        if LU[k, k] == 0 or not np.isfinite(LU[k, k]):
            if zero_pivot is None or not np.isfinite(LU[k, k]):
                raise SingularMatrix(k)
            LU[k, k] = zero_pivot
        LU[k + 1:, k] /= LU[k, k]
        LU[k + 1:, k + 1:] -= np.outer(LU[k + 1:, k], LU[k, k + 1:])
    return LU, perm


def lu_solve(factors, rhs):
    LU, perm = factors
    rhs = np.asarray(rhs)
    Y = np.array(rhs[perm], dtype=np.result_type(LU, rhs))
    n = LU.shape[0]
    for i in range(n):
        Y[i] -= LU[i, :i] @ Y[:i]
    return solve_upper(LU, Y)


def solve_linear(M, rhs):
    """Solve ``M x = rhs`` for a vector or a matrix of right-hand sides."""
    return lu_solve(lu_factor(M), rhs)


def inverse(M):
    M = np.asarray(M)
    return solve_linear(M, np.eye(M.shape[0], dtype=M.dtype))


def condition_estimate(M):
    """1-norm condition number ``||M|| ||M^-1||``.

    The inverse is formed explicitly from the LU factors, which is affordable
    at the sizes used here and accurate well within a factor of ten. Returns
    ``inf`` when ``M`` is singular to working precision.
    """
    M = np.asarray(M)
    try:
        Minv = inverse(M)
    except SingularMatrix:
        return np.inf
    cond = np.linalg.norm(M, 1) * np.linalg.norm(Minv, 1)
    if not np.isfinite(cond) or cond * EPS > 1:
        return np.inf
    return float(cond)


def tridiagonalize(C):
    """Householder reduction ``C = Q T Q^T`` of a real symmetric matrix.

    Returns ``(d, e, Q)`` with ``d`` the diagonal and ``e`` the subdiagonal
    of ``T``.
    """
    T = np.array(C, dtype=float)
    n = T.shape[0]
    Q = np.eye(n)
    for k in range(n - 2):
        x = T[k + 1:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0:
            continue
        alpha = -np.copysign(norm_x, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        T[k + 1:, :] -= 2 * np.outer(v, v @ T[k + 1:, :])
        T[:, k + 1:] -= 2 * np.outer(T[:, k + 1:] @ v, v)
        Q[:, k + 1:] -= 2 * np.outer(Q[:, k + 1:] @ v, v)
    return np.diag(T).copy(), np.diag(T, -1).copy(), Q


def tridiagonal_ql(d, e, Z=None, max_sweeps=None):
    """Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL.

    ``d`` is the diagonal and ``e`` the subdiagonal. Rotations are accumulated
    into ``Z`` (identity by default), so passing the Householder ``Q`` yields
    eigenvectors of the original matrix. Returns unsorted ``(values, Z)``.
    """
    d = np.array(d, dtype=float)
    n = d.size
    e = np.append(np.array(e, dtype=float), 0.0)
    Z = np.eye(n) if Z is None else np.array(Z, dtype=float)
    if max_sweeps is None:
        max_sweeps = SWEEPS_PER_ORDER * max(n, 1)
    sweeps = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NoConvergence(sweeps - 1)
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = Z[:, i + 1].copy()
                Z[:, i + 1] = s * Z[:, i] + c * zi1
                Z[:, i] = c * Z[:, i] - s * zi1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, Z


def _residual(A, B, V, values):
    return float(np.linalg.norm(A @ V - (B @ V) * values))


def sym_definite_geig(A, B):
    """Solve ``A V = B V D`` with ``V^T B V = I`` for symmetric ``A`` and SPD ``B``.

    Eigenvalues come back ascending.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    if A.shape != B.shape or B.ndim != 2 or B.shape[1] != n:
        raise ValueError("A and B must be square matrices of the same size")
    if n == 1:
        if not B[0, 0] > 0:
            raise NotPositiveDefinite(0)
        values = np.array([A[0, 0] / B[0, 0]])
        V = np.array([[1.0 / np.sqrt(B[0, 0])]])
        return EigenDecomposition(values, V, _residual(A, B, V, values))

    L = cholesky(B)
    # C = L^-1 A L^-T
    C = solve_lower(L, solve_lower(L, A).T).T
    C = (C + C.T) / 2
    d, e, Q = tridiagonalize(C)
    values, U = tridiagonal_ql(d, e, Q)
    order = np.argsort(values, kind="stable")
    values, U = values[order], U[:, order]
    V = solve_upper(L.T, U)
    return EigenDecomposition(values, V, _residual(A, B, V, values))


def hessenberg(C):
    """Householder reduction of a square matrix to upper Hessenberg form."""
    H = np.array(C, dtype=complex)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * norm_x
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0
    return H


def _givens(a, b):
    # unitary G = [[c, s], [-conj(s), c]] with G @ [a, b] = [r, 0]
    r = np.hypot(abs(a), abs(b))
    if r == 0:
        return 1.0, 0j
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    phase = a / abs(a)
    return abs(a) / r, phase * np.conj(b) / r


def hessenberg_eigenvalues(H, max_sweeps=None):
    """Eigenvalues of an upper Hessenberg matrix by single-shift QR.

    Works on the active unreduced block only; deflated eigenvalues are read
    off the diagonal. Wilkinson shifts, with an exceptional shift every
    tenth sweep on the same block.
    """
    H = np.array(H, dtype=complex)
    n = H.shape[0]
    if max_sweeps is None:
        max_sweeps = SWEEPS_PER_ORDER * max(n, 1)
    norm_h = np.linalg.norm(H) or 1.0
    sweeps = 0
    stall = 0
    hi = n - 1
    while hi > 0:
        l = hi
        while l > 0:
            s = abs(H[l, l]) + abs(H[l - 1, l - 1])
            if s == 0:
                s = norm_h
            if abs(H[l, l - 1]) <= EPS * s:
                H[l, l - 1] = 0
                break
            l -= 1
        if l == hi:
            hi -= 1
            stall = 0
            continue
        sweeps += 1
        stall += 1
        if sweeps > max_sweeps:
            raise NoConvergence(sweeps - 1)
        a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
        c, d = H[hi, hi - 1], H[hi, hi]
        if stall % 10 == 0:
            mu = d + abs(c)
        else:
            half = (a - d) / 2
            disc = np.sqrt(half * half + b * c)
            mid = (a + d) / 2
            mu1, mu2 = mid + disc, mid - disc
            mu = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2
        blk = H[l:hi + 1, l:hi + 1]
        m = blk.shape[0]
        blk[np.diag_indices(m)] -= mu
        rots = []
        for k in range(m - 1):
            cg, sg = _givens(blk[k, k], blk[k + 1, k])
            rows = blk[k:k + 2, k:].copy()
            blk[k, k:] = cg * rows[0] + sg * rows[1]
            blk[k + 1, k:] = -np.conj(sg) * rows[0] + cg * rows[1]
            rots.append((cg, sg))
        for k, (cg, sg) in enumerate(rots):
            cols = blk[:k + 2, k:k + 2].copy()
            blk[:k + 2, k] = cg * cols[:, 0] + np.conj(sg) * cols[:, 1]
            blk[:k + 2, k + 1] = -sg * cols[:, 0] + cg * cols[:, 1]
        blk[np.diag_indices(m)] += mu
    return np.diag(H).copy()


def _inverse_iteration(C, lam, previous, rng):
    """Eigenvector of ``C`` for the computed eigenvalue ``lam``.

    ``previous`` holds already accepted vectors of the same eigenvalue
    cluster; iterates are kept orthogonal to them so a diagonalizable
    cluster yields independent vectors.
    """
    n = C.shape[0]
    norm_c = np.linalg.norm(C) or 1.0
    factors = lu_factor(C - lam * np.eye(n), zero_pivot=EPS * norm_c)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    best, best_res = None, np.inf
    for sweep in range(INVIT_SWEEPS + 1):
        for u in previous:
            x = x - np.vdot(u, x) * u
        nx = np.linalg.norm(x)
        if nx == 0 or not np.isfinite(nx):
            break
        x = x / nx
        res = np.linalg.norm(C @ x - lam * x)
        if res < best_res:
            best, best_res = x, res
        if res <= INVIT_RTOL * norm_c or sweep == INVIT_SWEEPS:
            break
        x = lu_solve(factors, x)
    return best, best_res


def general_geig(A, B, *, seed=0):
    """Solve ``A V = B V D`` for complex ``A`` and Hermitian positive definite ``B``.

    Eigenvalues are sorted by (real part, imaginary part); columns of ``V``
    have unit Euclidean norm. Raises DefectivePencil when no complete set of
    eigenvectors can be found.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    n = B.shape[0]
    if A.shape != B.shape or B.ndim != 2 or B.shape[1] != n:
        raise ValueError("A and B must be square matrices of the same size")
    if n == 1:
        if not (B[0, 0].real > 0 and abs(B[0, 0].imag) <= 1e-12 * abs(B[0, 0])):
            raise NotPositiveDefinite(0)
        values = np.array([A[0, 0] / B[0, 0].real])
        V = np.ones((1, 1), dtype=complex)
        return EigenDecomposition(values, V, _residual(A, B, V, values))

    L = cholesky(B)
    C = _herm(solve_lower(L, _herm(solve_lower(L, A))))
    values = hessenberg_eigenvalues(hessenberg(C))
    order = np.lexsort((values.imag, values.real))
    values = values[order]

    norm_c = np.linalg.norm(C) or 1.0
    cluster_tol = 1e3 * EPS * norm_c
    rng = np.random.default_rng(seed)
    U = np.empty((n, n), dtype=complex)
    for k, lam in enumerate(values):
        previous = [U[:, j] for j in range(k) if abs(values[j] - lam) <= cluster_tol]
        u, res = _inverse_iteration(C, lam, previous, rng)
        if u is None or res > 1e3 * INVIT_RTOL * norm_c:
            raise DefectivePencil(k, f"inverse iteration residual {res:.2e}")
        U[:, k] = u
    # near-parallel vectors signal a Jordan block split by rounding
    if condition_estimate(U) > 1e12:
        raise DefectivePencil(-1, "eigenvector matrix is numerically singular")

    V = solve_upper(_herm(L), U)
    V /= np.linalg.norm(V, axis=0)
    return EigenDecomposition(values, V, _residual(A, B, V, values))
