"""Two-point Hermite determinants for Chebyshev-Bernstein bases over [a, 1].

For nodes ``r_j..r_k`` (a window of the exponent list) let
``Delta_{p,q}[j..k]`` be the determinant whose rows are the ``a``-rows
``(r_u**s * a**r_u)_u`` for ``s = p-1, ..., 0`` followed by the ``1``-rows
``(r_u**s)_u`` for ``s = 0, ..., q-1``; ``p + q = k - j + 1``.  These are the
Hermite data of ``t**r_u`` at ``a`` and ``1`` in the variable ``log t``, and
all the quantities needed for elevation and evaluation are ratios of them.

The whole family over every window satisfies the Desnanot-Jacobi
(Sylvester) identity, so it is built in ``O(N**3)`` operations by
condensation.  Cancellation in that recursion depends strongly on the
exponent spacing, hence the callers run it at adaptive precision.

The inner loops use gmpy2 ``mpfr`` numbers directly; they are an order of
magnitude faster than mpmath numbers for these scalar recursions.  Every
operation runs inside :func:`precision`, and results are converted with
:func:`to_mpmath` at the boundary.
"""
from __future__ import annotations

import gmpy2
import numpy as np

from .numerics import mp_context


def precision(bits: int):
    """Thread-local gmpy2 context manager with `bits` of precision."""
    return gmpy2.context(gmpy2.get_context(), precision=int(bits))


def to_mpmath(x, bits: int):
    """Convert an mpfr (or a nested list / object array of them) to mpmath."""
    mp = mp_context(bits)
    if isinstance(x, np.ndarray):
        out = np.empty(x.shape, dtype=object)
        for idx, v in np.ndenumerate(x):
            out[idx] = to_mpmath(v, bits)
        return out
    if isinstance(x, (list, tuple)):
        return [to_mpmath(v, bits) for v in x]
    man, exp = x.as_mantissa_exp()
    return mp.mpf((int(man), int(exp)))


def max_abs_diff(xs, ys, bits: int) -> float:
    """``max |x - y|`` over paired mpfr sequences, as a float."""
    with precision(bits):
        return max((abs(float(x - y)) for x, y in zip(xs, ys)), default=0.0)


class HermiteTable:
    """Signed determinants ``Delta_{p,q}`` over every window of `exponents`.

    Parameters
    ----------
    exponents : sequence of float
        ``r_0 = 0 < r_1 < ... < r_{N-1}``.
    a : float
        Left end of the interval ``[a, 1]``, ``0 < a < 1``.
    bits : int
        Working precision.
    """

    def __init__(self, exponents, a, bits: int):
        self.bits = int(bits)
        with precision(self.bits):
            self.r = [gmpy2.mpfr(x) for x in exponents]
            self.a = gmpy2.mpfr(a)
            self.N = len(self.r)
            self._build()

    def _build(self):
        r, N = self.r, self.N
        one = gmpy2.mpfr(1)
        apow = [self.a ** x for x in r]
        # vander[j][L]: prod_{u<v} (r_v - r_u) over the window of length L at j
        vander = [[one, one] for _ in range(N)]
        apro = [[one, apow[j]] for j in range(N)]
        for L in range(2, N + 1):
            for j in range(N - L + 1):
                k = j + L - 1
                v = vander[j][L - 1]
                for u in range(j, k):
                    v *= r[k] - r[u]
                vander[j].append(v)
                apro[j].append(apro[j][L - 1] * apow[k])
        # D[L][j][p] = Delta_{p, L-p}[j..j+L-1]; D[0][j][0] = 1
        D = [[[one] for _ in range(N + 1)]]
        for L in range(1, N + 1):
            level = []
            prev = D[L - 1]
            inner = D[L - 2] if L >= 2 else None
            for j in range(N - L + 1):
                row = [vander[j][L]]
                pj, pj1 = prev[j], prev[j + 1]
                for p in range(1, L):
                    row.append((pj1[p - 1] * pj[p] - pj[p - 1] * pj1[p]) / inner[j + 1][p - 1])
                top = vander[j][L] * apro[j][L]
                row.append(-top if (L * (L - 1) // 2) % 2 else top)
                level.append(row)
            D.append(level)
        self.D = D

    def delta(self, p: int, j: int, L: int):
        """``Delta_{p, L-p}`` over the window ``r_j..r_{j+L-1}``."""
        if L == 0:
            return gmpy2.mpfr(1)
        return self.D[L][j][p]

    def xi(self, n: int) -> list:
        """Weights ``xi_1..xi_n`` (mpfr) of the step ``Lambda_n -> Lambda_{n+1}``.

        ``P_i' = (1 - xi_i) P_{i-1} + xi_i P_i`` for ``i = 1..n``.  Requires
        ``n + 2 <= N``.
        """
        d = self.delta
        with precision(self.bits):
            rn1 = self.r[n + 1]
            out = []
            for i in range(1, n + 1):
                num = d(i, 1, n) * d(i, 0, n + 2)
                den = d(i, 0, n + 1) * d(i, 1, n + 1)
                out.append(abs(num / den) / rn1)
        return out

    def leading(self, m: int) -> list:
        """``(t d/dt)**k B_k^m`` at ``t = a`` for ``k = 0..m`` (mpfr)."""
        with precision(self.bits):
            prod = gmpy2.mpfr(1)
            for x in self.r[1:m + 1]:
                prod *= x
            return [abs(prod * self.delta(k, 1, m) / self.delta(k, 0, m + 1)) for k in range(m + 1)]

    def basis_values(self, ts, m_max: int | None = None) -> dict:
        """Chebyshev-Bernstein values for every dimension up to `m_max`.

        Returns ``{m: object array of mpfr, shape (len(ts), m + 1)}``.  The mixed
        determinant ``Gamma`` with one extra ``t``-row between the ``a``-rows and
        the ``1``-rows obeys the same condensation rule, and
        ``B_k^m(t) = leading_k * |Gamma_k(t)| / |Delta_{k+1, m-k}|``.
        """
        m_max = self.N - 1 if m_max is None else m_max
        N = m_max + 1
        d = self.delta
        with precision(self.bits):
            r = self.r
            ts = [gmpy2.mpfr(t) for t in ts]
            out = {0: np.array([[gmpy2.mpfr(1)] for _ in ts], dtype=object)}
            # prev[j][p]: vector over ts of Gamma_{p, L-2-p}[j..j+L-2]
            prev = [[np.array([t ** r[j] for t in ts], dtype=object)] for j in range(N)]
            for L in range(2, N + 1):
                level = []
                for j in range(N - L + 1):
                    row = [(d(0, j + 1, L - 1) * prev[j][0] - d(0, j, L - 1) * prev[j + 1][0])
                           / d(0, j + 1, L - 2)]
                    for p in range(1, L):
                        row.append((prev[j + 1][p - 1] * d(p, j, L - 1)
                                    - prev[j][p - 1] * d(p, j + 1, L - 1)) / d(p - 1, j + 1, L - 2))
                    level.append(row)
                prev = level
                m = L - 1
                lead = self.leading(m)
                top = level[0]
                cols = [np.abs(top[k] * (lead[k] / d(k + 1, 0, m + 1))) for k in range(m + 1)]
                out[m] = np.stack(cols, axis=1)
        return out


def _upper_inverse(U: list) -> list:
    """Inverse of an upper-triangular matrix given as row lists."""
    n = len(U)
    X = [[gmpy2.mpfr(0)] * n for _ in range(n)]
    for i in range(n - 1, -1, -1):
        X[i][i] = 1 / U[i][i]
        for j in range(i + 1, n):
            s = gmpy2.mpfr(0)
            for k in range(i + 1, j + 1):
                s += U[i][k] * X[k][j]
            X[i][j] = -s / U[i][i]
    return X


def monomial_coefficients(exponents, a, bits: int) -> list:
    """Monomial coefficients (mpfr) of the Chebyshev-Bernstein basis over ``[a, 1]``.

    Row ``k`` holds ``c_{k,l}`` with ``B_k(t) = sum_l c_{k,l} t**r_l``.

    With ``X_i`` the collocation-type matrix whose rows are Newton-normalized
    ``1``-rows except that the last ``i`` slots are replaced by ``a``-rows,
    ``g_i = X_i**-1 e_0`` is the coefficient vector of ``B_i + ... + B_m``.
    Consecutive ``X_i`` differ in one row, so the inverse is updated by
    Sherman-Morrison and ``B_i = g_i - g_{i+1}``.
    """
    with precision(bits):
        r = [gmpy2.mpfr(x) for x in exponents]
        m = len(r) - 1
        N = m + 1
        # Newton rows pi_s(r_k) = prod_{u<s} (r_k - r_u), normalized at r_s
        P = [[gmpy2.mpfr(1)] * N]
        for s in range(1, N):
            prev = P[-1]
            P.append([prev[k] * (r[k] - r[s - 1]) for k in range(N)])
        for s in range(N):
            dd = P[s][s]
            P[s] = [x / dd for x in P[s]]
        Xi = _upper_inverse(P)
        apow = [gmpy2.mpfr(a) ** x for x in r]
        gs = [[Xi[k][0] for k in range(N)]]
        for i in range(m):
            slot = m - i
            diff = [P[i][k] * apow[k] - P[slot][k] for k in range(N)]
            vT = []
            for l in range(N):
                s = gmpy2.mpfr(0)
                for k in range(N):
                    s += diff[k] * Xi[k][l]
                vT.append(s)
            denom = 1 + vT[slot]
            col = [Xi[k][slot] / denom for k in range(N)]
            for k in range(N):
                ck = col[k]
                if ck:
                    row = Xi[k]
                    for l in range(N):
                        row[l] -= ck * vT[l]
            gs.append([Xi[k][0] for k in range(N)])
        gs.append([gmpy2.mpfr(0)] * N)
        return [[gs[i][k] - gs[i + 1][k] for k in range(N)] for i in range(N)]


def gelfond_monomial_coefficients(exponents, bits: int) -> list:
    """Monomial coefficients (mpfr) of the Gelfond-Bernstein basis.

    Row ``k < m`` expands ``(-1)**(m-k) r_{k+1}...r_m [r_k..r_m] f_t``.
    """
    with precision(bits):
        r = [gmpy2.mpfr(x) for x in exponents]
        m = len(r) - 1
        rows = []
        for k in range(m + 1):
            row = [gmpy2.mpfr(0)] * (m + 1)
            if k == m:
                row[m] = gmpy2.mpfr(1)
            else:
                pref = gmpy2.mpfr(-1) ** (m - k)
                for u in range(k + 1, m + 1):
                    pref *= r[u]
                for l in range(k, m + 1):
                    den = gmpy2.mpfr(1)
                    for u in range(k, m + 1):
                        if u != l:
                            den *= r[l] - r[u]
                    row[l] = pref / den
            rows.append(row)
        return rows


def solve(A: list, B: list, bits: int) -> list:
    """Solve ``A X = B`` by Gaussian elimination with partial pivoting.

    `A` is ``n x n`` and `B` is ``n x k``, both as row lists of mpfr.
    """
    with precision(bits):
        n = len(A)
        M = [list(A[i]) + list(B[i]) for i in range(n)]
        width = len(M[0])
        for c in range(n):
            piv = max(range(c, n), key=lambda i: abs(M[i][c]))
            if M[piv][c] == 0:
                raise ZeroDivisionError("singular matrix")
            M[c], M[piv] = M[piv], M[c]
            pc = M[c]
            inv = 1 / pc[c]
            for i in range(c + 1, n):
                f = M[i][c] * inv
                if f:
                    Mi = M[i]
                    for j in range(c, width):
                        Mi[j] -= f * pc[j]
        X = [[gmpy2.mpfr(0)] * (width - n) for _ in range(n)]
        for i in range(n - 1, -1, -1):
            for j in range(width - n):
                s = M[i][n + j]
                for k in range(i + 1, n):
                    s -= M[i][k] * X[k][j]
                X[i][j] = s / M[i][i]
        return X
