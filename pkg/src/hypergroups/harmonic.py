"""Characters, Plancherel weights, Fourier pairs, and dual convolutions.

All of this lives on a commutative finite hypergroup.  Characters are
found as the joint eigenvectors of the class convolution matrices
(M_i)[j, k] = conv[i, j, k]: a character vector a satisfies
M_i a = a(i) a, so one seeded random positive combination is
diagonalized and degenerate clusters are split recursively with the
remaining matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateSplitFailure, DualNotPositive, NotCommutative
from .hypergroup import FiniteHypergroup, is_commutative, make_hypergroup
from .schemes import Scheme

SEED = 0xC0FFEE
CLUSTER_GAP = 1e-8
CHARACTER_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Characters (rows) of a commutative finite hypergroup.

    ``chars[r, i]`` is the r-th character at class i, normalized to 1 at
    the identity, ordered descending by real part over the class order
    (ties on the 1e-9-rounded value vectors).  ``plancherel[r]`` is the
    dual weight, ``positive_index`` points at the unique strictly
    positive character, and ``residual`` is the worst multiplicativity
    defect of the table.
    """

    classes: tuple
    chars: np.ndarray
    plancherel: np.ndarray
    haar: np.ndarray
    positive_index: int
    residual: float

    @property
    def n_characters(self) -> int:
        return self.chars.shape[0]

    @cached_property
    def labels(self) -> tuple:
        return tuple(f"chi{r}" for r in range(self.n_characters))


def _cluster(values: np.ndarray, gap: float):
    """Connected components of the eigenvalues under |.| <= gap."""
    c = len(values)
    close = np.abs(values[:, None] - values[None, :]) <= gap
    seen = np.zeros(c, dtype=bool)
    clusters = []
    for i in range(c):
        if seen[i]:
            continue
        stack, comp = [i], []
        seen[i] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in np.flatnonzero(close[u] & ~seen):
                seen[v] = True
                stack.append(v)
        clusters.append(sorted(comp))
    return clusters


def _split(basis: np.ndarray, mats, gap: float):
    """Refine an invariant subspace into joint eigenvectors."""
    if basis.shape[1] == 1:
        return [basis[:, 0]]
    if not mats:
        raise DegenerateSplitFailure(
            f"cluster of dimension {basis.shape[1]} not separated by any class matrix",
            witness=basis.shape[1],
        )
    B, *_ = np.linalg.lstsq(basis, mats[0] @ basis, rcond=None)
    w, U = np.linalg.eig(B)
    clusters = _cluster(w, gap)
    if len(clusters) == 1:
        return _split(basis, mats[1:], gap)
    out = []
    for cl in clusters:
        q, _ = np.linalg.qr(basis @ U[:, cl])
        out.extend(_split(q, mats[1:], gap))
    return out


def _sort_key(row: np.ndarray):
    re = np.round(row.real, 9)
    im = np.round(row.imag, 9)
    return tuple(x for pair in zip(-re, -im) for x in pair)


def character_table(h: FiniteHypergroup, gap: float = CLUSTER_GAP,
                    residual_tol: float = CHARACTER_RESIDUAL_TOL,
                    seed: int = SEED) -> CharacterTable:
    """All characters of a commutative finite hypergroup.

    Raises ``NotCommutative`` for noncommutative input and
    ``DegenerateSplitFailure`` when joint diagonalization cannot isolate
    one-dimensional joint eigenspaces or the result fails the
    multiplicativity validation.
    """
    if not is_commutative(h):
        raise NotCommutative("character theory here needs a commutative hypergroup")
    conv = h.conv_float.astype(complex)
    d = h.n_classes
    mats = [conv[i] for i in range(d)]

    rng = np.random.default_rng(seed)
    mu = rng.uniform(0.5, 1.5, size=d)
    T = np.tensordot(mu, conv, axes=([0], [0]))

    w, V = np.linalg.eig(T)
    vectors = []
    for cl in _cluster(w, gap):
        q, _ = np.linalg.qr(V[:, cl])
        vectors.extend(_split(q, mats, gap))
    if len(vectors) != d:
        raise DegenerateSplitFailure(
            f"found {len(vectors)} joint eigenvectors for {d} classes"
        )

    e = h.identity
    chars = np.empty((d, d), dtype=complex)
    for r, v in enumerate(vectors):
        if abs(v[e]) < 1e-12 * np.linalg.norm(v):
            raise DegenerateSplitFailure(
                "candidate character vanishes at the identity class", witness=r
            )
        chars[r] = v / v[e]

    # validation: a(i) a(j) = sum_k conv[i,j,k] a(k), and a(ibar) = conj a(i)
    prod = np.einsum("ijk,rk->rij", conv, chars)
    outer = chars[:, :, None] * chars[:, None, :]
    residual = float(np.abs(prod - outer).max())
    herm = float(np.abs(np.conjugate(chars[:, h.involution]) - chars).max())
    residual = max(residual, herm)
    if residual > residual_tol:
        raise DegenerateSplitFailure(
            f"multiplicativity residual {residual:.3e} exceeds {residual_tol:.1e}"
        )

    order = sorted(range(d), key=lambda r: _sort_key(chars[r]))
    chars = chars[order]

    haar = h.haar_float
    plancherel = 1.0 / ((np.abs(chars) ** 2) @ haar).real

    positive = [r for r in range(d)
                if chars[r].real.min() > 1e-10 and np.abs(chars[r].imag).max() < 1e-10]
    if len(positive) != 1:
        raise DegenerateSplitFailure(
            f"{len(positive)} strictly positive characters found, expected exactly one",
            witness=positive,
        )

    chars.setflags(write=False)
    plancherel.setflags(write=False)
    return CharacterTable(
        classes=h.classes,
        chars=chars,
        plancherel=plancherel,
        haar=haar.copy(),
        positive_index=positive[0],
        residual=residual,
    )


def fourier(tbl: CharacterTable, f) -> np.ndarray:
    """fhat(a) = sum_i haar_i f(i) conj(a(i))."""
    f = np.asarray(f, dtype=complex)
    return np.conjugate(tbl.chars) @ (tbl.haar * f)


def inverse_fourier(tbl: CharacterTable, coeffs) -> np.ndarray:
    """f(i) = sum_a plancherel(a) coeffs(a) a(i)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    return (tbl.plancherel * coeffs) @ tbl.chars


def orthogonality_residual(tbl: CharacterTable) -> float:
    """Worst deviation of the weighted character Gram matrix from diag(1/plancherel)."""
    gram = (tbl.chars * tbl.haar) @ np.conjugate(tbl.chars).T
    return float(np.abs(gram - np.diag(1.0 / tbl.plancherel)).max())


def is_positive_definite(h: FiniteHypergroup, f, tol: float = 1e-9,
                         tbl: CharacterTable | None = None):
    """Positive definiteness of a function, with a two-route certificate.

    Primary test: the matrix M[i, j] = f(i * jbar) must be hermitian and
    positive semidefinite (eigenvalue floor -tol).  Cross-check: all
    Fourier coefficients against the characters must be >= -tol (real).
    Returns (bool, certificate dict); the bool is the matrix verdict.
    """
    f = np.asarray(f, dtype=complex)
    conv = h.conv_float
    M = np.tensordot(conv[:, h.involution, :], f, axes=([2], [0]))
    herm_residual = float(np.abs(M - np.conjugate(M.T)).max())
    min_eig = float(np.linalg.eigvalsh((M + np.conjugate(M.T)) / 2.0).min())
    matrix_positive = herm_residual <= tol and min_eig >= -tol

    cert = {
        "hermiticity_residual": herm_residual,
        "min_eigenvalue": min_eig,
        "matrix_positive": matrix_positive,
    }
    if tbl is not None:
        coeffs = tbl.plancherel * fourier(tbl, f)
        cert["fourier_min"] = float(coeffs.real.min())
        cert["fourier_imag_max"] = float(np.abs(coeffs.imag).max())
        cert["bochner_positive"] = bool(
            cert["fourier_min"] >= -tol and cert["fourier_imag_max"] <= tol
        )
    return matrix_positive, cert


@dataclass(frozen=True)
class DualMeasure:
    """Expansion of a product of characters over the character set."""

    raw: np.ndarray       # complex coefficients, character order
    weights: np.ndarray   # clamped to >= 0 and renormalized
    min_raw_real: float
    max_abs_imag: float
    sum_raw: complex
    positive: bool        # no raw coefficient below -tol
    clamped: bool         # some coefficient in [-tol, 0) was zeroed


def dual_convolution(h: FiniteHypergroup, tbl: CharacterTable, a: int, b: int,
                     tol: float = 1e-9) -> DualMeasure:
    """Coefficients of chi_a chi_b = sum_g c_g chi_g.

    c_g = plancherel(g) sum_i haar_i a(i) b(i) conj(g(i)).  Raw values
    are kept; weights are the raw real parts with tiny negatives (within
    tol of zero) clamped and the vector renormalized to mass one.
    """
    product = tbl.chars[a] * tbl.chars[b]
    raw = tbl.plancherel * fourier(tbl, product)
    re = raw.real
    min_re = float(re.min())
    weights = np.where(re > 0.0, re, 0.0)
    total = weights.sum()
    weights = weights / total
    return DualMeasure(
        raw=raw,
        weights=weights,
        min_raw_real=min_re,
        max_abs_imag=float(np.abs(raw.imag).max()),
        sum_raw=complex(raw.sum()),
        positive=min_re >= -tol,
        clamped=bool((re < 0.0).any() and min_re >= -tol),
    )


def conjugate_index(tbl: CharacterTable, a: int, tol: float = 1e-8) -> int:
    """Index of the character equal to the complex conjugate of chi_a."""
    dev = np.abs(tbl.chars - np.conjugate(tbl.chars[a])).max(axis=1)
    b = int(dev.argmin())
    if dev[b] > tol:
        raise DegenerateSplitFailure(
            f"no character matches the conjugate of chi{a} (residual {dev[b]:.3e})"
        )
    return b


def dual_hypergroup(h: FiniteHypergroup, tbl: CharacterTable,
                    tol: float = 1e-9) -> FiniteHypergroup:
    """The dual convolution structure, when its coefficients are positive.

    Raises ``DualNotPositive`` (with the offending character triple) if
    any raw coefficient sits below -tol; coefficients in [-tol, 0) are
    clamped and each row renormalized.
    """
    m = tbl.n_characters
    conv = np.empty((m, m, m), dtype=np.float64)
    for a in range(m):
        for b in range(a, m):
            dm = dual_convolution(h, tbl, a, b, tol=tol)
            if not dm.positive:
                g = int(dm.raw.real.argmin())
                raise DualNotPositive(
                    f"(chi{a} chi{b}) has coefficient {dm.min_raw_real:.6e} at chi{g}",
                    witness=(a, b, g),
                )
            conv[a, b] = dm.weights
            conv[b, a] = dm.weights
    return make_hypergroup(tbl.labels, conv, tol=max(tol, 1e-10))


def scheme_eigenvector_residual(s: Scheme, tbl: CharacterTable) -> float:
    """Scheme-level eigenvalue consistency of the character table.

    For each character a, the point function y -> a(rel(x0, y)) must be
    an eigenvector of every class adjacency matrix A_i with eigenvalue
    valency_i * a(i).  Returns the worst absolute residual.
    """
    base_row = s.relation[0]
    V = tbl.chars[:, base_row]                     # (m, n) rows are point functions
    worst = 0.0
    for i in range(s.n_classes):
        A = (s.relation == i).astype(np.float64)
        lhs = V @ A.T                              # (m, n): (A_i v)(x) over points
        rhs = (s.valencies[i] * tbl.chars[:, i])[:, None] * V
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst
