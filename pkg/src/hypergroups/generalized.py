"""Schemes with deformed transition matrices instead of 0/1 adjacency.

A generalized scheme keeps the relation partition of a classical scheme
but replaces each normalized adjacency matrix by a stochastic matrix
with the same support, reversible with respect to a vertex weight, whose
products stay inside the linear span of the family.  The coefficients of
those products (extracted at witness entries, then verified globally)
form a deformed convolution tensor.

Infinite examples enter through centered windows: boundary rows are
sub-stochastic and every product check is restricted to rows far enough
from the boundary, tracked per class pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ClosureResidual,
    DetailedBalanceViolation,
    NotACharacter,
    NotAHypergroup,
    NonSquare,
    NotStochastic,
    SchemeError,
    SupportMismatch,
)
from .hypergroup import FiniteHypergroup, hypergroup_from_scheme, make_hypergroup
from .schemes import Scheme

STOCHASTIC_TOL = 1e-12
BALANCE_TOL = 1e-10
CLOSURE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GeneralizedScheme:
    points: tuple
    classes: tuple
    relation: np.ndarray          # (n, n) class indices
    identity: int
    involution: np.ndarray
    stoch: np.ndarray             # (d, n, n) float
    vertex_weight: np.ndarray     # (n,) float, 1 at base_point
    base_point: int
    p_tilde: np.ndarray           # (d, d, d) float, deformed tensor
    pair_checked: np.ndarray      # (d, d) bool: closure verified for this pair
    boundary_distance: np.ndarray  # (n,) int, large when not windowed
    class_order: np.ndarray       # (d,) int weights for the window policy
    report: dict
    base_scheme: Scheme | None = None
    base_product: Callable | None = None

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def windowed(self) -> bool:
        return not bool(self.pair_checked.all())


def _interior_rows(bd: np.ndarray, needed: int) -> np.ndarray:
    return np.flatnonzero(bd >= needed)


def _audit_parts(points, classes, relation, identity, involution, stoch, weight,
                 base_point, bd, class_order, ref_positive,
                 stochastic_tol, balance_tol, closure_tol):
    """Shared verification + extraction engine.

    ``ref_positive`` is an optional (d, d, d) boolean reference for the
    support pattern of the deformed tensor; when None it is counted from
    the relation matrix at interior witnesses.
    """
    n = len(points)
    d = len(classes)
    stoch = np.asarray(stoch, dtype=np.float64)
    weight = np.asarray(weight, dtype=np.float64)
    report: dict = {}

    if stoch.shape != (d, n, n):
        raise NonSquare(f"transition stack has shape {stoch.shape}, expected {(d, n, n)}")
    if (weight <= 0).any():
        x = int(np.flatnonzero(weight <= 0)[0])
        raise DetailedBalanceViolation(f"vertex weight at {points[x]!r} is not positive",
                                       witness=x)
    weight = weight / weight[base_point]

    eye_dev = float(np.abs(stoch[identity] - np.eye(n)).max())
    if eye_dev > stochastic_tol:
        raise SupportMismatch(f"identity transition deviates from I by {eye_dev:.3e}")

    if float(stoch.min()) < 0.0:
        i, x, y = map(int, np.unravel_index(stoch.argmin(), stoch.shape))
        raise NotStochastic(
            f"negative entry {stoch.min():.3e} in class {classes[i]!r}",
            witness=(i, x, y),
        )

    row_sums = stoch.sum(axis=2)
    for i in range(d):
        full = _interior_rows(bd, int(class_order[i]))
        dev_full = np.abs(row_sums[i, full] - 1.0)
        if dev_full.size and float(dev_full.max()) > stochastic_tol:
            x = int(full[dev_full.argmax()])
            raise NotStochastic(
                f"row {points[x]!r} of class {classes[i]!r} sums to {row_sums[i, x]!r}",
                witness=(i, x),
            )
        over = row_sums[i] - 1.0
        if float(over.max()) > stochastic_tol:
            x = int(over.argmax())
            raise NotStochastic(
                f"row {points[x]!r} of class {classes[i]!r} exceeds mass one",
                witness=(i, x),
            )
    report["stochastic_rows_checked"] = int(sum(
        len(_interior_rows(bd, int(class_order[i]))) for i in range(d)
    ))

    for i in range(d):
        on_class = relation == i
        positive = stoch[i] > 0.0
        if (positive & ~on_class).any():
            x, y = map(int, np.argwhere(positive & ~on_class)[0])
            raise SupportMismatch(
                f"class {classes[i]!r} transition is positive outside its relation",
                witness=(i, x, y),
            )
        if (on_class & ~positive).any():
            x, y = map(int, np.argwhere(on_class & ~positive)[0])
            raise SupportMismatch(
                f"class {classes[i]!r} transition vanishes on its relation",
                witness=(i, x, y),
            )

    lhs = weight[None, :, None] * stoch
    rhs = lhs[involution].transpose(0, 2, 1)
    # residual is relative where entries are large: the weight can span many
    # orders of magnitude, and an absolute tolerance on entries of size 1/eps
    # would demand sub-ulp agreement
    balance = np.abs(lhs - rhs) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    bal_dev = float(balance.max())
    report["detailed_balance_residual"] = bal_dev
    if bal_dev > balance_tol:
        i, x, y = map(int, np.unravel_index(balance.argmax(), balance.shape))
        raise DetailedBalanceViolation(
            f"reversibility off by {bal_dev:.3e} on class {classes[i]!r}",
            witness=(i, x, y),
        )

    # weighted operator picture: conjugated matrices are mutual adjoints
    # and contractions; meaningful on full (non-window) data, advisory on windows
    sq = np.sqrt(weight)
    conj_ops = sq[None, :, None] * stoch / sq[None, None, :]
    report["adjoint_residual"] = float(
        np.abs(conj_ops - conj_ops[involution].transpose(0, 2, 1)).max()
    )
    report["operator_norms"] = [float(np.linalg.norm(conj_ops[i], 2)) for i in range(d)]

    p_tilde = np.zeros((d, d, d), dtype=np.float64)
    pair_checked = np.zeros((d, d), dtype=bool)
    closure_dev = 0.0
    rowsum_dev = 0.0
    support_ok = True
    for i in range(d):
        for j in range(d):
            rows = _interior_rows(bd, int(class_order[i]) + int(class_order[j]))
            if rows.size == 0:
                continue
            prod = stoch[i] @ stoch[j]
            counts = np.zeros(d, dtype=np.int64)
            for k in range(d):
                cells = (relation[rows] == k)
                if not cells.any():
                    continue
                rloc, y = np.unravel_index(
                    np.where(cells, stoch[k][rows], -1.0).argmax(), cells.shape
                )
                x = int(rows[rloc])
                y = int(y)
                p_tilde[i, j, k] = prod[x, y] / stoch[k][x, y]
                if ref_positive is None:
                    counts[k] = int(
                        ((relation[x] == i) & (relation[:, y] == j)).sum()
                    )
            approx = np.tensordot(p_tilde[i, j], stoch, axes=([0], [0]))
            dev = float(np.abs(prod[rows] - approx[rows]).max())
            closure_dev = max(closure_dev, dev)
            if dev > closure_tol:
                raise ClosureResidual(
                    f"product of classes ({classes[i]!r}, {classes[j]!r}) leaves the "
                    f"span by {dev:.3e}",
                    witness=(i, j),
                )
            srow = float(p_tilde[i, j].sum())
            rowsum_dev = max(rowsum_dev, abs(srow - 1.0))
            if abs(srow - 1.0) > BALANCE_TOL:
                raise ClosureResidual(
                    f"deformed coefficients of ({classes[i]!r}, {classes[j]!r}) "
                    f"sum to {srow!r}",
                    witness=(i, j),
                )
            expected_pos = (ref_positive[i, j] if ref_positive is not None
                            else counts > 0)
            # where the reference count vanishes the coefficient must be noise;
            # where it is positive the extracted value must be strictly positive
            zero_ok = (np.abs(p_tilde[i, j]) <= np.sqrt(closure_tol)) | expected_pos
            pos_ok = (p_tilde[i, j] > 0.0) | ~expected_pos
            if not (zero_ok.all() and pos_ok.all()):
                support_ok = False
            pair_checked[i, j] = True

    report["closure_residual"] = closure_dev
    report["deformed_row_sum_residual"] = rowsum_dev
    report["deformed_support_matches"] = support_ok
    report["pairs_checked"] = int(pair_checked.sum())
    report["pairs_total"] = d * d
    report["window_size"] = n
    report["interior_fraction"] = float(pair_checked.mean())

    return stoch, weight, p_tilde, pair_checked, report


def build_generalized(base: Scheme, stoch, vertex_weight=None, base_point=None,
                      stochastic_tol: float = STOCHASTIC_TOL,
                      balance_tol: float = BALANCE_TOL,
                      closure_tol: float = CLOSURE_TOL) -> GeneralizedScheme:
    """Verify deformed transition data over a classical scheme.

    ``stoch`` is a (classes, points, points) stack; ``vertex_weight``
    defaults to the constant weight; ``base_point`` (a point label)
    fixes the normalization.  Raises ``NotStochastic``,
    ``SupportMismatch``, ``DetailedBalanceViolation`` or
    ``ClosureResidual`` with witnesses.
    """
    n = base.n_points
    if vertex_weight is None:
        vertex_weight = np.ones(n)
    bp = 0 if base_point is None else base.point_index(base_point)
    bd = np.full(n, n + max(1, base.n_classes), dtype=np.int64)
    order = np.zeros(base.n_classes, dtype=np.int64)

    stoch_v, weight, p_tilde, checked, report = _audit_parts(
        base.points, base.classes, base.relation, base.identity, base.involution,
        stoch, vertex_weight, bp, bd, order, ref_positive=(base.p > 0),
        stochastic_tol=stochastic_tol, balance_tol=balance_tol,
        closure_tol=closure_tol,
    )
    if not report["deformed_support_matches"]:
        raise SupportMismatch("deformed tensor support differs from the base counts")
    assert checked.all()

    for arr in (stoch_v, weight, p_tilde, checked, bd, order):
        arr.setflags(write=False)
    return GeneralizedScheme(
        points=base.points, classes=base.classes, relation=base.relation,
        identity=base.identity, involution=base.involution, stoch=stoch_v,
        vertex_weight=weight, base_point=bp, p_tilde=p_tilde,
        pair_checked=checked, boundary_distance=bd, class_order=order,
        report=report, base_scheme=base, base_product=None,
    )


def build_windowed(points, classes, relation, identity, involution, stoch,
                   vertex_weight, base_point, boundary_distance, class_order,
                   base_product=None,
                   stochastic_tol: float = STOCHASTIC_TOL,
                   balance_tol: float = BALANCE_TOL,
                   closure_tol: float = CLOSURE_TOL) -> GeneralizedScheme:
    """Windowed variant: checks restricted by boundary distance.

    The relation partition need not be a scheme on the window; closure
    of the pair (i, j) is verified on rows whose boundary distance is at
    least class_order[i] + class_order[j], and pairs with no such row
    stay unchecked.
    """
    relation = np.asarray(relation, dtype=np.int64)
    involution = np.asarray(involution, dtype=np.int64)
    bd = np.asarray(boundary_distance, dtype=np.int64)
    order = np.asarray(class_order, dtype=np.int64)

    stoch_v, weight, p_tilde, checked, report = _audit_parts(
        tuple(points), tuple(classes), relation, identity, involution,
        stoch, vertex_weight, base_point, bd, order, ref_positive=None,
        stochastic_tol=stochastic_tol, balance_tol=balance_tol,
        closure_tol=closure_tol,
    )
    for arr in (stoch_v, weight, p_tilde, checked, bd, order):
        arr.setflags(write=False)
    return GeneralizedScheme(
        points=tuple(points), classes=tuple(classes), relation=relation,
        identity=identity, involution=involution, stoch=stoch_v,
        vertex_weight=weight, base_point=base_point, p_tilde=p_tilde,
        pair_checked=checked, boundary_distance=bd, class_order=order,
        report=report, base_scheme=None, base_product=base_product,
    )


def classical_embedding(s: Scheme) -> GeneralizedScheme:
    """A scheme viewed as a generalized scheme: S_i = A_i / valency_i."""
    n, d = s.n_points, s.n_classes
    stoch = np.empty((d, n, n))
    for i in range(d):
        stoch[i] = (s.relation == i) / float(s.valencies[i])
    return build_generalized(s, stoch)


def deformed_intersection_numbers(g: GeneralizedScheme) -> np.ndarray:
    """The verified deformed tensor (zero rows where a window pair is unchecked)."""
    return g.p_tilde


def deformed_valencies(g: GeneralizedScheme) -> np.ndarray:
    """1 / p_tilde[i, ibar, e] per class; requires those pairs checked."""
    d = g.n_classes
    out = np.empty(d)
    for i in range(d):
        if not g.pair_checked[i, g.involution[i]]:
            raise SchemeError(
                f"deformed valency of class {g.classes[i]!r} not determined "
                f"by this window"
            )
        out[i] = 1.0 / g.p_tilde[i, g.involution[i], g.identity]
    return out


def hypergroup_from_generalized(g: GeneralizedScheme, tol: float = 1e-9) -> FiniteHypergroup:
    """Finite hypergroup carried by the deformed tensor.

    Windowed objects with unchecked pairs are refused: their convolution
    is only partially determined, which cannot form a finite hypergroup.
    """
    if g.windowed:
        raise NotAHypergroup(
            f"only {int(g.pair_checked.sum())}/{g.pair_checked.size} class pairs "
            f"are determined by this window"
        )
    return make_hypergroup(g.classes, g.p_tilde, tol=tol)


def pi_positive_definite(g: GeneralizedScheme, kernel, tol: float = 1e-9):
    """Positive definiteness of a kernel against the vertex weight.

    Tests the matrix B[x, y] = weight(x) K(x, y): hermitian within tol
    and eigenvalue floor -tol.  Returns (bool, certificate).
    """
    K = np.asarray(kernel, dtype=complex)
    n = g.n_points
    if K.shape != (n, n):
        raise NonSquare(f"kernel has shape {K.shape}, expected {(n, n)}")
    B = g.vertex_weight[:, None] * K
    herm = float(np.abs(B - np.conjugate(B.T)).max())
    min_eig = float(np.linalg.eigvalsh((B + np.conjugate(B.T)) / 2.0).min())
    ok = herm <= tol and min_eig >= -tol
    return ok, {"hermiticity_residual": herm, "min_eigenvalue": min_eig}


def s_tilde_f(g: GeneralizedScheme, f) -> np.ndarray:
    """Weighted transition mixture sum_i f(i) valency~_i S~_i."""
    f = np.asarray(f, dtype=complex)
    d = g.n_classes
    need = [i for i in range(d) if f[i] != 0]
    omega = np.zeros(d)
    for i in need:
        if not g.pair_checked[i, g.involution[i]]:
            raise SchemeError(
                f"deformed valency of class {g.classes[i]!r} not determined "
                f"by this window"
            )
        omega[i] = 1.0 / g.p_tilde[i, g.involution[i], g.identity]
    return np.tensordot(f * omega, g.stoch.astype(complex), axes=([0], [0]))


def kernel_F_f(g: GeneralizedScheme, f) -> np.ndarray:
    """Point kernel F(x, y) = f(class of (x, y))."""
    f = np.asarray(f)
    return f[g.relation]


def _deformed_char_residual(g: GeneralizedScheme, alpha: np.ndarray) -> float:
    worst = 0.0
    d = g.n_classes
    for i in range(d):
        for j in range(d):
            if not g.pair_checked[i, j]:
                continue
            lhs = alpha[i] * alpha[j]
            rhs = complex(np.dot(g.p_tilde[i, j], alpha))
            worst = max(worst, abs(lhs - rhs))
    return worst


def positive_connection_check(g: GeneralizedScheme, alpha, tol: float = 1e-9,
                              character_tol: float = 1e-8):
    """Certificate that a deformed character connects the two structures.

    Verifies alpha is multiplicative for the deformed tensor (over the
    checked pairs), then tests (a) positive definiteness of alpha on the
    base class hypergroup and (b) plain positive semidefiniteness of the
    point kernel F_alpha.  On windowed objects (a) runs on the class
    sub-block whose products stay inside the window, and the certificate
    is flagged as truncated.
    """
    alpha = np.asarray(alpha, dtype=complex)
    char_residual = _deformed_char_residual(g, alpha)
    if char_residual > character_tol:
        raise NotACharacter(
            f"multiplicativity residual {char_residual:.3e} over checked pairs"
        )

    d = g.n_classes
    truncated = g.base_scheme is None
    if not truncated:
        h0 = hypergroup_from_scheme(g.base_scheme)
        M = np.tensordot(h0.conv_float[:, h0.involution, :], alpha, axes=([2], [0]))
    else:
        if g.base_product is None:
            raise SchemeError("windowed object lacks a base product rule")
        K = (d - 1) // 2
        M = np.empty((K + 1, K + 1), dtype=complex)
        for i in range(K + 1):
            for j in range(K + 1):
                prod = g.base_product(i, int(g.involution[j]))
                M[i, j] = sum(w * alpha[k] for k, w in prod.items())
    herm = float(np.abs(M - np.conjugate(M.T)).max())
    base_min = float(np.linalg.eigvalsh((M + np.conjugate(M.T)) / 2.0).min())

    F = kernel_F_f(g, alpha)
    kherm = float(np.abs(F - np.conjugate(F.T)).max())
    kernel_min = float(np.linalg.eigvalsh((F + np.conjugate(F.T)) / 2.0).min())

    ok = (herm <= tol and base_min >= -tol and kherm <= tol and kernel_min >= -tol)
    return ok, {
        "character_residual": char_residual,
        "base_hermiticity_residual": herm,
        "base_min_eigenvalue": base_min,
        "kernel_hermiticity_residual": kherm,
        "kernel_min_eigenvalue": kernel_min,
        "truncated": truncated,
    }


def dual_product_generalized(g: GeneralizedScheme, tbl, a: int, b: int,
                             tol: float = 1e-9, check_precondition: bool = True):
    """Product of two deformed characters expanded over the character set.

    ``tbl`` is the character table of the deformed hypergroup.  The
    spectral positivity of the expansion is only guaranteed when the
    second factor passes the positive-connection certificate; the
    certificate outcome rides along in the info dict.
    """
    from .harmonic import dual_convolution

    h = hypergroup_from_generalized(g)
    info: dict = {}
    if check_precondition:
        ok, cert = positive_connection_check(g, tbl.chars[b], tol=tol)
        info["precondition_certified"] = ok
        info["precondition"] = cert
    dm = dual_convolution(h, tbl, a, b, tol=tol)
    return dm, info
