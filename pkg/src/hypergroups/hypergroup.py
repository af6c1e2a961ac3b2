"""Finite hypergroups: convolution tensors over a class set.

A finite hypergroup is a class set D with a convolution sending each
pair (i, j) to a probability vector over D, an identity class, and an
involution tied to the support of the convolution at the identity.
Tensors coming from schemes are exact (Fraction entries); tensors coming
from numeric families are float and carry a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import NotAHypergroup
from .schemes import Scheme

DEFAULT_TOL = 1e-12


def _is_exact(conv: np.ndarray) -> bool:
    return conv.dtype == object


@dataclass(frozen=True, eq=False)
class FiniteHypergroup:
    """Convolution structure; build via make_hypergroup or hypergroup_from_scheme."""

    classes: tuple
    conv: np.ndarray        # (d, d, d): conv[i, j, k] = (delta_i * delta_j)({k})
    identity: int
    involution: np.ndarray  # (d,) int

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def exact(self) -> bool:
        return _is_exact(self.conv)

    def class_index(self, c) -> int:
        return self.classes.index(c)

    @cached_property
    def haar(self) -> np.ndarray:
        """Left Haar weights: 1 / (delta_{ibar} * delta_i)({e})."""
        d = self.n_classes
        e = self.identity
        if self.exact:
            return np.array(
                [Fraction(1, 1) / self.conv[self.involution[i], i, e] for i in range(d)],
                dtype=object,
            )
        return 1.0 / np.real(self.conv[self.involution, np.arange(d), e]).astype(float)

    @cached_property
    def conv_float(self) -> np.ndarray:
        return self.conv.astype(np.float64) if self.exact else self.conv

    @cached_property
    def haar_float(self) -> np.ndarray:
        return self.haar.astype(np.float64) if self.exact else self.haar


def _identity_candidates(conv: np.ndarray, tol: float) -> list:
    d = conv.shape[0]
    eye = np.eye(d)
    out = []
    for e in range(d):
        left = conv[e].astype(np.float64) if _is_exact(conv) else np.real(conv[e])
        right = conv[:, e, :].astype(np.float64) if _is_exact(conv) else np.real(conv[:, e, :])
        if np.abs(left - eye).max() <= tol and np.abs(right - eye).max() <= tol:
            out.append(e)
    return out


def make_hypergroup(classes, conv, tol: float = DEFAULT_TOL) -> FiniteHypergroup:
    """Wrap a convolution tensor, inferring identity and involution.

    The identity must be the unique class acting as a two-sided unit;
    the involution is read off the support of the convolution at the
    identity.  Ambiguity or absence raises ``NotAHypergroup``; the full
    axiom sweep lives in :func:`verify_hypergroup`.
    """
    classes = tuple(classes)
    conv = np.asarray(conv)
    d = len(classes)
    if conv.shape != (d, d, d):
        raise NotAHypergroup(f"tensor shape {conv.shape} does not match {d} classes")

    ids = _identity_candidates(conv, tol)
    if not ids:
        raise NotAHypergroup("no class acts as a two-sided identity")
    if len(ids) > 1:
        raise NotAHypergroup(
            f"classes {[classes[e] for e in ids]} all act as identities", witness=ids
        )
    e = ids[0]

    tau = np.full(d, -1, dtype=np.int64)
    at_e = conv[:, :, e]
    for i in range(d):
        if _is_exact(conv):
            support = [j for j in range(d) if at_e[i, j] > 0]
        else:
            support = [j for j in range(d) if abs(at_e[i, j]) > tol]
        if len(support) != 1:
            raise NotAHypergroup(
                f"identity lies in {len(support)} products of class {classes[i]!r}",
                witness=(i, support),
            )
        tau[i] = support[0]
    if not (tau[tau] == np.arange(d)).all():
        raise NotAHypergroup("support map at the identity is not an involution",
                             witness=tuple(int(t) for t in tau))

    if isinstance(conv, np.ndarray):
        conv = conv.copy()
        conv.setflags(write=False)
    tau.setflags(write=False)
    return FiniteHypergroup(classes=classes, conv=conv, identity=e, involution=tau)


def hypergroup_from_scheme(s: Scheme) -> FiniteHypergroup:
    """Exact hypergroup on the classes of a scheme.

    (delta_i * delta_j)({k}) = valency_k p[i,j,k] / (valency_i valency_j);
    the left Haar weights then reproduce the valencies.
    """
    d = s.n_classes
    omega = [int(w) for w in s.valencies]
    conv = np.empty((d, d, d), dtype=object)
    for i in range(d):
        for j in range(d):
            denom = omega[i] * omega[j]
            for k in range(d):
                conv[i, j, k] = Fraction(omega[k] * int(s.p[i, j, k]), denom)
    h = FiniteHypergroup(
        classes=s.classes,
        conv=conv,
        identity=s.identity,
        involution=s.involution.copy(),
    )
    assert all(h.haar[i] == omega[i] for i in range(d))
    return h


def _assoc_residual(conv: np.ndarray):
    """(delta_i*delta_j)*delta_k minus delta_i*(delta_j*delta_k), both tensors."""
    t1 = np.tensordot(conv, conv, axes=([2], [0]))            # i j k m
    t2 = np.tensordot(conv, conv, axes=([2], [1]))            # j k i m
    return t1, t2.transpose(2, 0, 1, 3)


def verify_hypergroup(h: FiniteHypergroup, tol: float = DEFAULT_TOL) -> dict:
    """Axiom-by-axiom report for a convolution tensor.

    Exact tensors are checked with exact arithmetic (tol ignored except
    for reporting); float tensors use ``tol``.  Each entry carries a
    ``holds`` flag, a witness index tuple when it fails, and a residual.
    """
    conv = h.conv
    d = h.n_classes
    e = h.identity
    tau = h.involution
    exact = h.exact
    report: dict = {"exact": exact, "tol": tol}

    def entry(name, holds, witness=None, residual=None):
        report[name] = {"holds": bool(holds), "witness": witness, "residual": residual}

    if exact:
        neg = [(idx, v) for idx, v in np.ndenumerate(conv) if v < 0]
        sums = conv.sum(axis=2)
        bad_sum = [(idx, v) for idx, v in np.ndenumerate(sums) if v != 1]
        entry("nonnegative", not neg, witness=neg[0][0] if neg else None,
              residual=float(neg[0][1]) if neg else 0.0)
        entry("row_sums", not bad_sum, witness=bad_sum[0][0] if bad_sum else None,
              residual=float(bad_sum[0][1] - 1) if bad_sum else 0.0)
    else:
        reals = np.real(conv)
        imag_max = float(np.abs(np.imag(conv)).max()) if np.iscomplexobj(conv) else 0.0
        neg_min = float(reals.min())
        entry("nonnegative", neg_min >= -tol and imag_max <= tol,
              witness=tuple(map(int, np.unravel_index(reals.argmin(), reals.shape)))
              if neg_min < -tol else None,
              residual=min(neg_min, 0.0))
        sums = reals.sum(axis=2)
        dev = np.abs(sums - 1.0)
        entry("row_sums", float(dev.max()) <= tol,
              witness=tuple(map(int, np.unravel_index(dev.argmax(), dev.shape)))
              if dev.max() > tol else None,
              residual=float(dev.max()))

    ids = _identity_candidates(conv, tol)
    entry("identity_unique", ids == [e], witness=ids if ids != [e] else None)

    # identity support: e in supp(delta_i * delta_j) iff j = ibar
    at_e = conv[:, :, e].astype(np.float64) if exact else np.real(conv[:, :, e])
    should = np.zeros((d, d), dtype=bool)
    should[np.arange(d), tau] = True
    is_pos = at_e > (0 if exact else tol)
    entry("identity_support", (is_pos == should).all(),
          witness=_first_mismatch(is_pos, should))

    # involution antihomomorphism: conv[i, j, tau k] == conv[tau j, tau i, k]
    lhs = conv[:, :, tau]
    rhs = conv[np.ix_(tau, tau)].transpose(1, 0, 2)
    if exact:
        ok = bool((lhs == rhs).all())
        entry("involution_antihomomorphism", ok,
              witness=_first_mismatch(lhs, rhs, exact=True), residual=0.0 if ok else None)
    else:
        dev = np.abs(lhs - rhs)
        entry("involution_antihomomorphism", float(dev.max()) <= tol,
              witness=tuple(map(int, np.unravel_index(dev.argmax(), dev.shape)))
              if dev.max() > tol else None,
              residual=float(dev.max()))

    t1, t2 = _assoc_residual(conv)
    if exact:
        ok = bool((t1 == t2).all())
        entry("associativity", ok, witness=_first_mismatch(t1, t2, exact=True))
    else:
        dev = np.abs(t1 - t2)
        entry("associativity", float(dev.max()) <= tol,
              witness=tuple(map(int, np.unravel_index(dev.argmax(), dev.shape)))
              if dev.max() > tol else None,
              residual=float(dev.max()))

    try:
        haar = h.haar
        if exact:
            ok = all(haar[i] > 0 and haar[i] * conv[tau[i], i, e] == 1 for i in range(d))
        else:
            ok = bool((haar > 0).all()) and bool(
                np.abs(haar * np.real(conv[tau, np.arange(d), e]) - 1.0).max() <= tol
            )
    except ZeroDivisionError:
        ok = False  # the pairing (ibar, i) misses the claimed identity entirely
    entry("haar_consistency", ok)

    report["all_hold"] = all(
        v["holds"] for k, v in report.items() if isinstance(v, dict) and "holds" in v
    )
    return report


def _first_mismatch(a, b, exact=False):
    if exact:
        bad = np.argwhere(a != b)
    else:
        bad = np.argwhere(a != b) if a.dtype == bool else np.argwhere(np.abs(a - b) > 0)
    return tuple(map(int, bad[0])) if len(bad) else None


def is_commutative(h: FiniteHypergroup, tol: float = DEFAULT_TOL) -> bool:
    other = h.conv.transpose(1, 0, 2)
    if h.exact:
        return bool((h.conv == other).all())
    return float(np.abs(h.conv - other).max()) <= tol


def is_hermitian(h: FiniteHypergroup) -> bool:
    """Involution is the identity map."""
    return bool((h.involution == np.arange(h.n_classes)).all())


def is_probability(vec, tol: float = DEFAULT_TOL) -> bool:
    arr = np.asarray(vec)
    if arr.dtype == object:
        return all(v >= 0 for v in arr) and arr.sum() == 1
    r = np.real(arr)
    im = np.abs(np.imag(arr)).max() if np.iscomplexobj(arr) else 0.0
    return bool(r.min() >= -tol and im <= tol and abs(r.sum() - 1.0) <= tol)


def convolve_measures(h: FiniteHypergroup, mu, nu) -> np.ndarray:
    """Pushforward of mu x nu through the convolution: sum_ij mu_i nu_j (d_i*d_j)."""
    mu = np.asarray(mu)
    nu = np.asarray(nu)
    tmp = np.tensordot(mu, h.conv, axes=([0], [0]))
    return np.tensordot(nu, tmp, axes=([0], [0]))


def translate(h: FiniteHypergroup, f, i: int, j: int):
    """f evaluated at the product i * j, i.e. (delta_i * delta_j)(f)."""
    f = np.asarray(f)
    return np.tensordot(h.conv[i, j], f, axes=([0], [0]))


def involute(h: FiniteHypergroup, f) -> np.ndarray:
    """f^*(i) = conj(f(ibar))."""
    f = np.asarray(f)
    return np.conjugate(f[h.involution])


def convolve_functions(h: FiniteHypergroup, f, g) -> np.ndarray:
    """(f "*" g)(i) = sum_j f(i * jbar) g(j) haar_j, matching measure convolution."""
    f = np.asarray(f)
    g = np.asarray(g)
    shifted = np.tensordot(h.conv[:, h.involution, :], f, axes=([2], [0]))  # (i, j)
    weights = g * h.haar
    return np.tensordot(shifted, weights, axes=([1], [0]))


def modular_function(h: FiniteHypergroup) -> np.ndarray:
    """Delta(i) = haar(i) / haar(ibar); multiplicative on supports."""
    return h.haar / h.haar[h.involution] if not h.exact else np.array(
        [h.haar[i] / h.haar[h.involution[i]] for i in range(h.n_classes)], dtype=object
    )


def is_unimodular(h: FiniteHypergroup, tol: float = DEFAULT_TOL) -> bool:
    delta = modular_function(h)
    if h.exact:
        return all(x == 1 for x in delta)
    return bool(np.abs(delta - 1.0).max() <= tol)
