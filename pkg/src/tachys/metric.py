"""Positive-definite metrics on C^2 and the non-Hermitian operators they tame.

A metric ``eta`` redefines the inner product as <u|eta|v>.  An operator that
is Hermitian with respect to such a metric ("quasi-Hermitian") is similar to
an ordinary Hermitian generator via the metric square root; this module
builds those pairs, measures how far an operator is from metric-Hermiticity,
and computes metric-deformed angles between states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .smallmat import (
    MetricDegeneracyError,
    as_operator,
    as_state,
    dagger,
    eigvals2,
    frobenius,
    hermitian_sqrt,
    is_hermitian,
    spectral_gap,
)

__all__ = [
    "Metric",
    "QuasiHamiltonian",
    "diag_metric",
    "metric_from_sqrt",
    "metric_from_matrix",
    "quasi_hamiltonian",
    "pseudo_hermiticity_defect",
    "state_angle",
    "metric_angle",
    "transition_defect",
]

#: below this margin the metric square root is treated as singular
DEGENERACY_MARGIN = 1e-12

#: metric norms smaller than this make angles meaningless
NORM_FLOOR = 1e-14

GAP_MATCH_TOL = 1e-8
DEFECT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Metric:
    """A positive-definite metric with cached square root and inverse root.

    ``diag_scale`` / ``sqrt_diag`` / ``sqrt_offdiag`` record which
    parameterization produced the metric (None when not applicable):
    ``diag_metric(scale)`` yields eta = diag(1, scale**2); ``metric_from_sqrt``
    yields the metric whose Hermitian root is [[1, offdiag], [conj, diag]].
    """

    eta: np.ndarray
    sqrt_eta: np.ndarray
    inv_sqrt_eta: np.ndarray
    diag_scale: float | None = None
    sqrt_diag: float | None = None
    sqrt_offdiag: complex | None = None


@dataclass(frozen=True, eq=False)
class QuasiHamiltonian:
    """A metric-Hermitian generator and its flat Hermitian partner.

    ``operator`` is the (generally non-Hermitian) matrix that actually evolves
    states; ``h`` is the Hermitian generator it is similar to through the
    metric square root; both share the real eigenvalue gap ``omega``.
    """

    h: np.ndarray
    metric: Metric
    operator: np.ndarray
    omega: float


def diag_metric(scale: float) -> Metric:
    """Metric diag(1, scale**2) together with its roots."""
    s = float(scale)
    if not np.isfinite(s) or s <= 0.0:
        raise ValueError("diagonal metric scale must be a positive finite real")
    eta = np.diag([1.0 + 0j, s * s])
    return Metric(
        eta=eta,
        sqrt_eta=np.diag([1.0 + 0j, s]),
        inv_sqrt_eta=np.diag([1.0 + 0j, 1.0 / s]),
        diag_scale=s,
    )


def metric_from_sqrt(diag: float, offdiag: complex) -> Metric:
    """Metric whose Hermitian square root is [[1, offdiag], [conj(offdiag), diag]].

    The root must stay positive definite, which requires real ``diag`` and a
    determinant margin ``diag - |offdiag|**2`` above DEGENERACY_MARGIN; below
    it the construction is rejected (that margin going to zero is exactly the
    degenerate limit where travel times collapse).
    """
    f = float(diag)
    g = complex(offdiag)
    if not np.isfinite(f) or not np.isfinite(g.real) or not np.isfinite(g.imag):
        raise ValueError("metric root parameters must be finite")
    margin = f - abs(g) ** 2
    if margin <= DEGENERACY_MARGIN:
        raise MetricDegeneracyError(
            f"metric square root is degenerate: diag - |offdiag|^2 = {margin:.3e}",
            eigenvalue=margin,
        )
    root = np.array([[1.0, g], [np.conj(g), f]], dtype=complex)
    eta = root @ root
    inv_root = np.array([[f, -g], [-np.conj(g), 1.0]], dtype=complex) / margin
    return Metric(eta=eta, sqrt_eta=root, inv_sqrt_eta=inv_root, sqrt_diag=f, sqrt_offdiag=g)


def metric_from_matrix(eta) -> Metric:
    """Metric built from an explicit positive-definite matrix."""
    m = as_operator(eta, dim=2)
    root = hermitian_sqrt(m)
    inv_root = np.linalg.inv(root)
    inv_root = 0.5 * (inv_root + dagger(inv_root))
    return Metric(eta=m, sqrt_eta=root, inv_sqrt_eta=inv_root)


def quasi_hamiltonian(h, metric: Metric, omega: float) -> QuasiHamiltonian:
    """Dress a Hermitian generator with a metric.

    Returns the similarity image ``inv_sqrt_eta @ h @ sqrt_eta`` bundled with
    its ingredients.  The generator must be Hermitian and its eigenvalue gap
    must match ``omega``.
    """
    hm = as_operator(h, dim=2)
    if not is_hermitian(hm):
        raise ValueError("quasi_hamiltonian requires a Hermitian generator")
    omega = float(omega)
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    gap = spectral_gap(hm)
    if abs(gap - omega) > GAP_MATCH_TOL * max(1.0, omega):
        raise ValueError(f"generator gap {gap.real:.12g} does not match omega {omega:.12g}")
    op = metric.inv_sqrt_eta @ hm @ metric.sqrt_eta
    # validation gates scale with the conditioning of the similarity: near the
    # degenerate-metric limit the raw residuals are dominated by roundoff that
    # double precision cannot avoid, so an absolute gate would reject exact
    # constructions.  For well-conditioned metrics cond/2 ~ 1 and the gates
    # collapse to the tight absolute tolerances.
    cond = 0.5 * frobenius(metric.sqrt_eta) * frobenius(metric.inv_sqrt_eta)
    defect_gate = DEFECT_TOL * max(1.0, frobenius(op)) * cond * cond
    if pseudo_hermiticity_defect(op, metric.eta) > defect_gate:
        raise ValueError("constructed operator violates metric-Hermiticity")
    l_op = eigvals2(op)
    l_h = eigvals2(hm)
    spectrum_gate = max(1e-10 * max(1.0, omega), 50.0 * np.finfo(float).eps * frobenius(op) * cond)
    if max(abs(l_op[0] - l_h[0]), abs(l_op[1] - l_h[1])) > spectrum_gate:
        raise ValueError("constructed operator does not share the generator spectrum")
    return QuasiHamiltonian(h=hm, metric=metric, operator=op, omega=omega)


def pseudo_hermiticity_defect(operator, eta) -> float:
    """Frobenius distance ||op^dag - eta @ op @ eta^-1||_F.

    Zero exactly when ``operator`` is Hermitian in the ``eta`` inner product.
    """
    op = as_operator(operator, dim=2)
    em = as_operator(eta, dim=2)
    if abs(np.linalg.det(em)) < 1e-300:
        raise ValueError("metric matrix is singular")
    try:
        inv = np.linalg.inv(em)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - det check above
        raise ValueError("metric matrix is singular") from exc
    return frobenius(dagger(op) - em @ op @ inv)


def state_angle(u, v) -> float:
    """Fubini-Study angle arccos |<u|v>| between unit states."""
    a = as_state(u, dim=2)
    b = as_state(v, dim=2)
    return float(np.arccos(np.clip(abs(np.vdot(a, b)), 0.0, 1.0)))


def metric_angle(u, v, metric: Metric) -> float:
    """Angle between states in the metric inner product.

    arccos sqrt( <u|eta|v><v|eta|u> / (<u|eta|u><v|eta|v>) ), radicand clipped
    to [0, 1].  Raises MetricDegeneracyError when either metric norm collapses
    below NORM_FLOOR (the degenerate "shortcut" limit).
    """
    a = as_state(u, dim=2)
    b = as_state(v, dim=2)
    eta = metric.eta
    nu = float(np.real(np.vdot(a, eta @ a)))
    nv = float(np.real(np.vdot(b, eta @ b)))
    if nu < NORM_FLOOR or nv < NORM_FLOOR:
        raise MetricDegeneracyError(
            f"metric norm collapsed ({min(nu, nv):.3e}); angle undefined",
            eigenvalue=min(nu, nv),
        )
    cross = abs(np.vdot(a, eta @ b)) ** 2
    radicand = np.clip(cross / (nu * nv), 0.0, 1.0)
    return float(np.arccos(np.sqrt(radicand)))


def transition_defect(times, etas, hams) -> float:
    """How badly a time-dependent (metric, generator) pair violates the
    norm-preservation balance law.

    For each interior sample the derivative of the inverse metric is formed by
    central differences and the residual
    ``ham^dag - (eta @ ham @ eta^-1 - 1j * eta @ d(eta^-1)/dt)`` is measured in
    Frobenius norm; the maximum over interior samples is returned.  At least
    three samples are required, and every metric sample must be invertible.
    """
    ts = np.asarray(times, dtype=float).reshape(-1)
    if ts.shape[0] < 3:
        raise ValueError("transition_defect needs at least three samples")
    if np.any(np.diff(ts) <= 0.0):
        raise ValueError("sample times must be strictly increasing")
    es = [as_operator(e, dim=2) for e in etas]
    hs = [as_operator(h, dim=2) for h in hams]
    if len(es) != ts.shape[0] or len(hs) != ts.shape[0]:
        raise ValueError("times, etas and hams must have matching lengths")
    invs = []
    for e in es:
        if abs(np.linalg.det(e)) < 1e-300:
            raise ValueError("metric sample is singular")
        invs.append(np.linalg.inv(e))
    worst = 0.0
    for j in range(1, ts.shape[0] - 1):
        dinv = (invs[j + 1] - invs[j - 1]) / (ts[j + 1] - ts[j - 1])
        balance = es[j] @ hs[j] @ invs[j] - 1j * (es[j] @ dinv)
        worst = max(worst, frobenius(dagger(hs[j]) - balance))
    return worst
