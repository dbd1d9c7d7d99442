"""Charts with analytic field content and their pointwise jets.

A Chart carries the coordinate names, named constants, and optional analytic
fields: metric components g_{mu nu}, tetrad components h^a_mu, connection
components Gamma_lam{}^mu{}_nu, spinor components, and a vector field tau.
Evaluating a chart at a point produces a JetPoint: values plus exact first
and second partial derivatives of every declared field.

Convention: the signature is (+,-,-,-) and connection components follow the
convention in which the covariant derivative of a vector field reads
partial_lam v^mu - Gamma_lam{}^mu{}_nu v^nu, so the Levi-Civita components
are the NEGATIVE of the textbook Christoffel symbols Gamma^mu_{lam nu}.
Lowering the connection is the plain contraction g_{nu b} Gamma_mu{}^b{}_al.
See README "Conventions".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exprs import Expr, parse_expr

__all__ = [
    "Chart",
    "JetPoint",
    "TensorValue",
    "ChartError",
    "ChartDomainError",
    "LEVI_CIVITA",
    "MINKOWSKI_ETA",
]

MINKOWSKI_ETA = np.diag([1.0, -1.0, -1.0, -1.0])

LEVI_CIVITA = "levi-civita"

DET_FLOOR = 1e-12
TETRAD_COND_CEIL = 1e8


class ChartError(ValueError):
    pass


class ChartDomainError(ChartError):
    """Evaluation refused: singular metric/tetrad or wrong signature."""


def _as_expr(entry, coords, constants):
    if isinstance(entry, Expr):
        return entry
    return parse_expr(str(entry), coords, constants)


@dataclass(frozen=True)
class TensorValue:
    """Multi-index array at a point with per-index variance ('u' or 'd').

    Leading axes of ``components`` beyond the declared indices are batch
    axes (pointwise evaluation over grids).
    """

    components: np.ndarray
    variance: tuple
    labels: tuple = ()

    def __post_init__(self):
        comp = np.asarray(self.components)
        object.__setattr__(self, "components", comp)
        k = len(self.variance)
        if comp.ndim < k or comp.shape[comp.ndim - k:] != (4,) * k:
            raise ChartError(f"components shape {comp.shape} does not match "
                             f"variance {self.variance}")

    @property
    def rank(self):
        return len(self.variance)

    def max_abs(self):
        return float(np.max(np.abs(self.components)))

    def symmetry_defect(self, axis_a, axis_b, sign=1.0):
        """max |T - sign * T.swap(axis_a, axis_b)| over components."""
        nd = self.components.ndim
        k = self.rank
        a = nd - k + axis_a
        b = nd - k + axis_b
        return float(np.max(np.abs(self.components
                                   - sign * np.swapaxes(self.components, a, b))))


def _symmetric_pairs():
    return [(i, j) for i in range(4) for j in range(i, 4)]


class Chart:
    """Named coordinates, constants and analytic fields on a 4d chart."""

    dim = 4

    def __init__(self, name, coords, constants=None, metric=None, tetrad=None,
                 connection=None, spinor=None, tau=None):
        if len(coords) != 4:
            raise ChartError("charts are 4-dimensional")
        self.name = name
        self.coords = tuple(coords)
        self.constants = dict(constants or {})
        if metric is None and tetrad is None:
            raise ChartError("chart needs a metric or a tetrad")
        self.metric = self._grid_of_exprs(metric, (4, 4), symmetric=True)
        self.tetrad = self._grid_of_exprs(tetrad, (4, 4))
        if isinstance(connection, str):
            if connection != LEVI_CIVITA:
                raise ChartError(f"unknown connection keyword '{connection}'")
            self.connection = LEVI_CIVITA
        else:
            self.connection = self._grid_of_exprs(connection, (4, 4, 4))
        self.spinor = self._grid_of_exprs(spinor, (4, 2))  # [component][re, im]
        self.tau = self._grid_of_exprs(tau, (4,))

    def _grid_of_exprs(self, entries, shape, symmetric=False):
        if entries is None:
            return None
        arr = np.empty(shape, dtype=object)
        entries = np.asarray(entries, dtype=object)
        if entries.shape != shape:
            raise ChartError(f"expected field of shape {shape}, got {entries.shape}")
        for idx in np.ndindex(shape):
            arr[idx] = _as_expr(entries[idx], self.coords, self.constants)
        if symmetric:
            for i, j in _symmetric_pairs():
                if arr[i, j].source != arr[j, i].source:
                    raise ChartError(f"metric entries ({i},{j}) and ({j},{i}) differ")
        return arr

    def jet_at(self, point):
        return JetPoint(self, point)

    def with_fields(self, **overrides):
        """Copy of the chart with some fields replaced (exprs or None)."""
        fields = dict(name=self.name, coords=self.coords, constants=self.constants,
                      metric=self.metric, tetrad=self.tetrad,
                      connection=self.connection, spinor=self.spinor, tau=self.tau)
        fields.update(overrides)
        return Chart(**fields)


def _eval_grid(exprs, point):
    """Evaluate an object-array of Exprs; returns (values, grads, hessians)
    with the grid axes leading and derivative axes appended at the end."""
    shape = exprs.shape
    flat = exprs.ravel()
    first = flat[0].jet(point)
    batch = first.value.shape
    vals = np.empty(shape + batch)
    grads = np.empty(shape + batch + (4,))
    hesss = np.empty(shape + batch + (4, 4))
    for k, e in enumerate(flat):
        idx = np.unravel_index(k, shape)
        jet = e.jet(point) if k else first
        vals[idx] = jet.value
        grads[idx] = jet.grad
        hesss[idx] = jet.hess
    # move batch axes in front of the grid axes
    nb = len(batch)
    ng = len(shape)
    if nb:
        src = list(range(ng, ng + nb))
        vals = np.moveaxis(vals, src, list(range(nb)))
        grads = np.moveaxis(grads, src, list(range(nb)))
        hesss = np.moveaxis(hesss, src, list(range(nb)))
    # move derivative axes of grads/hessians to the FRONT (after batch):
    # dg[lam, mu, nu] = partial_lam g_{mu nu}
    grads = np.moveaxis(grads, -1, nb)
    hesss = np.moveaxis(hesss, [-2, -1], [nb, nb + 1])
    return vals, grads, hesss


class JetPoint:
    """Values and first/second partials of all declared fields at one point
    (or a batch of points: leading axes of ``point`` before the last).

    Index conventions on arrays (after any batch axes):
      g[mu, nu]            metric             dg[lam, mu, nu] = d_lam g
      h[a, mu]             tetrad coframe     dh[lam, a, mu]
      hinv[mu, a]          tetrad frame       dhinv[lam, mu, a]
      k[lam, mu, nu]       connection         dk[rho, lam, mu, nu]
      psi[A] (complex)     spinor             dpsi[lam, A]
      tau[al]              vector field       dtau[nu, al], ddtau[mu, nu, al]
    """

    def __init__(self, chart, point):
        self.chart = chart
        point = np.asarray(point, dtype=float)
        if point.shape[-1] != 4:
            raise ChartError("points need 4 components")
        self.point = point
        self.batch = point.shape[:-1]

        if chart.tetrad is not None:
            h, dh, ddh = _eval_grid(chart.tetrad, point)
            self.h, self.dh, self.ddh = h, dh, ddh
            self.hinv = np.linalg.inv(h)
            cond = np.linalg.cond(h)
            if np.any(~np.isfinite(cond)) or np.any(cond > TETRAD_COND_CEIL):
                raise ChartDomainError(
                    f"tetrad condition number exceeds {TETRAD_COND_CEIL:g} "
                    f"on chart '{chart.name}'")
            self.tetrad_condition = float(np.max(cond))
            # dhinv[lam] = -hinv dh[lam] hinv  (indices hinv[mu,a])
            self.dhinv = -np.einsum("...mb,...lbn,...na->...lma",
                                    self.hinv, dh, self.hinv)
        else:
            self.h = self.dh = self.ddh = self.hinv = self.dhinv = None
            self.tetrad_condition = None

        if chart.metric is not None:
            g, dg, ddg = _eval_grid(chart.metric, point)
        else:
            g, dg, ddg = self._metric_jets_from_tetrad()
        self.g, self.dg, self.ddg = g, dg, ddg

        det = np.linalg.det(g)
        if np.any(np.abs(det) < DET_FLOOR):
            raise ChartDomainError(f"|det g| below {DET_FLOOR:g} on chart '{chart.name}'")
        eigs = np.linalg.eigvalsh(g)
        plus = np.sum(eigs > 0, axis=-1)
        if np.any(plus != 1):
            raise ChartDomainError(
                f"metric signature is not (+,-,-,-) on chart '{chart.name}'")
        self.det_g = det
        self.ginv = np.linalg.inv(g)
        self.dginv = -np.einsum("...ma,...lab,...bn->...lmn", self.ginv, dg, self.ginv)
        self.sqrt_sig = np.sqrt(np.abs(det))
        # d_lam sqrt|det g| = (1/2) sqrt|det g| g^{mu nu} d_lam g_{mu nu}
        self.dsqrt_sig = 0.5 * self.sqrt_sig[..., None] * np.einsum(
            "...mn,...lmn->...l", self.ginv, dg)

        if chart.tetrad is not None and chart.metric is not None:
            defect = np.max(np.abs(np.einsum("ab,...am,...bn->...mn",
                                             MINKOWSKI_ETA, self.h, self.h) - g))
            if defect > 1e-10:
                raise ChartError(
                    f"declared metric and tetrad disagree (defect {defect:.3g})")

        if chart.connection is None:
            self.k = self.dk = None
            self.connection_kind = None
        elif isinstance(chart.connection, str):
            self.k, self.dk = self._levi_civita_with_grad()
            self.connection_kind = LEVI_CIVITA
        else:
            k, dk, _ = _eval_grid(chart.connection, point)
            self.k, self.dk = k, dk
            self.connection_kind = "declared"

        if chart.spinor is not None:
            # grid axes (A, re/im) stay last: vals[..., A, part]
            vals, grads, _ = _eval_grid(chart.spinor, point)
            self.psi = vals[..., 0] + 1j * vals[..., 1]
            self.dpsi = grads[..., 0] + 1j * grads[..., 1]
        else:
            self.psi = self.dpsi = None

        if chart.tau is not None:
            vals, grads, hesss = _eval_grid(chart.tau, point)
            self.tau = vals
            self.dtau = grads    # dtau[nu, al] = d_nu tau^al
            self.ddtau = hesss   # ddtau[mu, nu, al] = d_mu d_nu tau^al
        else:
            self.tau = self.dtau = self.ddtau = None

    # -- derived metric from tetrad ------------------------------------------

    def _metric_jets_from_tetrad(self):
        eta = np.diag(MINKOWSKI_ETA).copy()  # signs per tetrad row
        h, dh, ddh = self.h, self.dh, self.ddh
        g = np.einsum("a,...am,...an->...mn", eta, h, h)
        dg = np.einsum("a,...lam,...an->...lmn", eta, dh, h) \
            + np.einsum("a,...am,...lan->...lmn", eta, h, dh)
        ddg = (np.einsum("a,...lkam,...an->...lkmn", eta, ddh, h)
               + np.einsum("a,...lam,...kan->...lkmn", eta, dh, dh)
               + np.einsum("a,...kam,...lan->...lkmn", eta, dh, dh)
               + np.einsum("a,...am,...lkan->...lkmn", eta, h, ddh))
        return g, dg, ddg

    # -- Levi-Civita connection (stored-convention components) ---------------

    def christoffel_lowered(self):
        """{_{mu nu al}} = -1/2 (d_mu g_{nu al} + d_al g_{nu mu} - d_nu g_{mu al})."""
        dg = self.dg
        return -0.5 * (dg + np.einsum("...anm->...mna", dg)
                       - np.einsum("...nma->...mna", dg))

    def _christoffel_lowered_grad(self):
        ddg = self.ddg  # [rho, lam, mu, nu]
        return -0.5 * (ddg + np.einsum("...ranm->...rmna", ddg)
                       - np.einsum("...rnma->...rmna", ddg))

    def _levi_civita_with_grad(self):
        low = self.christoffel_lowered()
        dlow = self._christoffel_lowered_grad()
        k = np.einsum("...mb,...lbn->...lmn", self.ginv, low)
        dk = np.einsum("...rmb,...lbn->...rlmn", self.dginv, low) \
            + np.einsum("...mb,...rlbn->...rlmn", self.ginv, dlow)
        return k, dk

    def world_connection(self):
        """Declared connection, or the Levi-Civita fallback: (k, dk)."""
        if self.k is not None:
            return self.k, self.dk
        return self._levi_civita_with_grad()

    def require(self, **fields):
        for name, want in fields.items():
            if want and getattr(self, name, None) is None:
                raise ChartError(f"chart '{self.chart.name}' does not declare "
                                 f"the field needed for '{name}'")
