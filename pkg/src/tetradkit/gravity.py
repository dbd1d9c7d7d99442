"""Pointwise tensor calculus on a chart: connection decomposition, curvature,
field-equation residuals, space-time splitting, affine connections, and the
finite diffeomorphism-covariance check of the gravitational Lagrangian.

All formulas are written in the stored connection convention (see charts
module docstring): covariant derivatives read d - Gamma, the Levi-Civita
components are minus the textbook Christoffel symbols, and lowering the
connection is the plain contraction with the metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .charts import MINKOWSKI_ETA, Chart, ChartError, JetPoint, TensorValue
from .exprs import Expr

__all__ = [
    "metric_from_tetrad",
    "christoffel",
    "torsion",
    "lowered_connection",
    "nonmetricity",
    "contorsion",
    "decompose_connection",
    "recomposition_defect",
    "curvature",
    "curvature_jet_split",
    "ricci_and_scalar",
    "RicciResult",
    "he_lagrangian",
    "he_field_equations",
    "spacetime_split",
    "cartan_connection",
    "Diffeomorphism",
    "covariance_check",
]


def metric_from_tetrad(jp):
    """Metric and inverse induced by the tetrad: g_{mu nu} = eta_ab h^a_mu h^b_nu."""
    jp.require(h=True)
    eta = np.diag(MINKOWSKI_ETA)
    g = np.einsum("a,...am,...an->...mn", eta, jp.h, jp.h)
    ginv = np.linalg.inv(g)
    return (TensorValue(g, ("d", "d"), ("mu", "nu")),
            TensorValue(ginv, ("u", "u"), ("mu", "nu")))


def christoffel(jp):
    """Lowered Christoffel components (with the overall minus of the stored
    convention) and their mixed form obtained by plain index raising."""
    low = jp.christoffel_lowered()
    mixed = np.einsum("...mb,...lbn->...lmn", jp.ginv, low)
    return (TensorValue(low, ("d", "d", "d"), ("mu", "nu", "al")),
            TensorValue(mixed, ("d", "u", "d"), ("lam", "mu", "nu")))


def torsion(jp):
    """T_mu{}^nu{}_lam = Gamma_mu{}^nu{}_lam - Gamma_lam{}^nu{}_mu.

    Exactly antisymmetric in (mu, lam) entrywise.
    """
    k, _ = jp.world_connection()
    T = k - np.einsum("...lnm->...mnl", k)
    return TensorValue(T, ("d", "u", "d"), ("mu", "nu", "lam"))


def lowered_connection(jp, k=None):
    """G[mu,nu,al] = g_{nu b} Gamma_mu{}^b{}_al (plain lowering)."""
    if k is None:
        k, _ = jp.world_connection()
    return np.einsum("...nb,...mba->...mna", jp.g, k)


def nonmetricity(jp, k=None):
    """C_{mu nu al} = d_mu g_{nu al} + G_{mu nu al} + G_{mu al nu}.

    Symmetric in (nu, al) exactly; vanishes for metric connections.
    """
    G = lowered_connection(jp, k)
    raw = jp.dg + G + np.einsum("...man->...mna", G)
    C = 0.5 * (raw + np.einsum("...man->...mna", raw))
    return TensorValue(C, ("d", "d", "d"), ("mu", "nu", "al"))


def contorsion(jp):
    """S_{mu nu al} = 1/2 (T_{nu mu al} + T_{nu al mu} + T_{mu nu al}
    + C_{al nu mu} - C_{nu al mu}), antisymmetric in (nu, al)."""
    G = lowered_connection(jp)
    Tl = G - np.einsum("...anm->...mna", G)  # lowered torsion, antisym (mu, al)
    C = nonmetricity(jp).components
    raw = 0.5 * (np.einsum("...nma->...mna", Tl)
                 + np.einsum("...nam->...mna", Tl)
                 + Tl
                 + np.einsum("...anm->...mna", C)
                 - np.einsum("...nam->...mna", C))
    S = 0.5 * (raw - np.einsum("...man->...mna", raw))
    return TensorValue(S, ("d", "d", "d"), ("mu", "nu", "al"))


def decompose_connection(jp):
    """Split the lowered connection into Christoffel + contorsion + 1/2
    nonmetricity; the three parts recompose to G within round-off."""
    chr_low, _ = christoffel(jp)
    S = contorsion(jp)
    C = nonmetricity(jp)
    return chr_low, S, C


def recomposition_defect(jp):
    """max |G - ({} + S + C/2)| over components, for the round-trip check."""
    chr_low, S, C = decompose_connection(jp)
    G = lowered_connection(jp)
    recomposed = chr_low.components + S.components + 0.5 * C.components
    return float(np.max(np.abs(G - recomposed)))


def _curvature_half(k, dk):
    # dk[lam, mu, al, be] + Gamma_lam{}^ga{}_be Gamma_mu{}^al{}_ga
    return dk + np.einsum("...lcb,...mac->...lmab", k, k)


def curvature(jp):
    """R_{lam mu}{}^al{}_be = d_lam Gamma_mu{}^al{}_be - d_mu Gamma_lam{}^al{}_be
    + Gamma_lam{}^ga{}_be Gamma_mu{}^al{}_ga - Gamma_mu{}^ga{}_be Gamma_lam{}^al{}_ga.

    Built antisymmetrized in (lam, mu), so the antisymmetry is exact.
    """
    k, dk = jp.world_connection()
    B = _curvature_half(k, dk)
    R = B - np.einsum("...mlab->...lmab", B)
    return TensorValue(R, ("d", "d", "u", "d"), ("lam", "mu", "al", "be"))


def curvature_jet_split(jp):
    """Both halves of the jet splitting of the connection derivative: the
    curvature (antisymmetric in the first pair) and its symmetric complement
    d_lam k_mu + d_mu k_lam - (kk - kk)."""
    k, dk = jp.world_connection()
    B = _curvature_half(k, dk)
    R = B - np.einsum("...mlab->...lmab", B)
    quad = np.einsum("...lcb,...mac->...lmab", k, k)
    S = (dk + np.einsum("...mlab->...lmab", dk)
         - quad + np.einsum("...mlab->...lmab", quad))
    return (TensorValue(R, ("d", "d", "u", "d")), TensorValue(S, ("d", "d", "u", "d")))


class RicciResult(NamedTuple):
    rc: TensorValue       # half-normalized contraction
    ricci: TensorValue    # plain contraction R_{lam mu}{}^lam{}_be
    scalar: np.ndarray


def ricci_and_scalar(jp):
    """Ricci contraction in both normalizations and the curvature scalar
    entering the gravitational Lagrangian (no half factor)."""
    R = curvature(jp).components
    ricci = np.einsum("...lmlb->...mb", R)
    scalar = np.einsum("...mb,...mb->...", jp.ginv, ricci)
    return RicciResult(rc=TensorValue(0.5 * ricci, ("d", "d"), ("mu", "be")),
                       ricci=TensorValue(ricci, ("d", "d"), ("mu", "be")),
                       scalar=scalar)


def he_lagrangian(jp):
    """Scalar density sigma^{mu be} R_{lam mu}{}^lam{}_be sqrt|det g|."""
    res = ricci_and_scalar(jp)
    return res.scalar * jp.sqrt_sig


def he_field_equations(jp):
    """Residuals of the metric and connection field equations.

    E_{al be} = Ricci_{al be} - (1/2) g_{al be} * scalar
    E^nu{}_al{}^be = -d_al(g^{nu be} s) + d_lam(g^{lam be} s) delta^nu_al
        + (g^{nu ga} k_al{}^be{}_ga - g^{lam ga} delta^nu_al k_lam{}^be{}_ga
           - g^{nu be} k_ga{}^ga{}_al + g^{lam be} k_lam{}^nu{}_al) s,
    with s = sqrt|det g|.  Both vanish for a vacuum solution with its
    Levi-Civita connection.
    """
    res = ricci_and_scalar(jp)
    E1 = res.ricci.components - 0.5 * jp.g * res.scalar[..., None, None]

    k, _ = jp.world_connection()
    s = jp.sqrt_sig
    # d_al (g^{nu be} s) = dginv[al, nu, be] s + g^{nu be} ds[al]
    d_gs = jp.dginv * s[..., None, None, None] \
        + jp.ginv[..., None, :, :] * jp.dsqrt_sig[..., :, None, None]
    delta = np.eye(4)
    term1 = -np.einsum("...anb->...nab", d_gs)
    div = np.einsum("...llb->...b", d_gs)  # d_lam(g^{lam be} s)
    term2 = np.einsum("...b,na->...nab", div, delta)
    kterms = (np.einsum("...nc,...abc->...nab", jp.ginv, k)
              - np.einsum("...lc,na,...lbc->...nab", jp.ginv, delta, k)
              - np.einsum("...nb,...cca->...nab", jp.ginv, k)
              + np.einsum("...lb,...lna->...nab", jp.ginv, k))
    E2 = term1 + term2 + kterms * s[..., None, None, None]
    return (TensorValue(E1, ("d", "d"), ("al", "be")),
            TensorValue(E2, ("u", "d", "u"), ("nu", "al", "be")))


def spacetime_split(jp):
    """Time-like coframe/frame components and the Riemannian metric of the
    space-time splitting: g = 2 h^0 (x) h^0 - gR with gR = sum_a h^a (x) h^a."""
    jp.require(h=True)
    h0 = jp.h[..., 0, :]
    h_0 = jp.hinv[..., :, 0]
    gR = np.einsum("...am,...an->...mn", jp.h, jp.h)
    eigs = np.linalg.eigvalsh(gR)
    if np.any(eigs <= 0):
        raise ChartError("split metric is not positive definite (bad tetrad)")
    return (TensorValue(h0, ("d",), ("lam",)),
            TensorValue(h_0, ("u",), ("mu",)),
            TensorValue(gR, ("d", "d"), ("mu", "nu")))


def cartan_connection(jp, xdot, soldering=None):
    """Affine connection value A_lam^mu = Gamma_lam{}^mu{}_nu xdot^nu + sol_lam^mu.

    The canonical soldering (identity) gives the Cartan case; a user-supplied
    (1,1) tensor is passed as ``soldering[lam, mu]`` = sol_lam^mu.
    """
    k, _ = jp.world_connection()
    xdot = np.asarray(xdot, dtype=float)
    linear = np.einsum("...lmn,...n->...lm", k, xdot)
    sol = np.eye(4) if soldering is None else np.asarray(soldering, dtype=float)
    return TensorValue(linear + sol, ("d", "u"), ("lam", "mu"))


# ---------------------------------------------------------------------------
# Finite covariance check of the gravitational Lagrangian density
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diffeomorphism:
    """Coordinate map given by four Exprs, with an optional declared inverse
    used only for a sanity roundtrip (the transformation laws use the exact
    jets of the forward map)."""

    forward: tuple
    inverse: tuple = None

    def __post_init__(self):
        if len(self.forward) != 4:
            raise ChartError("diffeomorphism needs 4 component expressions")
        if self.inverse is not None and len(self.inverse) != 4:
            raise ChartError("declared inverse needs 4 component expressions")

    def jets(self, point):
        """x' = phi(x), Jacobian J^a_b, Hessian H^a_{bc}, third T^a_{dbc}."""
        point = np.asarray(point, dtype=float)
        xp = np.empty(point.shape)
        J = np.empty(point.shape[:-1] + (4, 4))
        H = np.empty(point.shape[:-1] + (4, 4, 4))
        T = np.empty(point.shape[:-1] + (4, 4, 4, 4))
        for a, expr in enumerate(self.forward):
            jet = expr.jet(point)
            xp[..., a] = jet.value
            J[..., a, :] = jet.grad
            H[..., a, :, :] = jet.hess
            for d in range(4):
                T[..., a, d, :, :] = expr.derivative(d).jet(point).hess
        return xp, J, H, T


def covariance_check(chart, diffeo, point, details=False):
    """|L'(x') det J - L(x)| for the gravitational scalar density under the
    finite coordinate transformation induced by ``diffeo``.

    The metric is pushed forward as a (2,0) tensor; the connection picks up
    the inhomogeneous second-derivative term.  All derivatives of the inverse
    map are reconstructed exactly from the forward map's jets (including the
    symbolic third derivatives), so the residual is round-off only.
    """
    jp = chart.jet_at(point)
    jp.require(g=True)
    k, dk = jp.world_connection()
    L0 = he_lagrangian(jp)

    xp, J, H, T = diffeo.jets(point)
    detJ = np.linalg.det(J)
    if np.any(np.abs(detJ) < 1e-10):
        raise ChartError("diffeomorphism Jacobian is singular at the point")
    K = np.linalg.inv(J)

    if diffeo.inverse is not None:
        back = np.stack([e.value(xp) for e in diffeo.inverse], axis=-1)
        if np.max(np.abs(back - np.asarray(point, dtype=float))) > 0.1:
            raise ChartError("declared inverse does not invert the map near the point")

    # derivatives of the inverse map psi at x':
    #   W^n_{mb} = dd psi = -K H K K,   V^n_{lmb} = ddd psi
    W = -np.einsum("...na,...abc,...bm,...cq->...nmq", K, H, K, K)
    V = -(np.einsum("...nla,...abc,...bm,...cq->...nlmq", W, H, K, K)
          + np.einsum("...na,...adbc,...dl,...bm,...cq->...nlmq", K, T, K, K, K)
          + np.einsum("...na,...abc,...blm,...cq->...nlmq", K, H, W, K)
          + np.einsum("...na,...abc,...bm,...clq->...nlmq", K, H, K, W))

    # transformed connection at x':  k' = K K J k - J W
    kp = np.einsum("...rm,...sb,...an,...rns->...mab", K, K, J, k) \
        - np.einsum("...an,...nmb->...mab", J, W)

    # d'_lam k'_mu{}^al{}_be via the chain rule through psi:
    # d'_lam of K, J(psi), k(psi) are W^._{lam .}, H K, (d k) K respectively
    dJ_chain = np.einsum("...anb,...bl->...lan", H, K)   # d'_lam J^a_n
    dk_chain = np.einsum("...brns,...bl->...lrns", dk, K)
    t1 = np.einsum("...rlm,...sb,...an,...rns->...lmab", W, K, J, k)
    t2 = np.einsum("...rm,...slb,...an,...rns->...lmab", K, W, J, k)
    t3 = np.einsum("...rm,...sb,...lan,...rns->...lmab", K, K, dJ_chain, k)
    t4 = np.einsum("...rm,...sb,...an,...lrns->...lmab", K, K, J, dk_chain)
    t5 = -np.einsum("...lan,...nmb->...lmab", dJ_chain, W)
    t6 = -np.einsum("...an,...nlmb->...lmab", J, V)
    dkp = t1 + t2 + t3 + t4 + t5 + t6

    # transformed inverse metric and density factor
    ginvp = np.einsum("...am,...bn,...mn->...ab", J, J, jp.ginv)
    detp = np.linalg.det(ginvp)
    sqrtp = 1.0 / np.sqrt(np.abs(detp))

    Bp = _curvature_half(kp, dkp)
    Rp = Bp - np.einsum("...mlab->...lmab", Bp)
    ricp = np.einsum("...lmlb->...mb", Rp)
    Lp = np.einsum("...mb,...mb->...", ginvp, ricp) * sqrtp

    residual = np.abs(Lp * np.abs(detJ) - L0)
    out = float(np.max(residual))
    if details:
        sqrt0 = jp.sqrt_sig
        density_defect = float(np.max(np.abs(sqrtp * np.abs(detJ) - sqrt0)))
        return out, {"lagrangian_original": L0, "lagrangian_transformed": Lp,
                     "det_jacobian": detJ, "density_defect": density_defect}
    return out
