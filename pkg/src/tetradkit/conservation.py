"""Lagrangian momenta, the energy-momentum current, and the generalized Komar
superpotential of the gravitational Lagrangian, with flux quadrature.

The Lagrangian is the curvature-scalar density L = g^{mu be} R_{lam mu}{}^lam{}_be
sqrt|det g| as a polynomial in the connection components k and their first
derivatives dk (the metric enters algebraically, never through derivatives).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import TensorValue

__all__ = [
    "MomentaValue",
    "SuperpotentialValue",
    "lagrangian_density",
    "he_momenta",
    "dlag_dk",
    "connection_torsion",
    "komar_superpotential",
    "classical_komar",
    "em_current",
    "flux_integral",
    "superpotential_divergence_fd",
]


def lagrangian_density(ginv, sqrt_sig, k, dk):
    """Scalar density value from raw field data (perturbable, for oracles)."""
    B = dk + np.einsum("...lcb,...mac->...lmab", k, k)
    R = B - np.einsum("...mlab->...lmab", B)
    ric = np.einsum("...lmlb->...mb", R)
    return np.einsum("...mb,...mb->...", ginv, ric) * sqrt_sig


@dataclass(frozen=True)
class MomentaValue:
    """pi^{lam nu}{}_al{}^be = dL/d(dk[lam, nu, al, be]); antisymmetric in
    (lam, nu)."""

    pi: np.ndarray

    def antisymmetry_defect(self):
        return float(np.max(np.abs(self.pi + np.einsum("...nlab->...lnab", self.pi))))


def he_momenta(jp):
    """Closed-form momenta of the curvature-scalar density:
    pi^{lam nu}{}_al{}^be = sqrt|g| (g^{nu be} delta^lam_al - g^{lam be} delta^nu_al)."""
    delta = np.eye(4)
    pi = jp.sqrt_sig[..., None, None, None, None] * (
        np.einsum("...nb,la->...lnab", jp.ginv, delta)
        - np.einsum("...lb,na->...lnab", jp.ginv, delta))
    return MomentaValue(pi=pi)


def dlag_dk(jp):
    """dL/dk_nu{}^al{}_be through the momenta:
    pi^{lam nu}{}_al{}^si k_lam{}^be{}_si - pi^{lam nu}{}_si{}^be k_lam{}^si{}_al."""
    pi = he_momenta(jp).pi
    k, _ = jp.world_connection()
    return (np.einsum("...lnas,...lbs->...nab", pi, k)
            - np.einsum("...lnsb,...lsa->...nab", pi, k))


def connection_torsion(jp):
    """t_nu{}^al{}_si = k_nu{}^al{}_si - k_si{}^al{}_nu."""
    k, _ = jp.world_connection()
    return k - np.einsum("...san->...nas", k)


@dataclass(frozen=True)
class SuperpotentialValue:
    """Antisymmetric two-index density U^{mu lam}."""

    U: np.ndarray
    raw_antisymmetry_defect: float

    def antisymmetry_defect(self):
        return float(np.max(np.abs(self.U + np.einsum("...lm->...ml", self.U))))


def komar_superpotential(jp, tau=None, dtau=None):
    """U^{mu lam} = pi^{mu lam}{}_al{}^nu (D_nu tau^al + t_nu{}^al{}_si tau^si)
    with the covariant derivative D_nu tau^al = d_nu tau^al - k_nu{}^al{}_si tau^si
    of the stored-convention connection.  The combination collapses to
    d_nu tau^al - k_si{}^al{}_nu tau^si."""
    if tau is None:
        jp.require(tau=True)
        tau, dtau = jp.tau, jp.dtau
    pi = he_momenta(jp).pi
    k, _ = jp.world_connection()
    bracket = dtau - np.einsum("...san,...s->...na", k, tau)
    raw = np.einsum("...mlan,...na->...ml", pi, bracket)
    defect = float(np.max(np.abs(raw + np.einsum("...lm->...ml", raw))))
    U = 0.5 * (raw - np.einsum("...lm->...ml", raw))
    return SuperpotentialValue(U=U, raw_antisymmetry_defect=defect)


def classical_komar(jp, tau=None, dtau=None):
    """Independent oracle: sqrt|g| (grad^lam tau^mu - grad^mu tau^lam) with the
    textbook covariant derivative of the metric's own Christoffel symbols,
    computed directly from the metric jets."""
    if tau is None:
        jp.require(tau=True)
        tau, dtau = jp.tau, jp.dtau
    # textbook Christoffel of the second kind (plus convention)
    first_kind = 0.5 * (jp.dg + np.einsum("...anm->...mna", jp.dg)
                        - np.einsum("...nma->...mna", jp.dg))
    gamma_std = np.einsum("...ab,...mbn->...man", jp.ginv, first_kind)
    grad = dtau + np.einsum("...ans,...s->...na", gamma_std, tau)
    up = np.einsum("...ln,...na->...la", jp.ginv, grad)
    return jp.sqrt_sig[..., None, None] * (up - np.einsum("...la->...al", up))


def em_current(jp, tau=None, dtau=None, ddtau=None):
    """Energy-momentum current of the gravitational density:

    J^lam = pi^{lam mu}{}_a{}^b [ d_al k_mu{}^a{}_b tau^al
            - (k_mu{}^eps{}_b delta^a_ga - k_mu{}^a{}_ga delta^eps_b
               - k_ga{}^a{}_b delta^eps_mu) d_eps tau^ga
            - dd_{mu b} tau^a ] - tau^lam L.
    """
    if tau is None:
        jp.require(tau=True)
        tau, dtau, ddtau = jp.tau, jp.dtau, jp.ddtau
    pi = he_momenta(jp).pi
    k, dk = jp.world_connection()
    L = lagrangian_density(jp.ginv, jp.sqrt_sig, k, dk)

    term1 = np.einsum("...lmab,...emab,...e->...l", pi, dk, tau)
    u1 = np.einsum("...lmab,...meb,...ea->...l", pi, k, dtau)
    u2 = -np.einsum("...lmab,...mag,...bg->...l", pi, k, dtau)
    u3 = -np.einsum("...lmab,...gab,...mg->...l", pi, k, dtau)
    term2 = -(u1 + u2 + u3)
    term3 = -np.einsum("...lmab,...mba->...l", pi, ddtau)
    return term1 + term2 + term3 - tau * L[..., None]


def flux_integral(chart, radius, nodes=64, time=0.0, component=(1, 0)):
    """Quadrature of a superpotential component over the coordinate sphere at
    fixed time and radius, for spherical-type charts ordered
    (time, radius, polar, azimuth).

    Gauss-Legendre nodes in both angles keep evaluation away from the
    coordinate poles.  Returns the integral over polar in (0, pi),
    azimuth in (0, 2 pi).
    """
    x_t, w_t = np.polynomial.legendre.leggauss(nodes)
    theta = 0.5 * np.pi * (x_t + 1.0)
    w_theta = 0.5 * np.pi * w_t
    phi = np.pi * (x_t + 1.0)
    w_phi = np.pi * w_t
    TH, PH = np.meshgrid(theta, phi, indexing="ij")
    pts = np.stack([np.full(TH.shape, time), np.full(TH.shape, radius), TH, PH],
                   axis=-1)
    jp = chart.jet_at(pts)
    U = komar_superpotential(jp).U
    mu, lam = component
    return float(np.einsum("i,j,ij->", w_theta, w_phi, U[..., mu, lam]))


def superpotential_divergence_fd(chart, point, step=1e-4):
    """d_mu U^{mu lam} by central finite differences across chart points."""
    point = np.asarray(point, dtype=float)
    div = np.zeros(4)
    for mu in range(4):
        xp, xm = point.copy(), point.copy()
        xp[mu] += step
        xm[mu] -= step
        Up = komar_superpotential(chart.jet_at(xp)).U
        Um = komar_superpotential(chart.jet_at(xm)).U
        div += (Up[mu] - Um[mu]) / (2 * step)
    return div
