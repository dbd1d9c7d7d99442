"""Lorentz connection extraction in a tetrad gauge, the spin connection on
spinors, tetrad-dependent gamma representations of coframes, and the Dirac
operator evaluated on sampled spinor fields."""

from __future__ import annotations

import numpy as np

from .charts import MINKOWSKI_ETA, TensorValue
from .spin import dirac_gammas, lorentz_generators

__all__ = [
    "extract_lorentz_connection",
    "lorentz_world_connection",
    "gamma_of_coframe",
    "representation_inequivalence_check",
    "spin_connection",
    "dirac_operator",
]

_ETA_DIAG = np.diag(MINKOWSKI_ETA)
_GAMMAS = np.stack([np.asarray(g) for g in dirac_gammas().gen_images])
_GENERATORS = lorentz_generators(dirac_gammas())


def _frame_covariant_slope(jp, k=None):
    """D[lam, mu, k] = d_lam h^mu_k - h^nu_k Gamma_lam{}^mu{}_nu."""
    jp.require(h=True)
    if k is None:
        k, _ = jp.world_connection()
    return jp.dhinv - np.einsum("...nk,...lmn->...lmk", jp.hinv, k)


def extract_lorentz_connection(jp, k=None):
    """A_lam{}^{ab} = 1/2 (eta^{kb} h^a_mu - eta^{ka} h^b_mu)
    (d_lam h^mu_k - h^nu_k Gamma_lam{}^mu{}_nu); antisymmetric in (a, b)."""
    D = _frame_covariant_slope(jp, k)
    half = np.einsum("b,...am,...lmb->...lab", _ETA_DIAG, jp.h, D)
    A = 0.5 * (half - np.einsum("...lba->...lab", half))
    return TensorValue(A, ("d", "u", "u"), ("lam", "a", "b"))


def lorentz_world_connection(A, jp):
    """World components of the connection extended from a Lorentz-valued one:
    Gamma_lam{}^mu{}_nu = h^k_nu d_lam h^mu_k + eta_{ka} h^mu_b h^k_nu A_lam{}^{ab}.

    ``A`` is the (lam, a, b) component array (antisymmetric in a, b); the
    result is a metric connection for the tetrad metric.
    """
    A = A.components if isinstance(A, TensorValue) else np.asarray(A)
    jp.require(h=True)
    inhom = np.einsum("...kn,...lmk->...lmn", jp.h, jp.dhinv)
    gauge = np.einsum("a,...mb,...an,...lab->...lmn", _ETA_DIAG, jp.hinv, jp.h, A)
    return inhom + gauge


def gamma_of_coframe(jp, t):
    """Matrix of a covector in the tetrad-dependent gamma representation:
    t_mu h^mu_a gamma^a.  Satisfies the metric anticommutation relation."""
    jp.require(h=True)
    t = np.asarray(t, dtype=float)
    return np.einsum("...m,...ma,aij->...ij", t, jp.hinv, _GAMMAS)


def representation_inequivalence_check(jp1, jp2, t, tprime, tol=1e-8):
    """True when the products gamma_h(t) gamma_h(t') of the two tetrad
    representations differ in some entry by more than ``tol``."""
    p1 = gamma_of_coframe(jp1, t) @ gamma_of_coframe(jp1, tprime)
    p2 = gamma_of_coframe(jp2, t) @ gamma_of_coframe(jp2, tprime)
    return bool(np.max(np.abs(p1 - p2)) > tol)


def spin_connection(jp, k=None):
    """The four spinor-space matrices om_lam = 1/2 A_lam{}^{ab} I_ab (full
    double-count over a, b), with A extracted from the tetrad and world
    connection."""
    A = extract_lorentz_connection(jp, k).components
    return 0.5 * np.einsum("...lab,abij->...lij", A, _GENERATORS)


def dirac_operator(jp, psi=None, dpsi=None):
    """(D psi)^B = h^lam_a gamma^{aB}{}_A [d_lam psi^A - (om_lam)^A{}_C psi^C]
    evaluated pointwise on the sampled spinor field."""
    if psi is None:
        jp.require(psi=True)
        psi, dpsi = jp.psi, jp.dpsi
    om = spin_connection(jp)
    covariant = dpsi - np.einsum("...lac,...c->...la", om, psi)
    return np.einsum("...ma,aij,...mj->...i", jp.hinv, _GAMMAS, covariant)
