"""Standard analytic charts used by the verification suites and tests.

Every chart here is defined as chart-file text and parsed through the file
format, so the corpus doubles as a parser fixture set.  Sampling windows for
curved charts avoid horizons and coordinate poles.
"""

from __future__ import annotations

import numpy as np

from .chartfile import parse_chart_text

__all__ = [
    "chart_text",
    "load",
    "corpus_names",
    "sample_points",
    "random_polynomial_metric_text",
    "random_polynomial_tetrad_text",
    "plane_wave_spinor_entries",
    "flat_tetrad_plane_wave_text",
]

MINKOWSKI = """\
[chart]
name = minkowski
coords = x0, x1, x2, x3

[metric]
g 0 0 = 1
g 1 1 = -1
g 2 2 = -1
g 3 3 = -1

[connection]
levi-civita
"""

SCHWARZSCHILD = """\
[chart]
name = schwarzschild
coords = x0, x1, x2, x3
rs = 1.0

[metric]
g 0 0 = 1 - rs/x1
g 1 1 = -1/(1 - rs/x1)
g 2 2 = -x1^2
g 3 3 = -x1^2*sin(x2)^2

[connection]
levi-civita

[tau]
tau 0 = 1
"""

SCHWARZSCHILD_TETRAD = """\
[chart]
name = schwarzschild-tetrad
coords = x0, x1, x2, x3
rs = 1.0

[tetrad]
h 0 0 = sqrt(1 - rs/x1)
h 1 1 = 1/sqrt(1 - rs/x1)
h 2 2 = x1
h 3 3 = x1*sin(x2)

[connection]
levi-civita
"""

DE_SITTER = """\
[chart]
name = de-sitter
coords = x0, x1, x2, x3
H = 0.5

[metric]
g 0 0 = 1
g 1 1 = -exp(2*H*x0)
g 2 2 = -exp(2*H*x0)
g 3 3 = -exp(2*H*x0)

[connection]
levi-civita
"""

CONFORMAL = """\
[chart]
name = conformally-flat
coords = x0, x1, x2, x3

[metric]
g 0 0 = exp(0.2*x1)
g 1 1 = -exp(0.2*x1)
g 2 2 = -exp(0.2*x1)
g 3 3 = -exp(0.2*x1)

[connection]
levi-civita
"""

_BUILTIN = {
    "minkowski": MINKOWSKI,
    "schwarzschild": SCHWARZSCHILD,
    "schwarzschild-tetrad": SCHWARZSCHILD_TETRAD,
    "de-sitter": DE_SITTER,
    "conformally-flat": CONFORMAL,
}


def corpus_names():
    return tuple(_BUILTIN) + ("perturbed-eta",)


def chart_text(name, seed=0):
    if name in _BUILTIN:
        return _BUILTIN[name]
    if name == "perturbed-eta":
        return random_polynomial_metric_text(seed=seed)
    raise KeyError(name)


def load(name, seed=0):
    return parse_chart_text(chart_text(name, seed=seed), filename=f"<corpus:{name}>")


def _poly2(rng, coords, scale):
    terms = [f"{float(rng.uniform(-scale, scale))!r}"]
    for i, c in enumerate(coords):
        terms.append(f"{float(rng.uniform(-scale, scale))!r}*{c}")
        for j in range(i, len(coords)):
            terms.append(f"{float(rng.uniform(-scale, scale))!r}*{c}*{coords[j]}")
    return " + ".join(terms)


def random_polynomial_metric_text(seed=0, scale=1e-2):
    """Minkowski plus a random degree-2 polynomial perturbation."""
    rng = np.random.default_rng(seed)
    coords = ("x0", "x1", "x2", "x3")
    eta = (1.0, -1.0, -1.0, -1.0)
    lines = ["[chart]", f"name = perturbed-eta-{seed}", "coords = x0, x1, x2, x3",
             "", "[metric]"]
    for i in range(4):
        for j in range(i, 4):
            base = f"{eta[i]!r} + " if i == j else ""
            lines.append(f"g {i} {j} = {base}{_poly2(rng, coords, scale)}")
    lines += ["", "[connection]", "levi-civita"]
    return "\n".join(lines) + "\n"


def random_polynomial_tetrad_text(seed=0, scale=1e-2):
    """Identity tetrad plus a random degree-2 polynomial perturbation."""
    rng = np.random.default_rng(seed)
    coords = ("x0", "x1", "x2", "x3")
    lines = ["[chart]", f"name = perturbed-tetrad-{seed}", "coords = x0, x1, x2, x3",
             "", "[tetrad]"]
    for a in range(4):
        for mu in range(4):
            base = "1 + " if a == mu else ""
            lines.append(f"h {a} {mu} = {base}{_poly2(rng, coords, scale)}")
    lines += ["", "[connection]", "levi-civita"]
    return "\n".join(lines) + "\n"


def plane_wave_spinor_entries(wave_covector, amplitudes):
    """Spinor section lines 'psi A re/im = ...' for psi^A = c^A exp(-i k.x)
    with k.x = sum_mu k_mu x^mu (all indices down)."""
    k = [float(v) for v in wave_covector]
    phase = f"-({k[0]!r}*x0 + {k[1]!r}*x1 + {k[2]!r}*x2 + {k[3]!r}*x3)"
    lines = []
    for a, amp in enumerate(amplitudes):
        re, im = float(np.real(amp)), float(np.imag(amp))
        lines.append(f"psi {a} re = {re!r}*cos({phase}) - {im!r}*sin({phase})")
        lines.append(f"psi {a} im = {re!r}*sin({phase}) + {im!r}*cos({phase})")
    return lines


def flat_tetrad_plane_wave_text(wave_covector, amplitudes):
    """Identity-tetrad chart with a plane-wave spinor and zero connection."""
    lines = ["[chart]", "name = flat-plane-wave", "coords = x0, x1, x2, x3",
             "", "[tetrad]"]
    lines += [f"h {a} {a} = 1" for a in range(4)]
    lines += ["", "[spinor]"]
    lines += plane_wave_spinor_entries(wave_covector, amplitudes)
    return "\n".join(lines) + "\n"


def sample_points(name, count=20, seed=0):
    """In-domain sample points for a corpus chart."""
    rng = np.random.default_rng(seed + 101)
    if name in ("schwarzschild", "schwarzschild-tetrad"):
        rs = 1.0
        pts = np.stack([rng.uniform(0.0, 10.0, count),
                        rng.uniform(2.5 * rs, 10.0 * rs, count),
                        rng.uniform(0.3, 2.8, count),
                        rng.uniform(0.0, 2 * np.pi, count)], axis=-1)
    elif name == "de-sitter":
        pts = np.stack([rng.uniform(-1.0, 1.0, count),
                        rng.uniform(-2.0, 2.0, count),
                        rng.uniform(-2.0, 2.0, count),
                        rng.uniform(-2.0, 2.0, count)], axis=-1)
    else:
        pts = rng.uniform(-1.5, 1.5, size=(count, 4))
    return pts
