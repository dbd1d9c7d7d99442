"""The chart-definition file format.

Sectioned UTF-8 text. Sections and their entry syntax::

    [chart]                 name = <text>
                            coords = c0, c1, c2, c3
                            <const> = <number>          (any other key)
    [metric]                g mu nu = <expr>            (symmetric completion)
    [tetrad]                h a mu = <expr>
    [connection]            Gamma lam mu nu = <expr>    (absent entries are 0)
                            levi-civita                 (keyword replaces all)
    [spinor]                psi A re = <expr> / psi A im = <expr>
    [tau]                   tau mu = <expr>

At most one of [metric]/[tetrad] may be omitted; indices run 0..3; duplicate
keys and unknown section names are errors.  '#' starts a comment.
"""

from __future__ import annotations

import numpy as np

from .charts import LEVI_CIVITA, Chart
from .exprs import ExprError, parse_expr

__all__ = ["ChartFileError", "parse_chart_text", "load_chart"]

KNOWN_SECTIONS = ("chart", "metric", "tetrad", "connection", "spinor", "tau")


class ChartFileError(ValueError):
    def __init__(self, message, filename="<string>", line=None, section=None):
        where = filename
        if section is not None:
            where += f" [{section}]"
        if line is not None:
            where += f" line {line}"
        super().__init__(f"{where}: {message}")
        self.filename = filename
        self.line = line
        self.section = section


def _parse_index(tok, filename, line, section):
    try:
        v = int(tok)
    except ValueError:
        raise ChartFileError(f"index '{tok}' is not an integer",
                             filename, line, section) from None
    if not 0 <= v <= 3:
        raise ChartFileError(f"index {v} out of range 0..3", filename, line, section)
    return v


def parse_chart_text(text, filename="<string>"):
    """Parse chart-file text into a Chart."""
    section = None
    name = None
    coords = None
    constants = {}
    entries = {"metric": {}, "tetrad": {}, "connection": {}, "spinor": {}, "tau": {}}
    levi_civita = False
    section_seen = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ChartFileError("malformed section header", filename, lineno)
            sec = line[1:-1].strip().lower()
            if sec not in KNOWN_SECTIONS:
                raise ChartFileError(f"unknown section '{sec}'", filename, lineno)
            if sec in section_seen:
                raise ChartFileError(f"duplicate section '{sec}'", filename, lineno)
            section_seen.add(sec)
            section = sec
            continue
        if section is None:
            raise ChartFileError("content before the first section", filename, lineno)

        if section == "connection" and line.lower() == LEVI_CIVITA:
            if entries["connection"]:
                raise ChartFileError("levi-civita keyword conflicts with explicit "
                                     "entries", filename, lineno, section)
            levi_civita = True
            continue

        if "=" not in line:
            raise ChartFileError("expected 'key = value'", filename, lineno, section)
        key, value = (part.strip() for part in line.split("=", 1))
        if not value:
            raise ChartFileError(f"empty value for '{key}'", filename, lineno, section)

        if section == "chart":
            if key == "name":
                name = value
            elif key == "coords":
                coords = tuple(c.strip() for c in value.split(","))
                if len(coords) != 4 or any(not c for c in coords):
                    raise ChartFileError("coords needs exactly 4 comma-separated names",
                                         filename, lineno, section)
            else:
                if key in constants:
                    raise ChartFileError(f"duplicate constant '{key}'",
                                         filename, lineno, section)
                try:
                    constants[key] = float(value)
                except ValueError:
                    raise ChartFileError(f"constant '{key}' is not a number",
                                         filename, lineno, section) from None
            continue

        toks = key.split()
        if section == "metric":
            if len(toks) != 3 or toks[0] != "g":
                raise ChartFileError("expected 'g mu nu = <expr>'",
                                     filename, lineno, section)
            mu, nu = (_parse_index(t, filename, lineno, section) for t in toks[1:])
            slot = (min(mu, nu), max(mu, nu))
            if slot in entries["metric"]:
                raise ChartFileError(f"duplicate metric entry g {mu} {nu}",
                                     filename, lineno, section)
            entries["metric"][slot] = (value, lineno)
        elif section == "tetrad":
            if len(toks) != 3 or toks[0] != "h":
                raise ChartFileError("expected 'h a mu = <expr>'",
                                     filename, lineno, section)
            a, mu = (_parse_index(t, filename, lineno, section) for t in toks[1:])
            if (a, mu) in entries["tetrad"]:
                raise ChartFileError(f"duplicate tetrad entry h {a} {mu}",
                                     filename, lineno, section)
            entries["tetrad"][(a, mu)] = (value, lineno)
        elif section == "connection":
            if levi_civita:
                raise ChartFileError("explicit entry after levi-civita keyword",
                                     filename, lineno, section)
            if len(toks) != 4 or toks[0] != "Gamma":
                raise ChartFileError("expected 'Gamma lam mu nu = <expr>'",
                                     filename, lineno, section)
            lam, mu, nu = (_parse_index(t, filename, lineno, section) for t in toks[1:])
            if (lam, mu, nu) in entries["connection"]:
                raise ChartFileError(f"duplicate connection entry Gamma {lam} {mu} {nu}",
                                     filename, lineno, section)
            entries["connection"][(lam, mu, nu)] = (value, lineno)
        elif section == "spinor":
            if len(toks) != 3 or toks[0] != "psi" or toks[2] not in ("re", "im"):
                raise ChartFileError("expected 'psi A re = <expr>' or 'psi A im = <expr>'",
                                     filename, lineno, section)
            a = _parse_index(toks[1], filename, lineno, section)
            part = 0 if toks[2] == "re" else 1
            if (a, part) in entries["spinor"]:
                raise ChartFileError(f"duplicate spinor entry psi {a} {toks[2]}",
                                     filename, lineno, section)
            entries["spinor"][(a, part)] = (value, lineno)
        elif section == "tau":
            if len(toks) != 2 or toks[0] != "tau":
                raise ChartFileError("expected 'tau mu = <expr>'",
                                     filename, lineno, section)
            mu = _parse_index(toks[1], filename, lineno, section)
            if (mu,) in entries["tau"]:
                raise ChartFileError(f"duplicate tau entry tau {mu}",
                                     filename, lineno, section)
            entries["tau"][(mu,)] = (value, lineno)

    if "chart" not in section_seen:
        raise ChartFileError("missing [chart] section", filename)
    if coords is None:
        raise ChartFileError("missing 'coords' in [chart]", filename, section="chart")
    if name is None:
        name = filename
    if "metric" not in section_seen and "tetrad" not in section_seen:
        raise ChartFileError("need at least one of [metric] or [tetrad]", filename)

    def build(section_name, shape, default="0"):
        if section_name not in section_seen:
            return None
        grid = np.full(shape, default, dtype=object)
        for idx, (value, lineno) in entries[section_name].items():
            try:
                expr = parse_expr(value, coords, constants)
            except ExprError as err:
                raise ChartFileError(str(err), filename, lineno, section_name) from None
            grid[idx] = expr
            if section_name == "metric":
                i, j = idx
                grid[j, i] = expr
        # parse the defaults too, so the grid is uniform Expr
        for idx in np.ndindex(shape):
            if isinstance(grid[idx], str):
                grid[idx] = parse_expr(grid[idx], coords, constants)
        return grid

    metric = build("metric", (4, 4))
    tetrad = build("tetrad", (4, 4))
    if levi_civita:
        connection = LEVI_CIVITA
    else:
        connection = build("connection", (4, 4, 4))
    spinor = build("spinor", (4, 2))
    tau = build("tau", (4,))

    return Chart(name=name, coords=coords, constants=constants, metric=metric,
                 tetrad=tetrad, connection=connection, spinor=spinor, tau=tau)


def load_chart(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_chart_text(text, filename=str(path))
