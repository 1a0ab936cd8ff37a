"""Lattice files, the builtin lattice registry, and sweep CSV output."""

import json
import math
import os
import re
from fractions import Fraction

import numpy as np

from .lattice import Lattice
from .matrix_core import as_int_matrix
from .projection import project


class ParseError(ValueError):
    """Unreadable lattice file or unknown builtin name."""


HEX_GENERATOR = np.array([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])


def an_star(n):
    """``A_n*`` as the projection of ``Z^{n+1}`` onto ``(1, ..., 1)^perp``.

    The result is ``n``-dimensional with ambient dimension ``n + 1``.
    """
    if n < 1:
        raise ValueError("A_n* needs n >= 1")
    Z = Lattice(np.eye(n + 1))
    U = np.hstack([np.zeros((n, 1), dtype=int), np.eye(n, dtype=int)])
    return project(Z, np.ones((1, n + 1)), U=as_int_matrix(U)).projected


def d_n(n):
    """Checkerboard lattice ``D_n`` (integer vectors with even coordinate sum)."""
    if n < 2:
        raise ValueError("D_n needs n >= 2")
    G = np.zeros((n, n))
    G[0, :2] = [-1, -1]
    for i in range(1, n):
        G[i, i - 1], G[i, i] = 1, -1
    return Lattice(G)


def _positive_int(s, what):
    try:
        v = int(s)
    except ValueError:
        raise ParseError(f"bad {what} {s!r}") from None
    if v < 1:
        raise ParseError(f"{what} must be positive")
    return v


def builtin_lattice(spec):
    """Lattice for a registry name: ``Zn:<n>``, ``rect:<c1,...>``, ``hex``,
    ``An*:<n>`` or ``Dn:<n>``."""
    name, _, arg = spec.partition(":")
    try:
        if name == "Zn":
            return Lattice(np.eye(_positive_int(arg, "dimension")))
        if name == "rect":
            c = [float(x) for x in arg.split(",") if x.strip()]
            if not c or any(x <= 0 or not math.isfinite(x) for x in c):
                raise ParseError("rect scales must be positive numbers")
            return Lattice(np.diag(c))
        if name == "hex" and not arg:
            return Lattice(HEX_GENERATOR)
        if name == "An*":
            return an_star(_positive_int(arg, "dimension"))
        if name == "Dn":
            return d_n(_positive_int(arg, "dimension"))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown lattice {spec!r}")


_BUILTIN_RE = re.compile(r"^(Zn:|rect:|hex$|An\*:|Dn:)")


def load_lattice_file(path):
    """Read a lattice JSON file; returns ``(name, Lattice)``.

    Optional ``exact`` rows of ``"p/q"`` strings take precedence over the
    decimal ``generator`` and must agree with it.
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict) or "generator" not in data:
        raise ParseError(f"{path}: missing 'generator'")
    rows = data["generator"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{path}: generator must be a list of rows")
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"{path}: generator rows have different lengths")
    try:
        G = np.array(rows, dtype=float)
        if "exact" in data:
            E = np.array([[float(Fraction(x)) for x in r] for r in data["exact"]])
            if E.shape != G.shape or not np.allclose(E, G, rtol=1e-12, atol=1e-12):
                raise ParseError(f"{path}: exact and generator disagree")
            G = E
        L = Lattice(G)
    except ParseError:
        raise
    except (TypeError, ValueError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return str(data.get("name", os.path.basename(path))), L


def write_lattice_file(path, name, generator, exact=None):
    data = {"name": name, "generator": np.asarray(generator, dtype=float).tolist()}
    if exact is not None:
        data["exact"] = [[str(Fraction(x)) for x in row] for row in exact]
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def resolve_lattice(spec):
    """A builtin name or a path to a lattice file; returns ``(name, Lattice)``."""
    if _BUILTIN_RE.match(spec) and not os.path.exists(spec):
        return spec, builtin_lattice(spec)
    return load_lattice_file(spec)


SWEEP_COLUMNS = ("w", "gram_error", "primal_error", "V_maxnorm", "density_gap", "slope_so_far")


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    return "%.12e" % x


def sweep_csv_lines(records):
    """CSV lines (header first) for dicts keyed by ``SWEEP_COLUMNS``."""
    lines = [",".join(SWEEP_COLUMNS)]
    for r in sorted(records, key=lambda r: r["w"]):
        lines.append(",".join([str(int(r["w"]))] + [_fmt(r[c]) for c in SWEEP_COLUMNS[1:]]))
    return lines
