"""Command-line interface: ``latproj {approximate,sweep,verify,svp,density}``.

Exit codes: 0 success, 1 verification failure, 2 precondition violation,
3 I/O or parse error.
"""

import argparse
import json
import sys

import numpy as np

from . import approximation as approx
from .errors import DimensionTooLarge, LatticeError, NotLatticeVector, NotPrimitive
from .formats import ParseError, resolve_lattice, sweep_csv_lines
from .instances import random_A_hat, random_lattice, random_primitive_coeffs
from .lattice import Lattice, dual, primitive_check
from .matrix_core import as_int_matrix, to_float
from .projection import (
    complete_to_basis,
    discriminant_identity,
    duality_report,
    project,
    reduce_completion,
)
from .svp_density import center_density, density_gap, max_svp_dim, shortest_vector

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_PARSE = 0, 1, 2, 3


class Precondition(Exception):
    pass


def _ints(M):
    return [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()]


def _floats(M):
    return np.asarray(M, dtype=float).tolist()


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_pair(args):
    _, L1 = resolve_lattice(args.source)
    _, L2 = resolve_lattice(args.target)
    n = L1.ambient
    k = args.k
    if L1.dim != n:
        raise Precondition("source lattice must be full-dimensional")
    if not 1 <= k < n:
        raise Precondition("k must satisfy 1 ≤ k < n")
    if L2.dim != n - k:
        raise Precondition(f"target dimension {L2.dim} != n - k = {n - k}")
    return L1, L2


def _target_lattice(L2, dual_given):
    return dual(L2) if dual_given else L2


def cmd_approximate(args):
    L1, L2 = _load_pair(args)
    if args.w is None or args.w < 1:
        raise Precondition("--w must be a positive integer")
    r = approx.approximate(L1, L2, args.k, args.w, dual_given=args.target_dual)
    report = {
        "source": args.source,
        "target": args.target,
        "target_is_dual": args.target_dual,
        "k": args.k,
        "w": r.w,
        "c": r.c,
        "V": _floats(r.V),
        "A_coeff": _ints(r.A_coeff),
        "H_w": _ints(r.H_w),
        "L_w_star": _floats(r.L_w_star),
        "projection_gram": _floats(r.projection_gram),
        "gram_error": r.gram_error,
        "primal_error": r.primal_error,
        "V_maxnorm": r.V_norm,
    }
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_OK


def _parse_w_list(text):
    try:
        ws = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad --w-list {text!r}") from None
    if len(ws) < 3:
        raise Precondition("--w-list needs at least 3 values")
    if len(set(ws)) != len(ws):
        raise Precondition("--w-list has duplicate values")
    if min(ws) < 1:
        raise Precondition("--w-list values must be positive")
    return sorted(ws)


def cmd_sweep(args):
    L1, L2 = _load_pair(args)
    if not args.w_list:
        raise Precondition("--w-list is required")
    ws = _parse_w_list(args.w_list)
    sw = approx.convergence_sweep(L1, L2, args.k, ws, dual_given=args.target_dual)
    target = _target_lattice(L2, args.target_dual)
    with_density = target.dim <= max_svp_dim()
    records = []
    for i, r in enumerate(sw.results):
        gap = density_gap(r.projected_lattice(), target) if with_density else None
        slope = approx.fit_slope(sw.results[: i + 1]) if i else None
        records.append({"w": r.w, "gram_error": r.gram_error, "primal_error": r.primal_error,
                        "V_maxnorm": r.V_norm, "density_gap": gap, "slope_so_far": slope})
    _emit("\n".join(sweep_csv_lines(records)) + "\n", args.out)
    return EXIT_OK


def _parse_vectors(text):
    try:
        rows = [[float(x) for x in row.split(",")] for row in text.split(";") if row.strip()]
        return np.array(rows, dtype=float)
    except ValueError:
        raise ParseError(f"bad --vector {text!r}") from None


def _rebased_input(L, A):
    """Lattice and ``A_hat`` so that the primitive set reads ``[I | A_hat]``."""
    k = A.shape[0]
    if all(A[i, j] == int(i == j) for i in range(k) for j in range(k)):
        return L, A[:, k:]
    U = reduce_completion(complete_to_basis(A), A, L.generator, to_float(A) @ L.generator)
    W = np.vstack([A, U])
    return Lattice(to_float(W) @ L.generator), as_int_matrix(np.zeros((k, L.dim - k), dtype=int))


def _check_instance(L, V, tol, label, lines):
    cert = primitive_check(L, V)
    if not cert.valid:
        raise NotPrimitive(cert.minor_gcd)
    spec = project(L, V)
    lhs, rhs = discriminant_identity(L, spec)
    rel1 = abs(lhs - rhs) / abs(rhs)
    ok1 = rel1 < tol
    L2, A_hat = _rebased_input(L, cert.coefficient_matrix)
    rep = duality_report(L2, A_hat)
    ok2 = rep.lattices_equal and rep.det_relerr < tol
    lines.append(f"{'PASS' if ok1 else 'FAIL'} discriminant {label} relerr={rel1:.3e}")
    lines.append(f"{'PASS' if ok2 else 'FAIL'} duality {label} "
                 f"equal={rep.lattices_equal} det_relerr={rep.det_relerr:.3e}")
    return ok1 and ok2


def cmd_verify(args):
    _, L = resolve_lattice(args.source)
    tol = args.tolerance
    lines = []
    ok = True
    if args.vector:
        V = _parse_vectors(args.vector)
        if V.shape[1] != L.ambient or not 1 <= V.shape[0] < L.dim:
            raise Precondition("vectors must have length n and 1 <= count < n")
        try:
            ok = _check_instance(L, V, tol, "given", lines)
        except NotLatticeVector as exc:
            raise Precondition(str(exc)) from None
    else:
        if L.dim != L.ambient:
            raise Precondition("random suite needs a full-dimensional source")
        n = L.dim
        ks = [args.k] if args.k else list(range(1, n))
        if any(not 1 <= k < n for k in ks):
            raise Precondition("k must satisfy 1 ≤ k < n")
        rng = np.random.default_rng(args.seed)
        for t in range(args.trials):
            k = ks[t % len(ks)]
            A = random_primitive_coeffs(rng, k, n)
            V = to_float(A) @ L.generator
            ok &= _check_instance(L, V, tol, f"trial={t} k={k}", lines)
            # closed-form duality route on a fresh random lattice of the same size
            Lr = random_lattice(rng, n)
            rep = duality_report(Lr, random_A_hat(rng, k, n))
            good = rep.lattices_equal and rep.det_relerr < tol
            ok &= good
            lines.append(f"{'PASS' if good else 'FAIL'} duality-random trial={t} k={k} "
                         f"equal={rep.lattices_equal} det_relerr={rep.det_relerr:.3e}")
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_svp(args):
    _, L = resolve_lattice(args.source)
    r = shortest_vector(L, count_minimal=True)
    report = {"source": args.source, "norm_sq": r.norm_sq,
              "shortest_vector": _floats(r.shortest_vector),
              "coords": [int(x) for x in r.coords], "minimal_count": r.minimal_count,
              "node_count": r.node_count, "center_density": center_density(L)}
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_density(args):
    _, L = resolve_lattice(args.source)
    report = {"source": args.source, "center_density": center_density(L)}
    if args.target:
        _, T = resolve_lattice(args.target)
        if T.dim != L.dim:
            raise Precondition("source and target must have the same dimension")
        report["target"] = args.target
        report["target_center_density"] = center_density(T)
        report["density_gap"] = density_gap(L, T)
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="latproj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def pair(sp):
        sp.add_argument("--source", required=True, help="lattice file or builtin name")
        sp.add_argument("--target", required=True, help="lattice file or builtin name")
        sp.add_argument("--k", type=int, required=True, help="number of projection vectors")
        sp.add_argument("--target-dual", action="store_true",
                        help="the target generates the dual of the lattice to approximate")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("approximate", help="build the projection vectors for one w")
    pair(sp)
    sp.add_argument("--w", type=int, required=True)
    sp.set_defaults(func=cmd_approximate)

    sp = sub.add_parser("sweep", help="convergence over several w, CSV output")
    pair(sp)
    sp.add_argument("--w-list", required=True, help="comma separated, e.g. 10,100,1000")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="check the discriminant and duality identities")
    sp.add_argument("--source", required=True)
    sp.add_argument("--vector", help="rows separated by ';', entries by ','")
    sp.add_argument("--k", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--tolerance", type=float, default=1e-8)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("svp", help="shortest vector by enumeration")
    sp.add_argument("--source", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_svp)

    sp = sub.add_parser("density", help="center density, optionally the gap to a target")
    sp.add_argument("--source", required=True)
    sp.add_argument("--target")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_density)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Precondition, NotPrimitive, DimensionTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
