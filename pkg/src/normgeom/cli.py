"""Command-line front end.

Every subcommand reads matrices in the JSON format

    {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)

and writes a single JSON document to stdout or ``--out``.  Exit status is 0
when the computation finished (whatever the verdict), 2 for bad input and 3
for a numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import derivative, oracles, ortho, subdiff, tuples
from .matcore import MatrixError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class InputError(Exception):
    pass


class NumericalFailure(Exception):
    pass


# ----------------------------------------------------------------- matrix io

def matrix_from_json(obj, where="matrix"):
    """Parse the matrix JSON object into a complex128 array."""
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise InputError(f"{where}: expected an object with rows, cols and data")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InputError(f"{where}: rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InputError(f"{where}: data must hold rows*cols = {rows * cols} entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, e in enumerate(data):
        if (not isinstance(e, (list, tuple)) or len(e) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in e)):
            raise InputError(f"{where}: entry {i} is not a [re, im] pair")
        if not (math.isfinite(e[0]) and math.isfinite(e[1])):
            raise InputError(f"{where}: entry {i} is not finite")
        out[i] = complex(e[0], e[1])
    return out.reshape(rows, cols)


def matrix_to_json(M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M[:, None]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in M.ravel()]}


def load_matrix(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None
    return matrix_from_json(obj, path)


def save_matrix(path, M):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(M), fh)


def _c(z):
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _f(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _vec(v):
    return [_c(z) for z in np.asarray(v).ravel()]


# ------------------------------------------------------------------- config

@dataclass
class RunConfig:
    command: str
    inputs: dict
    eps: float | None = None
    tol: float | None = None
    seed: int = 0
    grid: int | None = None
    out: str | None = None
    oracle: bool = False
    extra: dict = field(default_factory=dict)


def _check_eps(eps):
    if eps is None:
        return
    if not (0.0 <= eps < 1.0):
        raise InputError("eps must lie in [0,1)")


# --------------------------------------------------------------- commands

def _cmd_dplus(cfg, m):
    A, X = m["a"], m["x"]
    delta = cfg.extra.get("delta")
    if delta is not None:
        r = derivative.dplus_band(A, X, delta)
        method = "top eigenvalue of the compressed Hermitian part on the spectral band"
    else:
        r = derivative.dplus(A, X)
        method = "top eigenvalue of the compressed Hermitian part on the maximizing subspace"
    return {"value": r.value, "witness": _vec(r.witness), "band_used": r.band_used,
            "method": method}


def _cmd_subdiff(cfg, m):
    A, X = m["a"], m["x"]
    d = derivative.dplus(A, X).value
    best, cert = subdiff.support_max(A, X)
    return {"dplus": d, "support_max": best, "gap": d - best,
            "certificate": {"coeff": matrix_to_json(cert.coeff),
                            "basis": matrix_to_json(cert.space.basis)},
            "method": "rank-one density certificate at a top eigenvector"}


def _report_json(rep):
    out = {"verdict": rep.verdict, "margin": rep.margin, "epsilon": rep.epsilon,
           "tol": rep.tol, "boundary": rep.boundary, "witness_kind": rep.witness_kind}
    if rep.witness_kind == "vector":
        out["witness"] = _vec(rep.witness)
        out["method"] = "nearest point of the compressed numerical range"
    elif rep.witness_kind == "theta":
        out["witness"] = float(rep.witness)
        out["method"] = "separating support direction of the compressed numerical range"
    elif rep.witness_kind == "certificate":
        out["witness"] = {"coeff": matrix_to_json(rep.witness.coeff),
                          "basis": matrix_to_json(rep.witness.space.basis)}
        out["method"] = "density certificate on the maximizing subspace"
    else:
        out["witness"] = matrix_to_json(rep.witness)
        out["method"] = "violating element of the subspace"
    det = {}
    for k, v in rep.details.items():
        if isinstance(v, (bool, int)) and not isinstance(v, np.ndarray):
            det[k] = v
        elif isinstance(v, (float, np.floating)):
            det[k] = _f(v)
        elif isinstance(v, (complex, np.complexfloating)):
            det[k] = _c(v)
        elif isinstance(v, np.ndarray):
            det[k] = _vec(v)
    out["details"] = det
    return out


def _cmd_ortho(cfg, m):
    A, B = m["a"], m["b"]
    kw = {} if cfg.tol is None else {"tol": cfg.tol}
    if cfg.grid:
        kw["coarse_grid"] = cfg.grid
    out = _report_json(ortho.eps_ortho_pair(A, B, cfg.eps, **kw))
    if cfg.oracle:
        v, lam, h = oracles.ortho_pair_oracle(A, B, cfg.eps, oracles.GridSpec(seed=cfg.seed))
        out["oracle"] = {"verdict": v, "worst_lambda": _c(lam), "worst_value": h}
    return out


def _cmd_ortho_sub(cfg, m):
    A, W = m["a"], m["w"]
    kw = {"seed": cfg.seed}
    if cfg.tol is not None:
        kw["tol"] = cfg.tol
    if cfg.grid:
        kw["dir_grid"] = cfg.grid
    out = _report_json(ortho.eps_ortho_subspace(A, W, cfg.eps, **kw))
    if cfg.oracle:
        g = oracles.GridSpec(points_per_axis=11 if len(W) > 1 else 41, seed=cfg.seed)
        v, w, h = oracles.ortho_subspace_oracle(A, W, cfg.eps, g)
        out["oracle"] = {"verdict": v, "worst_w": matrix_to_json(w), "worst_value": h}
    return out


def _cmd_numrange(cfg, m):
    M = m["m"]
    b = ortho.numrange_boundary(M, cfg.grid or 360)
    dist, theta = ortho.numrange_dist0(M)
    csv_path = cfg.extra.get("csv")
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["theta", "support", "point_re", "point_im"])
            for t, s, z in b.samples:
                wr.writerow([repr(t), repr(s), repr(z.real), repr(z.imag)])
    return {"grid": len(b.thetas), "dist0": dist, "theta_star": theta,
            "samples": [[t, s, _c(z)] for t, s, z in b.samples] if not csv_path else None,
            "csv": csv_path}


def _cmd_tuple_dist(cfg, m):
    A, X = m["a"], m["x"]
    kw = {} if cfg.tol is None else {"tol": cfg.tol}
    if cfg.extra.get("max_iters"):
        kw["max_iters"] = cfg.extra["max_iters"]
    r = tuples.best_approx(A, X, **kw)
    out = {"lambda_star": _vec(r.lambda_star), "dist": r.dist, "certified": r.certified,
           "iterations": r.iterations, "gap": _f(r.gap),
           "convention": "A + lambda X; the minimiser of ||A - mu X|| is mu = -lambda",
           "method": "ellipsoid method on subgradients, certified by the eta support test"}
    if cfg.oracle:
        mn, lam = oracles.tuple_oracle(A, X, oracles.GridSpec(
            points_per_axis={1: 41, 2: 9}.get(len(A), 5), seed=cfg.seed))
        out["oracle"] = {"min_norm": mn, "argmin_lambda": _vec(lam)}
    if cfg.extra.get("require_cert") and not r.certified:
        raise NumericalFailure("optimum could not be certified")
    return out


def _cmd_tuple_ortho(cfg, m):
    A, X = m["a"], m["x"]
    kw = {"seed": cfg.seed}
    if cfg.tol is not None:
        kw["tol"] = cfg.tol
    verdict, wit = tuples.conv_zero_test(A, X, **kw)
    out = {"verdict": verdict}
    if not verdict:
        out["witness_kind"] = "eta"
        out["witness"] = _vec(wit)
        out["method"] = "separating direction of the joint maximal numerical range"
    elif wit is not None:
        out["witness_kind"] = "certificate"
        out["witness"] = {"coeff": matrix_to_json(wit.coeff),
                          "basis": matrix_to_json(wit.space.basis)}
        out["method"] = "density matrix with tr(A_j^H X_j P) = 0 (Frank-Wolfe)"
    else:
        out["witness_kind"] = None
        out["witness"] = None
        out["method"] = "support test only; no certificate within tolerance"
    path = cfg.extra.get("w0_out")
    if path:
        s = tuples.joint_w0_sample(A, X, cfg.extra.get("samples", 1000), cfg.seed)
        d = len(A)
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow([f"{p}_{j + 1}" for j in range(d) for p in ("re", "im")])
            for row in s.points:
                wr.writerow([repr(float(f(z))) for z in row for f in (np.real, np.imag)])
        out["w0_csv"] = path
    return out


COMMANDS = {
    "dplus": _cmd_dplus,
    "subdiff": _cmd_subdiff,
    "ortho": _cmd_ortho,
    "ortho-sub": _cmd_ortho_sub,
    "numrange": _cmd_numrange,
    "tuple-dist": _cmd_tuple_dist,
    "tuple-ortho": _cmd_tuple_ortho,
}


def _load_inputs(cfg):
    m = {}
    for key, val in cfg.inputs.items():
        if isinstance(val, list):
            m[key] = [load_matrix(p) for p in val]
        else:
            m[key] = load_matrix(val)
    return m


def run(cfg, stdout=None, stderr=None):
    """Execute one configured run; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        _check_eps(cfg.eps)
        if cfg.tol is not None and not cfg.tol >= 0:
            raise InputError("tol must be nonnegative")
        m = _load_inputs(cfg)
        out = COMMANDS[cfg.command](cfg, m)
    except (InputError, MatrixError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    doc = {"command": cfg.command, **out}
    if cfg.command == "numrange" and doc.get("samples") is None:
        doc.pop("samples")
    text = json.dumps(doc, indent=2, allow_nan=False)
    if cfg.out and cfg.command != "numrange":
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        stdout.write(text + "\n")
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser():
    p = argparse.ArgumentParser(prog="normgeom",
                                description="Operator-norm geometry of complex matrices.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--oracle", action="store_true",
                        help="also run the brute-force oracle and report both")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dplus", parents=[common], help="right-hand derivative of the norm")
    s.add_argument("--a", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--delta", type=float, default=None)

    s = sub.add_parser("subdiff", parents=[common], help="support of the subdifferential")
    s.add_argument("--a", required=True)
    s.add_argument("--x", required=True)

    s = sub.add_parser("ortho", parents=[common], help="eps-orthogonality of A to B")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--eps", type=float, default=0.0)
    s.add_argument("--grid", type=int, default=None)

    s = sub.add_parser("ortho-sub", parents=[common], help="eps-orthogonality to a subspace")
    s.add_argument("--a", required=True)
    s.add_argument("--w", required=True, nargs="+")
    s.add_argument("--eps", type=float, default=0.0)
    s.add_argument("--grid", type=int, default=None)

    s = sub.add_parser("numrange", parents=[common], help="numerical range boundary samples")
    s.add_argument("--m", required=True)
    s.add_argument("--grid", type=int, default=360)

    s = sub.add_parser("tuple-dist", parents=[common], help="distance of a tuple from C^d X")
    s.add_argument("--a", required=True, nargs="+")
    s.add_argument("--x", required=True, nargs="+")
    s.add_argument("--require-cert", action="store_true",
                   help="exit 3 when the optimum is not certified")
    s.add_argument("--max-iters", type=int, default=None)

    s = sub.add_parser("tuple-ortho", parents=[common], help="orthogonality of a tuple to C^d X")
    s.add_argument("--a", required=True, nargs="+")
    s.add_argument("--x", required=True, nargs="+")
    s.add_argument("--w0-out", default=None, help="CSV of joint numerical range samples")
    s.add_argument("--samples", type=int, default=1000)
    return p


def config_from_args(ns):
    keys = {"dplus": ("a", "x"), "subdiff": ("a", "x"), "ortho": ("a", "b"),
            "ortho-sub": ("a", "w"), "numrange": ("m",), "tuple-dist": ("a", "x"),
            "tuple-ortho": ("a", "x")}[ns.command]
    extra = {}
    if ns.command == "dplus":
        extra["delta"] = ns.delta
    if ns.command == "numrange":
        extra["csv"] = ns.out
    if ns.command == "tuple-dist":
        extra["require_cert"] = ns.require_cert
        extra["max_iters"] = ns.max_iters
    if ns.command == "tuple-ortho":
        extra["w0_out"] = ns.w0_out
        extra["samples"] = ns.samples
    return RunConfig(command=ns.command, inputs={k: getattr(ns, k) for k in keys},
                     eps=getattr(ns, "eps", None), tol=ns.tol, seed=ns.seed,
                     grid=getattr(ns, "grid", None), out=ns.out, oracle=ns.oracle,
                     extra=extra)


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
