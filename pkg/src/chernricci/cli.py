"""Command-line front end.

Exit codes: 0 success, 2 unreadable input, 3 invariant violation,
4 time outside the flow interval, 5 catalog verification failures.
"""
import argparse
import csv
import json
import math
import sys

import numpy as np

from . import flow as fl
from .catalog import CatalogError, default_catalog, instantiate, list_entries, load_catalog, verify_all
from .chern import chern_ricci_operator, singular_times
from .errors import DomainError, InvariantViolation
from .hermitian import ComplexStructure, HermitianStructure, is_kahler
from .lie import LieBracket
from .soliton import certify

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_DOMAIN = 4
EXIT_VERIFY = 5
INPUT_SCHEMA = 1


class InputError(ValueError):
    pass


# -- output ---------------------------------------------------------------


def _fmt_float(x):
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0.0:
        return "0.0"  # drops the sign of -0.0
    s = format(x, ".17g")
    return s if any(ch in s for ch in ".e") else s + ".0"


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps(obj, indent=2, _level=0):
    """JSON with every float printed to 17 significant digits."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, out):
    out.write(dumps(obj) + "\n")


# -- input ----------------------------------------------------------------


def parse_document(doc):
    """Build a HermitianStructure from an input document (schema 1)."""
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    if doc.get("schema", INPUT_SCHEMA) != INPUT_SCHEMA:
        raise InputError(f"unsupported schema {doc.get('schema')!r}")
    try:
        dim = int(doc["dim"])
        rels = []
        for r in doc["bracket"]:
            i, j, k, c = int(r["i"]), int(r["j"]), int(r["k"]), float(r["c"])
            if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
                raise InputError(f"bracket index out of range in {r}")
            rels.append((i, j, k, c))
        J = np.array(doc["J"], dtype=float)
        metric = doc.get("metric", "identity")
        g = np.eye(dim) if metric == "identity" else np.array(metric, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed input document: {exc!r}") from None
    if J.shape != (dim, dim) or g.shape != (dim, dim):
        raise InputError("J and metric must be dim x dim arrays")
    return HermitianStructure(LieBracket.from_relations(dim, rels), ComplexStructure(J), g)


def structure_document(h):
    """Inverse of :func:`parse_document`."""
    rels = [{"i": i, "j": j, "k": k, "c": c} for i, j, k, c in h.bracket.relations() if i < j]
    return {"schema": INPUT_SCHEMA, "dim": h.dim, "bracket": rels, "J": h.J.J, "metric": h.g}


def _load(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_document(doc)


# -- commands -------------------------------------------------------------


def cmd_validate(args, out):
    h = _load(args.file)
    _emit({"valid": True, "dim": h.dim, "kahler": bool(is_kahler(h))}, out)
    return EXIT_OK


def chern_payload(h):
    d = chern_ricci_operator(h)
    tm, tp = singular_times(d)
    return {
        "p": d.p,
        "P": d.P,
        "eigenvalues": d.eigenvalues,
        "eigenbasis": d.eigenbasis,
        "clusters": [{"value": v, "multiplicity": len(m)} for v, m in d.clusters],
        "T_minus": tm,
        "T_plus": tp,
    }


def cmd_chern(args, out):
    _emit(chern_payload(_load(args.file)), out)
    return EXIT_OK


def _times(args):
    ts = []
    for chunk in args.t or []:
        ts.extend(float(x) for x in str(chunk).split(",") if x.strip())
    if args.grid:
        try:
            a, b, n = args.grid.split(":")
            ts.extend(np.linspace(float(a), float(b), int(n)).tolist())
        except ValueError:
            raise InputError(f"--grid expects start:stop:steps, got {args.grid!r}") from None
    if not ts:
        raise InputError("give --t or --grid")
    return ts


def flow_rows(h, ts):
    f = fl.solve(h)
    rows = []
    for t in ts:
        g = fl.metric_at(f, t).g
        p_eig = f.eigenvalues / (1.0 - 2.0 * t * f.eigenvalues)
        rows.append(
            {
                "t": float(t),
                "g": g,
                "P": fl.operator_at(f, t),
                "P_eigen": p_eig,
                "trP": fl.scalar_curvature_at(f, t),
                "mu_norm": fl.bracket_norm(fl.bracket_flow_at(f, t)),
            }
        )
    return f, rows


def write_csv(path, rows, dim):
    iu = np.triu_indices(dim)
    header = ["t"] + [f"g{i + 1}{j + 1}" for i, j in zip(*iu)] + [f"P{i + 1}" for i in range(dim)] + ["trP", "mu_norm"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            vals = [r["t"], *r["g"][iu], *r["P_eigen"], r["trP"], r["mu_norm"]]
            w.writerow([_fmt_float(v) for v in vals])


def cmd_flow(args, out):
    h = _load(args.file)
    ts = _times(args)
    f, rows = flow_rows(h, ts)
    if args.emit_csv:
        write_csv(args.emit_csv, rows, h.dim)
    _emit({"T_minus": f.t_minus, "T_plus": f.t_plus, "eigenbasis": f.basis, "rows": rows}, out)
    return EXIT_OK


def limit_payload(res):
    return {
        "kind": res.kind.value,
        "direction": res.direction.value,
        "converged": res.converged,
        "degenerate": res.degenerate,
        "hypothesis": res.hypothesis,
        "max_exponent": res.max_exponent,
        "bracket_eigenbasis": None if res.bracket is None else res.bracket.c,
        "bracket_original": None if res.bracket is None else res.bracket_original().c,
        "eigenbasis": res.basis,
        "predicted_P": res.predicted_P,
        "recomputed_P": res.recomputed_P,
        "residual": res.residual,
        "notes": list(res.notes),
    }


def cmd_limit(args, out):
    h = _load(args.file)
    f = fl.solve(h)
    res = (fl.limit_lambda if args.kind == "lambda" else fl.limit_nu)(f, args.direction)
    _emit(limit_payload(res), out)
    return EXIT_OK


def certificate_payload(cert):
    return {
        "is_soliton": cert.is_soliton,
        "kind": cert.kind,
        "c": cert.c,
        "D": cert.D,
        "witness": cert.witness,
        "checks": {k: {"ok": bool(v.ok), "residual": v.residual} for k, v in cert.checks.items()},
    }


def cmd_soliton(args, out):
    _emit(certificate_payload(certify(_load(args.file))), out)
    return EXIT_OK


def _catalog(args):
    return load_catalog(args.catalog) if args.catalog else default_catalog()


def cmd_catalog(args, out):
    cat = _catalog(args)
    if args.action == "list":
        items = [
            {"algebra": a, "variant": v, "J": j, "parameters": s} for a, v, j, s in list_entries(cat)
        ]
        if args.json:
            _emit(items, out)
        else:
            for it in items:
                ps = ", ".join(f"{k}: {p['constraint'] or 'any real'}" for k, p in it["parameters"].items())
                out.write(f"{it['algebra']:<18} <{it['variant']}> {it['J']:<6} {ps}\n")
        return EXIT_OK
    if args.action == "show":
        if not args.name:
            raise InputError("catalog show needs NAME")
        params = json.loads(args.params) if args.params else None
        entry = cat.find(args.name, args.variant, args.J)
        if params is None and entry.is_family:
            params = entry.samples(1)[0]
        inst = instantiate(entry, params=params, catalog=cat)
        ex = inst.expected
        payload = {
            "algebra": entry.algebra,
            "variant": entry.variant,
            "J_name": entry.J_name,
            "parameters": inst.params,
            "structure": structure_document(inst.structure),
            "expected": {"P_diag": ex.P_diag, "c": ex.c, "D_diag": ex.D_diag, "kahler": ex.kahler},
            "reference": inst.reference,
            "chern": chern_payload(inst.structure),
        }
        if args.json:
            _emit(payload, out)
        else:
            out.write(f"{entry.label}  params={inst.params}\n")
            out.write(f"  P diag expected {ex.P_diag.tolist()}\n")
            out.write(f"  eigenvalues     {payload['chern']['eigenvalues'].tolist()}\n")
            out.write(f"  soliton c={ex.c} D={None if ex.D_diag is None else ex.D_diag.tolist()} kahler={ex.kahler}\n")
        return EXIT_OK
    rep = verify_all(args.samples, workers=args.workers, catalog=cat)
    if args.json:
        _emit(
            {
                "passed": rep.passed,
                "summary": rep.summary(),
                "rows": [
                    {"label": r.label, "params": r.params, "passed": r.passed,
                     "checks": {k: {"ok": ok, "detail": d} for k, (ok, d) in r.checks.items()}}
                    for r in rep.rows
                ],
            },
            out,
        )
    else:
        for r in rep.rows:
            status = "ok  " if r.passed else "FAIL"
            out.write(f"{status} {r.label} {r.params}\n")
            for k, (ok, d) in r.failures().items():
                out.write(f"       {k}: {d}\n")
        out.write(rep.summary() + "\n")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def build_parser():
    p = argparse.ArgumentParser(prog="chernricci", description="Chern-Ricci flow on Lie groups")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("validate", "check an input structure"),
        ("chern", "Chern-Ricci form, operator and existence interval"),
        ("soliton", "soliton certificate"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file")

    sp = sub.add_parser("flow", help="evaluate the closed-form flow")
    sp.add_argument("file")
    sp.add_argument("--t", action="append", help="time(s), comma separated; repeatable")
    sp.add_argument("--grid", help="start:stop:steps")
    sp.add_argument("--emit-csv", dest="emit_csv", metavar="PATH")

    sp = sub.add_parser("limit", help="rescaled bracket-flow limit")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=("lambda", "nu"), default="lambda")
    sp.add_argument("--direction", choices=("plus", "minus"), default="plus")

    sp = sub.add_parser("catalog", help="built-in catalog")
    sp.add_argument("action", choices=("list", "show", "verify"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--variant", type=int)
    sp.add_argument("--J", dest="J")
    sp.add_argument("--params", help="JSON object of parameter values")
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--catalog", help="load a catalog JSON from disk")
    sp.add_argument("--json", action="store_true")
    return p


_COMMANDS = {
    "validate": cmd_validate,
    "chern": cmd_chern,
    "flow": cmd_flow,
    "limit": cmd_limit,
    "soliton": cmd_soliton,
    "catalog": cmd_catalog,
}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return _COMMANDS[args.command](args, out)
    except (InputError, CatalogError, json.JSONDecodeError) as exc:
        _emit({"error": "parse", "message": str(exc)}, err)
        return EXIT_PARSE
    except InvariantViolation as exc:
        _emit({"error": "invariant", "invariant": exc.name, "residual": exc.residual, "message": str(exc)}, err)
        return EXIT_INVARIANT
    except DomainError as exc:
        _emit({"error": "domain", "message": str(exc)}, err)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
