"""Catalog of four-dimensional solvable hermitian Lie algebras and its verification harness.

The data lives in a versioned JSON document (``solvable4.json``).  Each
entry names an algebra, a bracket variant and a complex structure; brackets,
complex structures and expected values may be expressions in the entry's
parameters, evaluated by :mod:`chernricci.catalog.expr`.
"""
import json
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..chern import chern_ricci_operator
from ..errors import ChernRicciError, DomainError
from ..hermitian import ComplexStructure, HermitianStructure, compatible_metric, is_kahler, random_compatible_metric
from ..lie import LieBracket
from ..soliton import certify
from .expr import ExpressionError, evaluate, evaluate_all

SCHEMA_VERSION = 1
DEFAULT_FILE = "solvable4.json"
P_TOL = 1e-8
SOLITON_TOL = 1e-8


class CatalogError(ChernRicciError, LookupError):
    pass


@dataclass(frozen=True)
class Parameter:
    name: str
    constraint: str = None
    box: tuple = None

    def admits(self, value):
        if not np.isfinite(value):
            return False
        return self.constraint is None or bool(evaluate(self.constraint, {self.name: value}))


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    algebra: str
    variant: int
    J_name: str
    parameters: tuple
    raw: dict = field(repr=False)

    @property
    def key(self):
        return (self.algebra, self.variant, self.J_name)

    @property
    def label(self):
        return f"{self.algebra} <{self.variant}> {self.J_name}"

    @property
    def is_family(self):
        return bool(self.parameters)

    @property
    def metric_kind(self):
        return "any" if self.raw["metric"] == "any" else "explicit"

    def schema(self):
        return {p.name: {"constraint": p.constraint, "box": p.box} for p in self.parameters}

    def samples(self, count=5):
        """Up to ``count`` in-range parameter maps, stored ones first."""
        if not self.parameters:
            return [{}]
        out = [dict(s) for s in self.raw.get("samples", [])][:count]
        rng = np.random.default_rng(zlib.crc32(self.label.encode()))
        tries = 0
        while len(out) < count and tries < 1000:
            tries += 1
            s = {p.name: float(rng.uniform(*p.box)) for p in self.parameters}
            if all(p.admits(s[p.name]) for p in self.parameters):
                out.append(s)
        return out

    def check_params(self, params):
        params = dict(params or {})
        names = {p.name for p in self.parameters}
        extra = set(params) - names
        if extra:
            raise DomainError(f"{self.label}: unknown parameters {sorted(extra)}")
        for p in self.parameters:
            if p.name not in params:
                raise DomainError(f"{self.label}: missing parameter {p.name!r}")
            v = float(params[p.name])
            if not p.admits(v):
                raise DomainError(f"{self.label}: {p.name}={v!r} violates constraint {p.constraint!r}")
            params[p.name] = v
        return params

    def environment(self, params):
        env = dict(params)
        for name, text in self.raw.get("definitions", {}).items():
            env[name] = float(evaluate(text, env))
        return env


@dataclass(frozen=True, eq=False)
class Expected:
    P_diag: np.ndarray
    c: float
    D_diag: np.ndarray
    kahler: bool

    @property
    def soliton(self):
        return self.c is not None


@dataclass(frozen=True, eq=False)
class Instance:
    entry: CatalogEntry
    params: dict
    structure: HermitianStructure
    expected: Expected
    reference: dict


class Catalog:
    def __init__(self, document, source=None):
        if document.get("schema") != SCHEMA_VERSION:
            raise CatalogError(f"unsupported catalog schema {document.get('schema')!r}")
        self.name = document.get("name", "")
        self.source = source
        self.document = document
        entries = []
        for raw in document["entries"]:
            params = tuple(
                Parameter(n, spec.get("constraint"), tuple(spec["box"]) if "box" in spec else None)
                for n, spec in raw.get("parameters", {}).items()
            )
            entries.append(CatalogEntry(raw["algebra"], int(raw.get("variant", 1)), raw["J"], params, raw))
        self.entries = tuple(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def find(self, algebra, variant=None, J_name=None):
        hits = [
            e
            for e in self.entries
            if e.algebra == algebra and (variant is None or e.variant == int(variant)) and (J_name is None or e.J_name == J_name)
        ]
        if not hits:
            raise CatalogError(f"no catalog entry {algebra!r} variant={variant!r} J={J_name!r}")
        if len(hits) > 1:
            raise CatalogError(f"{algebra!r} is ambiguous; choose among {[h.label for h in hits]}")
        return hits[0]


def load_catalog(path=None):
    """The shipped catalog, or a user document from ``path``."""
    if path is None:
        text = resources.files(__package__).joinpath(DEFAULT_FILE).read_text()
        src = DEFAULT_FILE
    else:
        text = Path(path).read_text()
        src = str(path)
    return Catalog(json.loads(text), src)


_DEFAULT = None


def default_catalog():
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_catalog()
    return _DEFAULT


def list_entries(catalog=None):
    cat = catalog or default_catalog()
    return [(e.algebra, e.variant, e.J_name, e.schema()) for e in cat]


def _bracket(raw, env, dim):
    rel = [(int(i), int(j), int(k), float(evaluate(v, env))) for i, j, k, v in raw["bracket"]]
    return LieBracket.from_relations(dim, rel)


def _J(images, env, dim):
    imgs = {int(a): {int(b): float(evaluate(v, env)) for b, v in img.items()} for a, img in images.items()}
    return ComplexStructure.from_images(dim, imgs)


def _expected(raw, env):
    ex = raw["expected"]
    k = ex.get("kahler", "no")
    if k in ("yes", "no"):
        kahler = k == "yes"
    else:
        kahler = bool(evaluate(k, env))
    c = ex.get("c")
    D = ex.get("D_diag")
    return Expected(
        np.array(evaluate_all(ex["P_diag"], env)),
        None if c is None else float(evaluate(c, env)),
        None if D is None else np.array(evaluate_all(D, env)),
        kahler,
    )


def instantiate(algebra, variant=None, J_name=None, params=None, catalog=None, metric=None):
    """Assemble the hermitian structure of a catalog row.

    ``metric`` overrides the stored one (it must be J-compatible); rows whose
    metric is ``"any"`` default to the J-average of the identity.
    """
    cat = catalog or default_catalog()
    entry = algebra if isinstance(algebra, CatalogEntry) else cat.find(algebra, variant, J_name)
    params = entry.check_params(params)
    env = entry.environment(params)
    raw = entry.raw
    dim = int(raw.get("dim", 4))
    try:
        b = _bracket(raw, env, dim)
        J = _J(raw["J_images"], env, dim)
    except ExpressionError as exc:
        raise CatalogError(f"{entry.label}: {exc}") from None
    if metric is not None:
        g = np.asarray(metric, float)
    elif raw["metric"] == "any":
        g = compatible_metric(J)
    else:
        g = np.diag(evaluate_all(raw["metric"], env))
    h = HermitianStructure(b, J, g)
    ref = {}
    for key, val in raw.get("reference", {}).items():
        ref[key] = evaluate_all(val, env) if isinstance(val, list) else val
    return Instance(entry, params, h, _expected(raw, env), ref)


# -- verification ---------------------------------------------------------


@dataclass
class RowReport:
    label: str
    params: dict
    checks: dict = field(default_factory=dict)

    @property
    def key(self):
        return (self.label, tuple(sorted(self.params.items())))

    @property
    def passed(self):
        return all(ok for ok, _ in self.checks.values())

    def failures(self):
        return {k: v for k, v in self.checks.items() if not v[0]}

    def add(self, name, ok, detail=""):
        self.checks[name] = (bool(ok), detail)


@dataclass
class AggregateReport:
    rows: list

    @property
    def failures(self):
        return [r for r in self.rows if not r.passed]

    @property
    def passed(self):
        return not self.failures

    def summary(self):
        return f"{len(self.rows) - len(self.failures)}/{len(self.rows)} rows passed"


def verify_entry(entry, params=None, catalog=None, any_metric_samples=5):
    cat = catalog or default_catalog()
    if not isinstance(entry, CatalogEntry):
        entry = cat.find(*entry)
    rep = RowReport(entry.label, dict(params or {}))
    try:
        inst = instantiate(entry, params=params, catalog=cat)
    except ChernRicciError as exc:
        rep.add("instantiate", False, str(exc))
        return rep
    h, ex = inst.structure, inst.expected
    rep.add("instantiate", True)

    d = chern_ricci_operator(h)
    err = float(np.abs(d.P - np.diag(ex.P_diag)).max())
    rep.add("P", err <= P_TOL, f"max |P - expected| = {err:.3e}")

    cert = certify(h)
    if ex.soliton:
        ok = cert.is_soliton
        detail = f"witness={cert.witness}"
        if ok:
            dc = abs(cert.c - ex.c)
            dD = float(np.abs(cert.D - np.diag(ex.D_diag)).max())
            ok = dc <= SOLITON_TOL and dD <= SOLITON_TOL
            detail = f"|c - expected| = {dc:.3e}, |D - expected| = {dD:.3e}"
        rep.add("soliton", ok, detail)
    else:
        rep.add("soliton", not cert.is_soliton, "expected no soliton" + ("" if not cert.is_soliton else f"; got c={cert.c}"))

    k = is_kahler(h)
    rep.add("kahler", bool(k) == ex.kahler, f"expected {ex.kahler}, dω residual {k.residual:.3e}")

    if entry.metric_kind == "any":
        rng = np.random.default_rng(zlib.crc32(repr(rep.key).encode()))
        worst = 0.0
        for _ in range(any_metric_samples):
            g = random_compatible_metric(h.J, rng)
            worst = max(worst, float(np.abs(chern_ricci_operator(h.with_metric(g)).P).max()))
        rep.add("any_metric", worst <= P_TOL, f"max |P| over random metrics = {worst:.3e}")

    for name in entry.raw.get("extras", []):
        from . import extras

        ok, detail = getattr(extras, name)(inst)
        rep.add(name, ok, detail)
    return rep


def verify_all(samples=5, workers=None, catalog=None):
    cat = catalog or default_catalog()
    jobs = [(e, s) for e in cat for s in e.samples(samples)]

    def run(job):
        return verify_entry(job[0], job[1], catalog=cat)

    if workers is None or workers <= 1:
        rows = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, jobs))
    rows.sort(key=lambda r: (r.label, sorted(r.params.items())))
    return AggregateReport(rows)


__all__ = [
    "Catalog",
    "CatalogEntry",
    "CatalogError",
    "Instance",
    "Expected",
    "RowReport",
    "AggregateReport",
    "load_catalog",
    "default_catalog",
    "list_entries",
    "instantiate",
    "verify_entry",
    "verify_all",
]
