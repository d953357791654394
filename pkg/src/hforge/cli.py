"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 size guard exceeded, 3 mismatch
against --expect.
"""

from __future__ import annotations

import functools
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import __version__
from .guards import GuardExceeded
from .render import csv_text, dumps, heatmap_svg, jsonl

EXIT_OK, EXIT_INVALID, EXIT_GUARD, EXIT_MISMATCH = 0, 1, 2, 3

__all__ = ["RunConfig", "Outcome", "run", "main"]


class ExpectMismatch(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    d: int | None = None
    p: int | None = None
    n: int = 1
    eigenspace: str | None = None
    theta: float | None = None
    tol: float | None = None
    seed: int = 0
    threads: int = 1
    long_run: bool = False
    out: str | None = None
    fmt: str = "json"
    expect: str | None = None
    argv: list[str] = field(default_factory=list)

    def provenance(self) -> dict:
        return {
            "command": " ".join(self.argv),
            "seed": self.seed,
            "tolerances": {"tol": self.tol},
            "version": __version__,
        }


@dataclass
class Outcome:
    """summary goes to JSON; rows to CSV or JSON-lines; primary is compared with --expect."""

    summary: dict
    primary: object = None
    rows: list[dict] | None = None
    svg: str | None = None
    extra: dict = field(default_factory=dict)  # path -> text


# ---------------------------------------------------------------- plumbing


def _default_threads() -> int:
    return int(os.environ.get("HFORGE_THREADS", "1"))


def _matches(expect: str, value) -> bool:
    if isinstance(value, bool):
        return expect.lower() == str(value).lower()
    if isinstance(value, (int, float, np.integer, np.floating)):
        try:
            x = float(expect)
        except ValueError:
            return False
        return math.isclose(x, float(value), rel_tol=1e-12, abs_tol=1e-12)
    return expect == str(value)


def _emit(cfg: RunConfig, res: Outcome) -> None:
    summary = dict(res.summary)
    summary["provenance"] = cfg.provenance()
    text = dumps(summary) + "\n"
    if cfg.out is None:
        if cfg.fmt == "csv" and res.rows is not None:
            click.echo(csv_text(res.rows), nl=False)
        else:
            click.echo(text, nl=False)
    else:
        path = Path(cfg.out)
        if path.suffix == ".svg":
            if res.svg is None:
                raise click.UsageError("this command has no SVG output")
            path.write_text(res.svg)
            if res.rows is not None:
                path.with_suffix(".csv").write_text(csv_text(res.rows), newline="")
            click.echo(text, nl=False)
        elif cfg.fmt == "csv":
            if res.rows is None:
                raise click.UsageError("this command has no tabular output")
            path.write_text(csv_text(res.rows), newline="")
        elif path.suffix == ".jsonl" and res.rows is not None:
            path.write_text(jsonl(res.rows))
        else:
            path.write_text(text)
    for p, body in res.extra.items():
        Path(p).write_text(body, newline="")
    if cfg.expect is not None and not _matches(cfg.expect, res.primary):
        raise ExpectMismatch(f"expected {cfg.expect}, got {res.primary}")


def _common(f):
    """Output, seed, tolerance, thread and --expect options shared by every leaf command."""

    @click.option("--out", "out", default=None, help="Output path (.json, .jsonl, .csv, .svg); stdout if omitted.")
    @click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
    @click.option("--expect", default=None, help="Expected primary value; a mismatch exits 3.")
    @click.option("--seed", type=int, default=0, show_default=True)
    @click.option("--tol", type=float, default=None, help="Numerical tolerance (command default if omitted).")
    @click.option("--threads", type=int, default=None, help="Worker threads (default $HFORGE_THREADS or 1).")
    @click.option("--long-run", is_flag=True, help="Lift size guards for long computations.")
    @click.pass_context
    @functools.wraps(f)
    def wrapper(ctx, out, fmt, expect, seed, tol, threads, long_run, **kw):
        if threads is not None and threads < 1:
            raise click.BadParameter("must be >= 1", param_hint="--threads")
        cfg = RunConfig(
            command=ctx.command_path,
            d=kw.get("d"),
            p=kw.get("p"),
            n=kw.get("n") or 1,
            eigenspace=kw.get("eigenspace"),
            theta=kw.get("theta"),
            tol=tol,
            seed=seed,
            threads=threads or _default_threads(),
            long_run=long_run,
            out=out,
            fmt=fmt,
            expect=expect,
            argv=list(ctx.obj or []),
        )
        _emit(cfg, f(cfg, **kw))

    return wrapper


def _pn(f):
    f = click.option("--n", type=int, default=1, show_default=True, help="Field degree, d = p^n.")(f)
    return click.option("--p", type=int, required=True, help="Characteristic.")(f)


def _field(cfg: RunConfig):
    from .finitefield import field_create

    return field_create(cfg.p, cfg.n)


def _parse_matrix(F, text: str | None):
    from .clifford import Mat2

    if text is None:
        return None
    try:
        a, b, c, d = (int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter("expected four comma-separated field indices a,b,c,d") from None
    for x in (a, b, c, d):
        if not 0 <= x < F.q:
            raise click.BadParameter(f"entry {x} is not a field index below {F.q}")
    return Mat2(F, a, b, c, d)


def _mat_json(G) -> list[list[int]]:
    return [[G.a, G.b], [G.c, G.d]]


def _vec_rows(v: np.ndarray) -> list[dict]:
    return [{"index": j, "re": z.real, "im": z.imag} for j, z in enumerate(v)]


# ---------------------------------------------------------------- commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="hforge")
def main():
    """Weyl-Heisenberg, Clifford, MUB-cycler, SIC and dependency tools."""


@main.group("field")
def field_grp():
    """Finite fields F_{p^n}."""


@field_grp.command("info")
@_pn
@_common
def field_info(cfg, p, n):
    from .finitefield import quad_ext

    F = _field(cfg)
    rows = [
        {
            "index": a,
            "coeffs": list(F.coeffs(a)),
            "log": None if a == 0 else int(F.log_table[a]),
            "trace": F.trace_idx(a),
            "legendre": F.legendre_idx(a),
        }
        for a in range(F.q)
    ]
    summary = {"p": F.p, "n": F.n, "q": F.q, "modulus": list(F.modulus), "primitive": F.theta}
    if F.p != 2:
        qe = quad_ext(F)
        summary["extension"] = {"q": qe.ext.q, "modulus": list(qe.ext.modulus), "eta": qe.eta, "i_M": qe.i_M}
    return Outcome(summary, F.q, rows)


@main.group("mub")
def mub_grp():
    """Standard mutually unbiased bases."""


@mub_grp.command("build")
@_pn
@_common
def mub_build(cfg, p, n):
    from .clifford import mub_standard

    F = _field(cfg)
    mubs = mub_standard(F)
    res = mubs.exact_unbiasedness_residuals()
    ok = all(r.is_zero() for r in res)
    rows = []
    for b in mubs.labels:
        B = mubs.basis(b)
        for v in range(F.q):
            for j in range(F.q):
                rows.append({"basis": str(b), "v": v, "component": j, "re": B[j, v].real, "im": B[j, v].imag})
    return Outcome({"d": F.q, "bases": len(mubs.labels), "labels": [str(b) for b in mubs.labels], "unbiased": ok}, ok, rows)


@main.group("zauner")
def zauner_grp():
    """Zauner unitary."""


@zauner_grp.command("spectrum")
@click.option("--d", type=click.IntRange(2, 64), required=True)
@_common
def zauner_spectrum(cfg, d):
    from .clifford import zauner

    Z = zauner(d)
    rows = []
    for lab, B in Z.eigenspaces.items():
        for k in range(B.shape[1]):
            for j in range(d):
                rows.append({"eigenspace": lab, "vector": k, "component": j, "re": B[j, k].real, "im": B[j, k].imag})
    dims = dict(zip(("H1", "Heta", "Heta2"), Z.dims))
    order3 = bool(np.allclose(np.linalg.matrix_power(Z.unitary, 3), np.eye(d), atol=1e-10))
    return Outcome({"d": d, "dims": dims, "order_three": order3}, list(Z.dims), rows)


# ---------------------------------------------------------------- lindep


@main.group("lindep")
def lindep_grp():
    """Linear dependencies in WH orbits of Zauner eigenvectors."""


def _lindep_options(f):
    f = click.option("--theta", type=float, default=0.0, show_default=True, help="d=3 family angle for --source sic3.")(f)
    f = click.option(
        "--source",
        type=click.Choice(["generic", "sic", "sic3"]),
        default="generic",
        show_default=True,
        help="generic eigenspace vector, a searched SIC fiducial, or the d=3 family member.",
    )(f)
    f = click.option("--eigenspace", type=click.Choice(["H1", "Heta", "Heta2"]), default="H1", show_default=True)(f)
    return click.option("--d", type=click.IntRange(2, 9), required=True)(f)


def _lindep_context(cfg: RunConfig, d: int, eigenspace: str, source: str, theta: float):
    from .lindep import context_from_vector, make_context

    if source == "generic":
        return make_context(d, eigenspace, seed=cfg.seed)
    if source == "sic3":
        from .sictools import sic3_family

        if d != 3:
            raise click.BadParameter("sic3 needs --d 3", param_hint="--source")
        return context_from_vector(sic3_family(theta).vectors[0])
    from .sictools import sic_search

    r = sic_search(d, seed=cfg.seed, restarts=50, zauner_subspace=True, stop_early=True)
    if not r.success:
        raise click.ClickException(f"no SIC fiducial found in d={d}")
    return context_from_vector(r.fiducial)


def _dep_sets(cfg: RunConfig, ctx, partial_ok: bool = True):
    from .lindep import DEP_TOL, exhaustive_search, invariant_search, m_matrix

    tol = cfg.tol or DEP_TOL
    if ctx.d == 9:
        if not cfg.long_run:
            raise GuardExceeded("d=9 targeted search is a long run; pass --long-run")
        z = invariant_search(ctx, (0, -1, 1, -1), tol)
        m = invariant_search(ctx, m_matrix(9), tol)
        merged = {s.indices: s for s in z + m}
        return [merged[k] for k in sorted(merged)], True
    return exhaustive_search(ctx, tol, workers=cfg.threads, long_run=cfg.long_run), False


@lindep_grp.command("search")
@_lindep_options
@click.option("--sets", "sets_path", default=None, help="Write one dependent set per line (JSON-lines).")
@_common
def lindep_search(cfg, d, eigenspace, source, theta, sets_path):
    from collections import Counter

    from .lindep import predicted_sets

    ctx = _lindep_context(cfg, d, eigenspace, source, theta)
    sets, partial = _dep_sets(cfg, ctx)
    summary = {
        "d": d,
        "eigenspace": ctx.label,
        "source": source,
        "seed": cfg.seed if source == "generic" else None,
        "count": len(sets),
        "ranks": {str(k): v for k, v in sorted(Counter(s.rank for s in sets).items())},
        "partial": partial,
    }
    if ctx.label is not None:
        pred = {s.indices for s in predicted_sets(ctx)}
        summary["predicted"] = len(pred)
        summary["predicted_found"] = partial or pred <= {s.indices for s in sets}
    rows = [s.to_json() for s in sets]
    res = Outcome(summary, len(sets), rows)
    if sets_path:
        res.extra[sets_path] = jsonl(rows)
    return res


@lindep_grp.command("predict")
@_lindep_options
@_common
def lindep_predict(cfg, d, eigenspace, source, theta):
    from .lindep import predicted_sets

    ctx = _lindep_context(cfg, d, eigenspace, source, theta)
    sets = predicted_sets(ctx)
    return Outcome({"d": d, "eigenspace": ctx.label, "count": len(sets)}, len(sets), [s.to_json() for s in sets])


@lindep_grp.command("orbits")
@_lindep_options
@_common
def lindep_orbits(cfg, d, eigenspace, source, theta):
    from .lindep import incidence, orbit_grouping

    ctx = _lindep_context(cfg, d, eigenspace, source, theta)
    sets, partial = _dep_sets(cfg, ctx)
    summ = orbit_grouping(sets, d)
    per_point, _ = incidence(sets, d)
    rows = [
        {"orbit": k, "length": len(o), "z_invariant": summ.z_invariant[k], "m_invariant": summ.m_invariant[k], "representative": [list(divmod(i, d)) for i in o[0]]}
        for k, o in enumerate(summ.orbits)
    ]
    summary = summ.to_json() | {"sets": len(sets), "sets_per_point": {str(k): v for k, v in per_point.items()}, "partial": partial}
    summary["short_orbit_stabilizers"] = {str(k): [list(u) for u in v] for k, v in summ.short_stabilizers.items()}
    return Outcome(summary, summ.count, rows)


@lindep_grp.command("normals")
@_lindep_options
@_common
def lindep_normals(cfg, d, eigenspace, source, theta):
    from .lindep import hesse_check, normals_and_orthogonality, orbit_grouping

    ctx = _lindep_context(cfg, d, eigenspace, source, theta)
    sets, _ = _dep_sets(cfg, ctx)
    summ = orbit_grouping(sets, d)
    rep = normals_and_orthogonality(sets, ctx)
    quad_orbits = sorted({sets[rep.set_index[i]].tags["orbit"] for q in rep.quadruples for i in q})
    summary = {
        "d": d,
        "normals": len(rep.normals),
        "skipped": len(rep.skipped),
        "orthogonal_pairs": rep.orthogonal_pairs,
        "triples": len(rep.triples),
        "free_triples": rep.free_triples,
        "quadruples": len(rep.quadruples),
        "quadruple_orbits": [{"orbit": k, "length": len(summ.orbits[k])} for k in quad_orbits],
        "mub": rep.mub,
    }
    if d == 3:
        summary["hesse"] = hesse_check(sets)
    rows = [{"set": list(sets[k].indices), "normal": rep.normals[i]} for i, k in enumerate(rep.set_index)]
    return Outcome(summary, len(rep.quadruples), rows)


# ---------------------------------------------------------------- sic


@main.group("sic")
def sic_grp():
    """SIC verification, the d=3 family, K_t and fiducial search."""


@sic_grp.command("family")
@click.option("--theta", type=float, required=True)
@_common
def sic_family(cfg, theta):
    from .sictools import dependent_triples, is_sic, sic3_family

    c = sic3_family(theta)
    tol = cfg.tol or 1e-10
    trip = dependent_triples(c.vectors)
    rows = [{"index": i, "vector": v} for i, v in enumerate(c.vectors)]
    return Outcome({"theta": theta, "is_sic": is_sic(c, tol), "dependent_triples": len(trip), "triples": trip}, len(trip), rows)


def _read_vector(path: str) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data.get("fiducial")
    try:
        v = np.array([complex(a, b) for a, b in data])
    except (TypeError, ValueError):
        raise click.BadParameter("expected a list of [re, im] pairs or an object with a 'fiducial' list") from None
    if v.size < 2:
        raise click.BadParameter("vector too short")
    return v


@sic_grp.command("verify")
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@_common
def sic_verify(cfg, path):
    from .sictools import is_sic

    psi = _read_vector(path)
    ok = is_sic(psi, cfg.tol or 1e-9)
    return Outcome({"d": psi.size, "is_sic": ok}, ok)


@sic_grp.command("search")
@click.option("--d", type=click.IntRange(2, 8), required=True)
@click.option("--restarts", type=click.IntRange(1, 10_000), default=50, show_default=True)
@click.option("--zauner", is_flag=True, help="Restrict to the H1 Zauner eigenspace.")
@_common
def sic_search_cmd(cfg, d, restarts, zauner):
    from .sictools import sic_search

    r = sic_search(d, seed=cfg.seed, restarts=restarts, zauner_subspace=zauner, tol=cfg.tol or 1e-9)
    summary = {
        "d": d,
        "success": r.success,
        "objective": r.objective,
        "target": r.target,
        "error": r.objective - r.target,
        "winner": r.winner,
        "restarts": restarts,
        "fiducial": None if r.fiducial is None else r.fiducial,
    }
    return Outcome(summary, r.success, None if r.fiducial is None else _vec_rows(r.fiducial))


@sic_grp.command("kt")
@click.option("--theta", type=float, default=0.0, show_default=True)
@click.option("--t", "t", type=float, default=2.0, show_default=True)
@_common
def sic_kt(cfg, theta, t):
    from .sictools import kt_measure, projectors, sic3_family

    rep = kt_measure(projectors(sic3_family(theta).vectors), t, cfg.tol or 1e-9)
    return Outcome({"theta": theta, "t": t, "value": rep.value, "bound": rep.bound, "saturated": rep.saturated}, rep.value)


# ---------------------------------------------------------------- g-unitaries


@main.group("gu")
def gu_grp():
    """Galois-unitaries for GL_p(2, F_d)."""


@gu_grp.command("compose")
@_pn
@click.option("--g1", required=True, help="a,b,c,d field indices.")
@click.option("--g2", required=True, help="a,b,c,d field indices.")
@_common
def gu_compose_cmd(cfg, p, n, g1, g2):
    from .gunitary import gu_compose, gu_new, gu_sign

    F = _field(cfg)
    G1, G2 = _parse_matrix(F, g1), _parse_matrix(F, g2)
    U = gu_compose(gu_new(G1), gu_new(G2))
    sign = gu_sign(U)
    return Outcome({"d": F.q, "product": _mat_json(U.G), "sign": sign, "galois_k": U.gal.k}, sign)


@gu_grp.command("apply")
@_pn
@click.option("--matrix", "mat", required=True, help="a,b,c,d field indices.")
@_common
def gu_apply_cmd(cfg, p, n, mat):
    from .gunitary import gu_apply, gu_new, random_cyclo_vector

    F = _field(cfg)
    U = gu_new(_parse_matrix(F, mat))
    v = random_cyclo_vector(F.q, F.p, np.random.default_rng(cfg.seed))
    w = gu_apply(U, v)
    out = w.to_complex()
    summary = {"d": F.q, "matrix": _mat_json(U.G), "delta": U.delta, "antiunitary": U.is_antiunitary(), "input": v.to_complex(), "output": out}
    # U_S is unitary, so |U v|^2 = g(|v|^2) exactly
    norm_ok = w.norm2() == v.norm2().galois(U.gal.k)
    summary["norm_relation"] = norm_ok
    return Outcome(summary, norm_ok, _vec_rows(out))


@gu_grp.command("embed")
@_pn
@click.option("--matrix", "mat", required=True, help="a,b,c,d field indices.")
@_common
def gu_embed_cmd(cfg, p, n, mat):
    from .gunitary import gu_apply, gu_embed_roundtrip, gu_new, random_cyclo_vector

    F = _field(cfg)
    U = gu_new(_parse_matrix(F, mat))
    v = random_cyclo_vector(F.q, F.p, np.random.default_rng(cfg.seed))
    ok = gu_embed_roundtrip(U, v) == gu_apply(U, v)
    return Outcome({"d": F.q, "matrix": _mat_json(U.G), "embedding_dim": F.p * F.q, "agrees": ok}, ok)


# ---------------------------------------------------------------- cyclers


@main.group("cycler")
def cycler_grp():
    """MUB-cyclers and MUB-balanced states."""


def _g_or_canonical(F, mat):
    from .mubcycler import cycler_canonical

    G = _parse_matrix(F, mat)
    return G if G is not None else cycler_canonical(F)[0]


@cycler_grp.command("classify")
@_pn
@click.option("--matrix", "mat", default=None, help="a,b,c,d field indices (default: canonical G0).")
@_common
def cycler_classify(cfg, p, n, mat):
    from .mubcycler import matrix_order, mobius_orbit, suborder_classify

    F = _field(cfg)
    G = _g_or_canonical(F, mat)
    r = suborder_classify(G)
    summary = {
        "d": F.q,
        "matrix": _mat_json(G),
        "type": r.type,
        "suborder": r.suborder,
        "r": r.r,
        "is_cycler": r.is_cycler,
        "m0": r.m0,
        "order": matrix_order(G),
        "mobius_orbit": [str(b) for b in mobius_orbit(G)],
    }
    return Outcome(summary, r.is_cycler)


@cycler_grp.command("enumerate")
@_pn
@click.option("--samples", type=click.IntRange(0, 1000), default=5, show_default=True)
@_common
def cycler_enumerate(cfg, p, n, samples):
    from .mubcycler import enumerate_cyclers

    F = _field(cfg)
    scan = enumerate_cyclers(F, samples=samples, workers=cfg.threads)
    summary = {"d": F.q, "count": scan.count, "scanned": scan.scanned, "antisymplectic": scan.antisymplectic, "samples": [_mat_json(G) for G in scan.samples]}
    return Outcome(summary, scan.count, [{"a": G.a, "b": G.b, "c": G.c, "d": G.d} for G in scan.samples])


@cycler_grp.command("eigvec")
@_pn
@click.option("--matrix", "mat", default=None, help="a,b,c,d field indices (default: canonical G0).")
@_common
def cycler_eigvec(cfg, p, n, mat):
    from .mubcycler import cycler_eigenvector

    F = _field(cfg)
    st = cycler_eigenvector(_g_or_canonical(F, mat))
    v = st.normalized()
    return Outcome({"d": F.q, "matrix": _mat_json(st.G), "nullity": st.nullity, "parity": st.parity, "vector": v}, st.parity, _vec_rows(v))


@cycler_grp.command("balanced")
@_pn
@_common
def cycler_balanced(cfg, p, n):
    from .exactmath import to_complex
    from .mubcycler import cycler_canonical, cycler_eigenvector, verify_balanced

    F = _field(cfg)
    G, exists = cycler_canonical(F)
    if not exists:
        raise click.ClickException(f"no MUB-cycler for d={F.q}")
    st = cycler_eigenvector(G)
    rep = verify_balanced(st.psi, F)
    rows = [{"basis": str(b), "probabilities": [to_complex(x).real for x in ms]} for b, ms in rep.multisets.items()]
    return Outcome({"d": F.q, "balanced": rep.balanced, "mus": rep.mus, "parity": st.parity}, rep.balanced, rows)


@cycler_grp.command("orbit")
@_pn
@click.option("--method", type=click.Choice(["bfs", "wigner"]), default="bfs", show_default=True)
@_common
def cycler_orbit(cfg, p, n, method):
    from .mubcycler import balanced_orbit_count, conjectured_balanced_count

    F = _field(cfg)
    if F.q > 11 and not cfg.long_run:
        raise GuardExceeded(f"orbit count for d={F.q} is a long run; pass --long-run")
    count = balanced_orbit_count(F, method=method)
    return Outcome({"d": F.q, "method": method, "count": count, "conjectured": conjectured_balanced_count(F.q)}, count)


@cycler_grp.command("wigner")
@_pn
@_common
def cycler_wigner(cfg, p, n):
    from .mubcycler import balanced_wigner

    F = _field(cfg)
    ws = balanced_wigner(F)
    d = F.q
    rows = [{"p1": a, "p2": b, "w": ws.grid[a, b]} for a in range(d) for b in range(d)]
    summary = {"d": d, "rank": ws.rank, "invariant": ws.invariant, "covariant": ws.covariant, "total": float(ws.grid.sum()), "rotation": _mat_json(ws.G)}
    svg = heatmap_svg(ws.grid, [str(i) for i in range(d)], [str(j) for j in range(d)], f"balanced Wigner function, d={d}")
    return Outcome(summary, ws.rank, rows, svg)


# ---------------------------------------------------------------- entry points


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        main.main(args=argv, prog_name="hforge", standalone_mode=False, obj=argv)
    except ExpectMismatch as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_MISMATCH
    except GuardExceeded as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_GUARD
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return EXIT_INVALID
    except click.ClickException as e:
        e.show()
        return EXIT_INVALID
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INVALID
    return EXIT_OK


def entry() -> None:
    sys.exit(run())
