"""Workspace files and the command line front end.

A workspace is a JSON file fixing a field, a truncated polynomial algebra
k[x]/(x^m), a tensor length N, and a dictionary of named objects: modules,
N-complexes, chains of monomorphisms, chain maps.  Each command loads a
workspace, runs one computation, prints a short text summary, and can
write a JSON report.  Reports are byte-identical across reruns with the
same inputs and flags.

Matrix entries are plain integers over a prime field and "a/b" strings
over the rationals.  Matrices are stored row-major, one row per list,
with the row count equal to the target dimension.
"""

import argparse
import json
import sys
from fractions import Fraction

from .derived import (
    CutoffExhausted,
    PlateauNotReached,
    buchweitz_verify,
    ext,
    hom_sing,
    is_perfect,
    tate_hom,
)
from .exactla import GF, PRIME_FIELD, QQ, RATIONALS, Mat
from .homotopy import BudgetExceeded, cone
from .modcat import Algebra, ModMap, Module, jordan_type
from .ncx import ChainMap, NComplex, homology, is_acyclic_at
from .resolve import (
    MonChain,
    complete_resolution,
    find_monchain_isomorphism,
    projective_resolution,
    syzygy_Omega,
)

DEFAULT_BUDGET = 4096


class WorkspaceError(ValueError):
    """A workspace file failed to parse or violated a structural invariant."""


class Workspace:
    """A field, an algebra k[x]/(x^m), a tensor length N, and named objects.

    objects maps names to Module, NComplex, MonChain, or ChainMap values.
    chainmap_refs remembers, for each chain map, which named complexes it
    runs between, so saving can write names instead of copies.
    """

    __slots__ = ("field", "algebra", "N", "objects", "chainmap_refs")

    def __init__(self, field, algebra, N, objects=None, chainmap_refs=None):
        self.field = field
        self.algebra = algebra
        self.N = N
        self.objects = dict(objects) if objects else {}
        self.chainmap_refs = dict(chainmap_refs) if chainmap_refs else {}

    def __eq__(self, other):
        return (
            isinstance(other, Workspace)
            and self.field == other.field
            and self.algebra == other.algebra
            and self.N == other.N
            and self.objects == other.objects
            and self.chainmap_refs == other.chainmap_refs
        )

    def __repr__(self):
        return f"Workspace(m={self.algebra.m}, N={self.N}, {len(self.objects)} objects)"


# ------------------------------------------------------------ entry codecs


def _dec_entry(field, value, where):
    if field.kind == PRIME_FIELD:
        if not isinstance(value, int) or isinstance(value, bool):
            raise WorkspaceError(f"parse-error at {where}: expected an integer entry, got {value!r}")
        if not 0 <= value < field.p:
            raise WorkspaceError(f"parse-error at {where}: entry {value} outside 0..{field.p - 1}")
        return field.coerce(value)
    if not isinstance(value, str):
        raise WorkspaceError(f"parse-error at {where}: rational entries are 'a/b' strings, got {value!r}")
    num, sep, den = value.partition("/")
    if not sep:
        raise WorkspaceError(f"parse-error at {where}: rational entries are 'a/b' strings, got {value!r}")
    try:
        n, d = int(num), int(den)
    except ValueError:
        raise WorkspaceError(f"parse-error at {where}: bad rational {value!r}") from None
    if d == 0:
        raise WorkspaceError(f"parse-error at {where}: zero denominator")
    return Fraction(n, d)


def _enc_entry(field, value):
    if field.kind == PRIME_FIELD:
        return int(value)
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def _dec_mat(field, rows, target_dim, source_dim, where):
    # target_dim and source_dim come from context, so zero-dimensional
    # matrices survive a round trip even though their row lists are empty
    if not isinstance(rows, list):
        raise WorkspaceError(f"parse-error at {where}: expected a list of rows")
    if len(rows) != target_dim:
        raise WorkspaceError(f"parse-error at {where}: expected {target_dim} rows, got {len(rows)}")
    if target_dim == 0 or source_dim == 0:
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != source_dim:
                raise WorkspaceError(f"parse-error at {where}[{i}]: expected {source_dim} entries")
        return Mat.zeros(field, target_dim, source_dim)
    dec = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != source_dim:
            raise WorkspaceError(f"parse-error at {where}[{i}]: expected {source_dim} entries")
        dec.append([_dec_entry(field, v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return Mat.from_rows(field, dec)


def _enc_mat(field, mat):
    return [[_enc_entry(field, v) for v in row] for row in mat.to_rows()]


# ------------------------------------------------------------ object codecs


def _need(spec, key, where, kind=None):
    if not isinstance(spec, dict) or key not in spec:
        raise WorkspaceError(f"parse-error at {where}: missing field {key!r}")
    value = spec[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise WorkspaceError(f"parse-error at {where}.{key}: expected {kind.__name__}")
    return value


def _dec_module(algebra, spec, where):
    dim = _need(spec, "dim", where, int)
    if dim < 0:
        raise WorkspaceError(f"parse-error at {where}.dim: negative dimension")
    action = _dec_mat(algebra.field, _need(spec, "action", where), dim, dim, f"{where}.action")
    try:
        return Module(algebra, action)
    except ValueError as e:
        raise WorkspaceError(f"invariant-violation at {where}: {e}") from None


def _enc_module(field, mod):
    return {"kind": "module", "dim": mod.dim, "action": _enc_mat(field, mod.action)}


def _dec_ncomplex(algebra, N, spec, where):
    lo = _need(spec, "lo", where, int)
    mod_specs = _need(spec, "objects", where, list)
    mods = [_dec_module(algebra, s, f"{where}.objects[{i}]") for i, s in enumerate(mod_specs)]
    diff_specs = _need(spec, "diffs", where, list)
    if len(diff_specs) != max(0, len(mods) - 1):
        raise WorkspaceError(
            f"parse-error at {where}.diffs: {len(mods)} objects need "
            f"{max(0, len(mods) - 1)} differentials, got {len(diff_specs)}"
        )
    diffs = []
    for i, rows in enumerate(diff_specs):
        mat = _dec_mat(algebra.field, rows, mods[i + 1].dim, mods[i].dim, f"{where}.diffs[{i}]")
        try:
            diffs.append(ModMap(mods[i], mods[i + 1], mat))
        except ValueError as e:
            raise WorkspaceError(f"invariant-violation at {where}.diffs[{i}]: {e}") from None
    try:
        return NComplex(algebra, N, lo, mods, diffs)
    except ValueError as e:
        raise WorkspaceError(f"invariant-violation at {where}: {e}") from None


def _enc_ncomplex(field, x):
    mods = [x.obj(k) for k in range(x.lo, x.hi + 1)]
    return {
        "kind": "ncomplex",
        "lo": x.lo,
        "objects": [_enc_module(field, m) for m in mods],
        "diffs": [_enc_mat(field, x.diff(k).mat) for k in range(x.lo, x.hi)],
    }


def _dec_monchain(algebra, N, spec, where):
    mod_specs = _need(spec, "objects", where, list)
    mods = [_dec_module(algebra, s, f"{where}.objects[{i}]") for i, s in enumerate(mod_specs)]
    monic_specs = _need(spec, "monics", where, list)
    if len(monic_specs) != max(0, len(mods) - 1):
        raise WorkspaceError(
            f"parse-error at {where}.monics: {len(mods)} levels need "
            f"{max(0, len(mods) - 1)} structure maps, got {len(monic_specs)}"
        )
    monics = []
    for i, rows in enumerate(monic_specs):
        mat = _dec_mat(algebra.field, rows, mods[i + 1].dim, mods[i].dim, f"{where}.monics[{i}]")
        try:
            monics.append(ModMap(mods[i], mods[i + 1], mat))
        except ValueError as e:
            raise WorkspaceError(f"invariant-violation at {where}.monics[{i}]: {e}") from None
    try:
        return MonChain(algebra, N, mods, monics)
    except ValueError as e:
        raise WorkspaceError(f"invariant-violation at {where}: {e}") from None


def _enc_monchain(field, ch):
    return {
        "kind": "monchain",
        "objects": [_enc_module(field, m) for m in ch.objects],
        "monics": [_enc_mat(field, f.mat) for f in ch.monics],
    }


def _dec_chainmap(ws, spec, where):
    src_name = _need(spec, "source", where, str)
    tgt_name = _need(spec, "target", where, str)
    for nm in (src_name, tgt_name):
        if nm not in ws.objects:
            raise WorkspaceError(f"unknown-name at {where}: {nm!r}")
        if not isinstance(ws.objects[nm], NComplex):
            raise WorkspaceError(f"parse-error at {where}: {nm!r} is not an ncomplex")
    src, tgt = ws.objects[src_name], ws.objects[tgt_name]
    lo = _need(spec, "lo", where, int)
    comp_specs = _need(spec, "comps", where, list)
    comps = {}
    for i, rows in enumerate(comp_specs):
        k = lo + i
        mat = _dec_mat(ws.field, rows, tgt.obj(k).dim, src.obj(k).dim, f"{where}.comps[{i}]")
        try:
            comps[k] = ModMap(src.obj(k), tgt.obj(k), mat)
        except ValueError as e:
            raise WorkspaceError(f"invariant-violation at {where}.comps[{i}]: {e}") from None
    try:
        return ChainMap(src, tgt, comps), (src_name, tgt_name)
    except ValueError as e:
        raise WorkspaceError(f"invariant-violation at {where}: {e}") from None


def _enc_chainmap(field, f, refs):
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    return {
        "kind": "chainmap",
        "source": refs[0],
        "target": refs[1],
        "lo": lo,
        "comps": [_enc_mat(field, f.comp(k).mat) for k in range(lo, hi + 1)],
    }


# ------------------------------------------------------------ load and save


def loads(text: str) -> Workspace:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise WorkspaceError(f"parse-error at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(raw, dict):
        raise WorkspaceError("parse-error at top level: expected an object")
    fspec = _need(raw, "field", "top level")
    fkind = _need(fspec, "kind", "field", str)
    if fkind == "Q":
        field = QQ
    elif fkind == "Fp":
        field = GF(_need(fspec, "p", "field", int))
    else:
        raise WorkspaceError(f"parse-error at field.kind: expected 'Q' or 'Fp', got {fkind!r}")
    m = _need(_need(raw, "algebra", "top level"), "m", "algebra", int)
    if m < 1:
        raise WorkspaceError("parse-error at algebra.m: m must be >= 1")
    N = _need(raw, "N", "top level", int)
    if N < 2:
        raise WorkspaceError(f"parse-error at N: N must be >= 2, got {N}")
    algebra = Algebra(field, m)
    ws = Workspace(field, algebra, N)
    obj_specs = _need(raw, "objects", "top level")
    if not isinstance(obj_specs, dict):
        raise WorkspaceError("parse-error at objects: expected a name -> object map")
    deferred = []
    for name, spec in obj_specs.items():
        where = f"objects.{name}"
        kind = _need(spec, "kind", where, str)
        if kind == "module":
            ws.objects[name] = _dec_module(algebra, spec, where)
        elif kind == "ncomplex":
            ws.objects[name] = _dec_ncomplex(algebra, N, spec, where)
        elif kind == "monchain":
            ws.objects[name] = _dec_monchain(algebra, N, spec, where)
        elif kind == "chainmap":
            deferred.append((name, spec, where))
        else:
            raise WorkspaceError(f"parse-error at {where}.kind: unknown kind {kind!r}")
    for name, spec, where in deferred:
        ws.objects[name], ws.chainmap_refs[name] = _dec_chainmap(ws, spec, where)
    return ws


def load(path: str) -> Workspace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise WorkspaceError(f"cannot read {path}: {e}") from None
    return loads(text)


def saves(ws: Workspace) -> str:
    field = ws.field
    if field.kind == PRIME_FIELD:
        fspec = {"kind": "Fp", "p": field.p}
    else:
        fspec = {"kind": "Q"}
    objects = {}
    for name in sorted(ws.objects):
        obj = ws.objects[name]
        if isinstance(obj, Module):
            objects[name] = _enc_module(field, obj)
        elif isinstance(obj, NComplex):
            objects[name] = _enc_ncomplex(field, obj)
        elif isinstance(obj, MonChain):
            objects[name] = _enc_monchain(field, obj)
        elif isinstance(obj, ChainMap):
            refs = ws.chainmap_refs.get(name)
            if refs is None:
                raise WorkspaceError(f"chain map {name!r} has no named source and target")
            objects[name] = _enc_chainmap(field, obj, refs)
        else:
            raise WorkspaceError(f"cannot save object {name!r} of type {type(obj).__name__}")
    doc = {"field": fspec, "algebra": {"m": ws.algebra.m}, "N": ws.N, "objects": objects}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def save(ws: Workspace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(saves(ws))


# ------------------------------------------------------------ command helpers


_KIND_LABELS = {
    Module: "module",
    NComplex: "ncomplex",
    MonChain: "monchain",
    ChainMap: "chainmap",
}


def _get(ws, name, want):
    if name not in ws.objects:
        raise WorkspaceError(f"unknown-name: {name!r}")
    obj = ws.objects[name]
    if not isinstance(obj, want):
        raise WorkspaceError(f"{name!r} is a {_KIND_LABELS[type(obj)]}, expected {_KIND_LABELS[want]}")
    return obj


def _budget(args):
    return args.budget if args.budget is not None else DEFAULT_BUDGET


def _window_dims(x):
    return {str(k): x.obj(k).dim for k in range(x.lo, x.hi + 1)}


def _cmd_homology(ws, args):
    x = _get(ws, args.name, NComplex)
    N = x.N
    if args.at is not None:
        r = args.amp if args.amp is not None else 1
        d = homology(x, args.at, r).dim
        return [f"H^{args.at} amplitude {r}: dim {d}"], {"dims": {f"{args.at},{r}": d}}, 0
    dims = {}
    lines = [f"homology of {args.name!r}, degrees {x.lo}..{x.hi}, amplitudes 1..{N - 1}"]
    for n in range(x.lo, x.hi + 1):
        row = []
        for r in range(1, N):
            d = homology(x, n, r).dim
            dims[f"{n},{r}"] = d
            row.append(str(d))
        lines.append(f"n={n}: " + " ".join(row))
    return lines, {"dims": dims}, 0


def _cmd_acyclic(ws, args):
    x = _get(ws, args.name, NComplex)
    verdict = all(is_acyclic_at(x, n) for n in range(x.lo - x.N + 1, x.hi + x.N))
    word = "true" if verdict else "false"
    return [f"acyclic: {word}"], {"acyclic": verdict}, 0 if verdict else 1


def _cmd_cone(ws, args):
    f = _get(ws, args.name, ChainMap)
    c = cone(f)
    lines = [f"cone of {args.name!r}: window [{c.lo}, {c.hi}]"]
    lines += [f"n={k}: dim {c.obj(k).dim}" for k in range(c.lo, c.hi + 1)]
    return lines, {"lo": c.lo, "hi": c.hi, "dims": _window_dims(c)}, 0


def _cmd_resolve(ws, args):
    x = _get(ws, args.name, NComplex)
    p, aug = projective_resolution(x)
    lines = [f"resolution of {args.name!r}: window [{p.lo}, {p.hi}], termwise free"]
    lines += [f"n={k}: dim {p.obj(k).dim}" for k in range(p.lo, p.hi + 1)]
    results = {"lo": p.lo, "hi": p.hi, "dims": _window_dims(p), "termwise_free": True}
    return lines, results, 0


def _cmd_syzygy(ws, args):
    x = _get(ws, args.name, NComplex)
    ch = syzygy_Omega(x, args.n)
    levels = []
    lines = [f"syzygy of {args.name!r} at degree {args.n}: {ch.N - 1} levels"]
    for r in range(1, ch.N):
        lv = ch.level(r)
        jt = list(jordan_type(lv))
        levels.append({"dim": lv.dim, "jordan": jt})
        lines.append(f"level {r}: dim {lv.dim}, jordan {jt}")
    return lines, {"levels": levels}, 0


def _cmd_complete_res(ws, args):
    ch = _get(ws, args.name, MonChain)
    cap = args.window_cap
    lazy = complete_resolution(ch, depth_left=cap, depth_right=cap, cap=cap)
    core = lazy.complex()
    a, b = lazy.certified_range
    match = find_monchain_isomorphism(lazy.syzygy_chain(), ch, budget=_budget(args))
    recovered = match is not None
    lines = [
        f"complete resolution of {args.name!r}: window [{core.lo}, {core.hi}]",
        f"certified acyclic on [{a}, {b}]",
        f"syzygy chain recovers input: {'true' if recovered else 'false'}",
    ]
    results = {
        "lo": core.lo,
        "hi": core.hi,
        "dims": _window_dims(core),
        "certified": [a, b],
        "syzygy_recovered": recovered,
    }
    return lines, results, 0


def _cmd_ext(ws, args):
    x = _get(ws, args.name, NComplex)
    y = _get(ws, args.other, NComplex)
    d = ext(x, y, args.n)
    return [f"ext^{args.n}({args.name!r}, {args.other!r}) = {d}"], {"dim": d}, 0


def _cmd_perfect(ws, args):
    x = _get(ws, args.name, NComplex)
    dec = is_perfect(x, cutoff=args.window_cap, iso_budget=_budget(args))
    word = "true" if dec.perfect else "false"
    lines = [f"perfect: {word}"]
    results = {"perfect": dec.perfect, "steps": dec.steps}
    if dec.perfect:
        results["position"] = dec.position
        if dec.position is not None:
            lines.append(f"syzygies vanish from degree {dec.position}")
    else:
        results["position"] = dec.position
        results["repeat_of"] = dec.repeat_of
        lines.append(f"syzygy at degree {dec.position} repeats the one at {dec.repeat_of}")
    return lines, results, 0


def _cmd_sing_hom(ws, args):
    x = _get(ws, args.name, NComplex)
    y = _get(ws, args.other, NComplex)
    ss = hom_sing(x, y, iso_budget=_budget(args))
    lines = [
        f"singular hom({args.name!r}, {args.other!r}): dim {ss.dim}",
        f"derived dim {ss.hom.dim}, factored rank {ss.mask_rank}",
    ]
    results = {
        "dim": ss.dim,
        "derived_dim": ss.hom.dim,
        "mask_rank": ss.mask_rank,
        "cutoff": ss.cutoff,
    }
    return lines, results, 0


def _cmd_buchweitz(ws, args):
    x = _get(ws, args.name, MonChain)
    y = _get(ws, args.other, MonChain)
    rep = buchweitz_verify(x, y, iso_budget=_budget(args))
    sign = "=" if rep.dims_match else "!="
    verdict = "PASS" if rep.passed else "FAIL"
    lines = [
        f"{verdict} {rep.stable_dim} {sign} {rep.sing_dim}",
        f"collapse quasi-iso: {rep.collapse_quasi_iso}, complement perfect: {rep.complement_perfect}, "
        f"embedding injective: {rep.embedding_injective}",
    ]
    results = {
        "passed": rep.passed,
        "stable_dim": rep.stable_dim,
        "sing_dim": rep.sing_dim,
        "dims_match": rep.dims_match,
        "collapse_quasi_iso": rep.collapse_quasi_iso,
        "complement_perfect": rep.complement_perfect,
        "embedding_injective": rep.embedding_injective,
        "cutoff": rep.cutoff,
    }
    return lines, results, 0 if rep.passed else 1


def _cmd_tate(ws, args):
    x = _get(ws, args.name, MonChain)
    y = _get(ws, args.other, MonChain)
    d = tate_hom(x, y, args.n)
    return [f"tate^{args.n}({args.name!r}, {args.other!r}) = {d}"], {"dim": d}, 0


_COMMANDS = {
    "homology": _cmd_homology,
    "acyclic": _cmd_acyclic,
    "cone": _cmd_cone,
    "resolve": _cmd_resolve,
    "syzygy": _cmd_syzygy,
    "complete-res": _cmd_complete_res,
    "ext": _cmd_ext,
    "perfect": _cmd_perfect,
    "sing-hom": _cmd_sing_hom,
    "buchweitz": _cmd_buchweitz,
    "tate": _cmd_tate,
}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ws", required=True, help="workspace JSON file")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in the report")
    common.add_argument("--budget", type=int, default=None, help="isomorphism search budget")
    common.add_argument("--window-cap", dest="window_cap", type=int, default=None,
                        help="cap on resolution window depth")
    common.add_argument("--report", default=None, help="write a JSON report to this path")

    parser = argparse.ArgumentParser(prog="nhomalg", description="homological algebra for N-complexes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="amplitude homology table")
    p.add_argument("name")
    p.add_argument("--at", type=int, default=None, help="single degree instead of the full table")
    p.add_argument("--amp", type=int, default=None, help="amplitude, used with --at")

    p = sub.add_parser("acyclic", parents=[common], help="check acyclicity in all amplitudes")
    p.add_argument("name")

    p = sub.add_parser("cone", parents=[common], help="mapping cone of a chain map")
    p.add_argument("name")

    p = sub.add_parser("resolve", parents=[common], help="termwise free resolution")
    p.add_argument("name")

    p = sub.add_parser("syzygy", parents=[common], help="syzygy chain of an acyclic stretch")
    p.add_argument("name")
    p.add_argument("--n", type=int, required=True, help="degree of the syzygy")

    p = sub.add_parser("complete-res", parents=[common], help="complete resolution of a chain of monics")
    p.add_argument("name")

    p = sub.add_parser("ext", parents=[common], help="ext dimension between complexes")
    p.add_argument("name")
    p.add_argument("other")
    p.add_argument("--n", type=int, required=True, help="cohomological degree")

    p = sub.add_parser("perfect", parents=[common], help="decide perfection by syzygy cycling")
    p.add_argument("name")

    p = sub.add_parser("sing-hom", parents=[common], help="hom space in the singularity quotient")
    p.add_argument("name")
    p.add_argument("other")

    p = sub.add_parser("buchweitz", parents=[common], help="stable hom versus singular hom")
    p.add_argument("name")
    p.add_argument("other")

    p = sub.add_parser("tate", parents=[common], help="stabilized ext dimension")
    p.add_argument("name")
    p.add_argument("other")
    p.add_argument("--n", type=int, required=True, help="cohomological degree")

    return parser


def _report_doc(ws, args, results):
    field = {"kind": "Fp", "p": ws.field.p} if ws.field.kind == PRIME_FIELD else {"kind": "Q"}
    params = {}
    for key in ("name", "other", "at", "amp", "n"):
        if hasattr(args, key):
            params[key] = getattr(args, key)
    return {
        "command": args.command,
        "field": field,
        "algebra": {"m": ws.algebra.m},
        "N": ws.N,
        "seed": args.seed,
        "budget": args.budget,
        "window_cap": args.window_cap,
        "params": params,
        "results": results,
    }


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        ws = load(args.ws)
    except WorkspaceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        lines, results, code = _COMMANDS[args.command](ws, args)
    except (WorkspaceError, ValueError, CutoffExhausted, PlateauNotReached, BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    if args.report is not None:
        doc = _report_doc(ws, args, results)
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
