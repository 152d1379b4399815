"""Command-line front door.

Exit status: 0 success or verified, 1 falsified, 2 usage or parse error,
3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence, TextIO

import numpy as np

from . import __version__, arrays, cocycles, designs, excess, groups, ngp, search

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

# quasi-orthogonal search refuses spaces with more candidates than this
MAX_SEARCH_BITS = 34


class UsageError(ValueError):
    pass


class Emitter:
    """Writes a header, records and a summary in the chosen format."""

    def __init__(self, fmt: str, out: TextIO):
        self.fmt = fmt
        self.out = out
        self._csv: csv.DictWriter | None = None

    def header(self, config: dict) -> None:
        head = {"tool": "goba", "version": __version__, "seed": "none: exact computation", **config}
        if self.fmt == "jsonl":
            self._line(json.dumps({"header": head}, sort_keys=True))
        else:
            self._line("# " + " ".join(f"{k}={_flat(v)}" for k, v in sorted(head.items())))

    def record(self, rec: dict) -> None:
        if self.fmt == "jsonl":
            self._line(json.dumps(rec, sort_keys=True))
        elif self.fmt == "csv":
            if self._csv is None:
                self._csv = csv.DictWriter(self.out, fieldnames=list(rec), lineterminator="\n")
                self._csv.writeheader()
            self._csv.writerow({k: _flat(v) for k, v in rec.items()})
        else:
            self._line(" ".join(f"{k}={_flat(v)}" for k, v in rec.items()))

    def text(self, block: str) -> None:
        for line in block.splitlines():
            self._line(line if self.fmt != "jsonl" else json.dumps({"text": line}))

    def summary(self, line: str, **data: Any) -> None:
        if self.fmt == "jsonl":
            self._line(json.dumps({"summary": line, **data}, sort_keys=True))
        else:
            self._line(("# " if self.fmt == "csv" else "") + line)

    def _line(self, s: str) -> None:
        self.out.write(s + "\n")


def _flat(v: Any) -> str:
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_input(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    try:
        with open(value) as fh:
            return fh.read()
    except FileNotFoundError:
        raise UsageError(f"cannot read {value!r}") from None


def _ops(name: str) -> tuple[str, ...]:
    if name in ngp.OP_SETS:
        return ngp.OP_SETS[name]
    ops = tuple(x.strip() for x in name.split(",") if x.strip())
    unknown = [x for x in ops if x not in ngp.OPERATIONS]
    if unknown:
        raise UsageError(f"unknown operation {unknown[0]!r}; choose from {', '.join(ngp.OPERATIONS)}")
    return ops


def _rl_or_none(values) -> str | None:
    return arrays.rl_encode(values) if values[0] == 1 else None


# ---------------------------------------------------------------------------
# commands


def cmd_group(args, em: Emitter) -> int:
    G = groups.parse_group(args.group)
    G.check_axioms()
    em.record(
        {
            "group": G.name,
            "spec": G.spec,
            "order": G.order,
            "abelian": G.is_abelian,
            "center": G.center(),
            "element_orders": [G.element_order(g) for g in G.elements()],
        }
    )
    return EXIT_OK


def _representative(args, G: groups.Group) -> cocycles.Cocycle:
    rep = args.rep
    if rep == "auto":
        rep = "gamma" if isinstance(G, groups.AbelianGroup) and len(G.sizes) == 1 else "trivial"
    if rep == "gamma":
        if not (isinstance(G, groups.AbelianGroup) and len(G.sizes) == 1):
            raise UsageError("--rep gamma needs a cyclic group")
        return cocycles.gamma(G.order)
    if rep == "trivial":
        return cocycles.trivial(G)
    if rep == "fz":
        if not isinstance(G, groups.AbelianGroup) or args.z is None:
            raise UsageError("--rep fz needs an abelian group and --z")
        return cocycles.f_z(G.sizes, args.z)
    if rep == "lambda":
        if not G.spec.startswith("d:"):
            raise UsageError("--rep lambda needs a dihedral group d:N")
        return cocycles.dihedral_lambda(G.order // 2)
    if rep == "beta":
        if not G.spec.startswith("d:"):
            raise UsageError("--rep beta needs a dihedral group d:N")
        return cocycles.dihedral_beta(G.order // 2)
    raise UsageError(f"unknown representative {rep!r}")


def cmd_cocycle(args, em: Emitter) -> int:
    G = groups.parse_group(args.group)
    c = cocycles.from_subset(_representative(args, G), args.subset or ())
    if args.format == "text":
        em.out.write(cocycles.dumps(c))
    else:
        em.record({"group": G.spec, "representative": args.rep, "subset": list(args.subset or ()), "cocycle": cocycles.dumps(c)})
    return EXIT_OK


def _cocycle_report(c: cocycles.Cocycle) -> dict:
    prof = excess.excess_profile(c)
    rec: dict[str, Any] = {"group": c.group.spec, "order": c.order, "row_sums": list(prof.row_sums), "re": prof.row_excess}
    dec = cocycles.decompose_coboundary(c)
    rec["coboundary"] = dec is not None
    if dec is not None:
        rec["decomposition"] = list(dec)
    rec["orthogonal"] = prof.row_excess == 0
    if c.order % 4 == 2 and c.order > 2:
        rec["quasi_orthogonal"] = excess.is_quasi_orthogonal(c, dec is not None)
    if c.order <= excess.MAX_DET_ORDER:
        rec["abs_det"] = excess.abs_determinant(c)
    rec["normal"] = excess.is_normal(c)
    return rec


def cmd_verify(args, em: Emitter) -> int:
    what = args.what
    if what == "cocycle":
        c = cocycles.loads(_read_input(args.input[0]), check=False)
        if not cocycles.is_cocycle(c.table, c.group):
            em.record({"verified": False, "cocycle": False, "group": c.group.spec, "reason": "cocycle identity fails"})
            return EXIT_FALSE
        rec = _cocycle_report(c)
        ok = {"cocycle": True, "orthogonal": rec["orthogonal"], "quasi": rec.get("quasi_orthogonal", False)}[args.require]
        em.record({"verified": ok, "require": args.require, **rec})
        return EXIT_OK if ok else EXIT_FALSE
    if what == "ngp":
        if len(args.input) != 2:
            raise UsageError("verify ngp needs two sequences")
        a = arrays.parse_sequence(args.input[0], args.len)
        b = arrays.parse_sequence(args.input[1], args.len if args.len else a.size)
        pair = ngp.NGPair(a, b)
        ok = ngp.is_ngp(pair)
        rds = designs.ngp_to_rds(pair)
        dih = designs.ngp_to_dihedral_cocycle(pair)
        em.record(
            {
                "verified": ok,
                **pair.to_json(),
                "negaperiodic_sum": (arrays.negaperiodic(a) + arrays.negaperiodic(b)).tolist(),
                "gobs": [bool(arrays.is_gobs(a)), bool(arrays.is_gobs(b))] if a.size >= 4 else None,
                "rds": {"verified": rds.verified, "params": list(rds.params), "reason": rds.reason},
                "dihedral": {"re": excess.row_excess(dih.cocycle), **dih.to_json()},
            }
        )
        return EXIT_OK if ok else EXIT_FALSE
    if what == "goba":
        if args.s is None or args.z is None:
            raise UsageError("verify goba needs --s and --z")
        vals = _parse_array(args.input[0], args.s)
        phi = arrays.BinaryArray(args.s, vals)
        cls = arrays.classify(phi, args.z)
        rec: dict[str, Any] = {"s": list(args.s), "z": list(args.z), "values": phi.values.tolist(), **cls.to_json()}
        R = arrays.expand(phi, args.z).autocorrelations() if any(args.z) else arrays.autocorrelations(phi.values, phi.group)
        rec["autocorrelations"] = R.tolist()
        G = phi.group
        if phi.normalized:
            psi = cocycles.f_z(args.s, args.z) * cocycles.coboundary(G, phi.values)
            rec["cocycle"] = _cocycle_report(psi)
        if any(args.z):
            cert = designs.goba_certificate(phi, args.z)
            rec["certificate"] = cert.to_json()
        ok = bool(cls.GOBA)
        em.record({"verified": ok, **rec})
        return EXIT_OK if ok else EXIT_FALSE
    if what == "design":
        data = json.loads(_read_input(args.input[0]))
        cert = designs.DesignCertificate(
            data["kind"],
            groups.parse_group(data["group"]["spec"]),
            tuple(data["subset"]),
            None if data.get("forbidden") is None else tuple(data["forbidden"]),
            tuple(data.get("params", ())),
        )
        out = designs.verify_design(cert)
        em.record(out.to_json())
        return EXIT_OK if out.verified else EXIT_FALSE
    raise UsageError(f"unknown verify target {what!r}")


def _parse_array(text: str, s: Sequence[int]) -> np.ndarray:
    text = text.strip()
    if text.startswith("[["):
        vals = np.asarray(json.loads(text), dtype=np.int8)
        if vals.shape != tuple(s):
            raise UsageError(f"array shape {vals.shape} does not match --s {tuple(s)}")
        return vals.ravel()
    return arrays.parse_sequence(text, int(np.prod(s)))


def cmd_search(args, em: Emitter) -> int:
    if args.kind == "goba":
        if args.s is None or args.z is None:
            raise UsageError("search goba needs --s and --z")
        count = 0
        for phi in search.goba_search(args.s, args.z, args.workers):
            rec = {"s": list(phi.s), "z": list(args.z), "values": phi.values.tolist(), "pm": phi.to_str()}
            if len(phi.s) == 1:
                rec["rl"] = _rl_or_none(phi.values)
            em.record(rec)
            count += 1
        em.summary(f"gobas={count}", gobas=count)
        return EXIT_OK
    if args.group is None:
        raise UsageError("search quasi needs --group")
    G = groups.parse_group(args.group)
    rep = _representative(args, G)
    if args.rep in ("auto", "gamma") and rep.group.spec.startswith("a:") and len(rep.group.sizes) == 1 and not args.no_prune:
        t = (G.order - 2) // 4
        space = search.make_space(rep, (t, 3 * t + 1), name="gamma")
    else:
        space = search.make_space(rep, name=args.rep)
    if len(space.basis) > MAX_SEARCH_BITS:
        raise ngp.ResourceGuardError(
            f"search space has 2^{len(space.basis)} candidates (limit 2^{MAX_SEARCH_BITS}); resume token {args.resume}"
        )
    sequence_rep = isinstance(G, groups.AbelianGroup) and len(G.sizes) == 1
    count = 0
    last = args.resume - 1
    try:
        for part, hits in search.iter_partitions(space, args.workers, args.resume):
            for hit in hits:
                rec = {
                    "group": G.spec,
                    "representative": space.name,
                    "subset": list(hit.subset),
                    "row_sums": list(hit.row_sums),
                    "re": hit.re,
                }
                if sequence_rep:
                    rec["goba"] = arrays.rl_encode(cocycles.delta_product(G, hit.subset))
                em.record(rec)
                count += 1
            last = part
    except KeyboardInterrupt:
        print(f"interrupted; resume token {last + 1}", file=sys.stderr)
        raise
    em.summary(f"hits={count}", hits=count, partitions=space.partitions, resume=space.partitions)
    return EXIT_OK


def _pair_record(code: int, n: int) -> dict:
    return ngp.NGPair.from_code(code, n).to_json()


def cmd_enumerate(args, em: Emitter) -> int:
    res = ngp.enumerate_ngps(args.k, args.source)
    if not args.quiet:
        for code in res.pairs.tolist():
            em.record(_pair_record(code, res.length))
    key = "n" if args.source == "all" else "n_hat"
    em.summary(f"n={res.count}", **{key: res.count, "k": args.k, "source": args.source, "ordered_pairs": True})
    return EXIT_OK


def cmd_classify(args, em: Emitter) -> int:
    ops = _ops(args.ops)
    res = ngp.enumerate_ngps(args.k, args.source)
    orbits = ngp.classify_ngps(res, ops)
    for rep, size in zip(orbits.representatives, orbits.sizes):
        em.record({"size": size, **_pair_record(rep, res.length)})
    em.summary(f"classes={orbits.count}", classes=orbits.count, k=args.k, source=args.source, ops=list(ops))
    return EXIT_OK


def cmd_calibrate(args, em: Emitter) -> int:
    family = ngp.candidate_family() if args.family == "full" else [ngp.DEFAULT_OPS, ngp.OP_SETS["alternate"]]
    cal = ngp.calibrate(family, args.ks)
    em.text(cal.report())
    ok = ngp.DEFAULT_OPS in cal.matches
    em.summary(f"matches={len(cal.matches)} default={'match' if ok else 'FAIL'}", matches=[list(m) for m in cal.matches])
    return EXIT_OK if ok else EXIT_FALSE


def cmd_known_pairs(args, em: Emitter) -> int:
    ok = True
    for k in ngp.KNOWN_PAIRS:
        pair = ngp.known_pair(k)
        rds = designs.ngp_to_rds(pair)
        dih = designs.ngp_to_dihedral_cocycle(pair)
        rec = {
            "k": k,
            "phi1": ngp.KNOWN_PAIRS[k][0],
            "phi2": ngp.KNOWN_PAIRS[k][1],
            "ngp": ngp.is_ngp(pair),
            "gobs": bool(arrays.is_gobs(pair.phi1) and arrays.is_gobs(pair.phi2)),
            "rds": bool(rds.verified),
            "dihedral_re": excess.row_excess(dih.cocycle),
        }
        ok &= rec["ngp"] and rec["gobs"] and rec["rds"] and rec["dihedral_re"] == 0
        em.record(rec)
    em.summary("known_pairs=verified" if ok else "known_pairs=FAILED")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_census(args, em: Emitter) -> int:
    for row in ngp.census_rows(args.ks, _ops(args.ops)):
        em.record(row)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("jsonl", "csv", "text"), default="text")
    common.add_argument("--out", help="write output to a file instead of stdout")
    common.add_argument("--workers", type=int, default=1)

    p = argparse.ArgumentParser(prog="goba", description="Quasi-orthogonal cocycles, GOBAs and negaperiodic Golay pairs.")
    p.add_argument("--version", action="version", version=f"goba {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", parents=[common], help="describe a group")
    g.add_argument("group", help="group spec: a:2x3, c:N, d:N, q:T, ext:S1xS2/Z1Z2")
    g.set_defaults(func=cmd_group)

    c = sub.add_parser("cocycle", parents=[common], help="print a cocycle as text")
    c.add_argument("--group", required=True)
    c.add_argument("--rep", default="auto", choices=("auto", "gamma", "trivial", "fz", "lambda", "beta"))
    c.add_argument("--z", type=_ints)
    c.add_argument("--subset", type=_ints, help="element indices k of the factors d_k")
    c.set_defaults(func=cmd_cocycle)

    v = sub.add_parser("verify", parents=[common], help="verify a cocycle, NGP, GOBA or design certificate")
    v.add_argument("what", choices=("cocycle", "ngp", "goba", "design"))
    v.add_argument("input", nargs="+", help="file ('-' for stdin) or inline sequences")
    v.add_argument("--len", type=int)
    v.add_argument("--s", type=_ints)
    v.add_argument("--z", type=_ints)
    v.add_argument("--require", choices=("cocycle", "orthogonal", "quasi"), default="cocycle")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="exhaustive search")
    s.add_argument("kind", choices=("quasi", "goba"))
    s.add_argument("--group")
    s.add_argument("--rep", default="auto", choices=("auto", "gamma", "trivial", "fz", "lambda", "beta"))
    s.add_argument("--s", type=_ints)
    s.add_argument("--z", type=_ints)
    s.add_argument("--no-prune", action="store_true", help="disable the weight window for gamma searches")
    s.add_argument("--resume", type=int, default=0, help="first partition to process")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("enumerate", parents=[common], help="enumerate all NGPs of length 2k")
    e.add_argument("what", choices=("ngp",))
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--source", choices=("all", "gobs"), default="all")
    e.add_argument("--quiet", action="store_true", help="summary only")
    e.set_defaults(func=cmd_enumerate)

    k = sub.add_parser("classify", parents=[common], help="count NGP equivalence classes")
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--source", choices=("all", "gobs"), default="all")
    k.add_argument("--ops", default="default", help="named set (default, alternate) or comma list")
    k.set_defaults(func=cmd_classify)

    cal = sub.add_parser("calibrate", parents=[common], help="check operation sets against the reference class counts")
    cal.add_argument("--ks", type=_ints, default=(3, 5, 7, 9))
    cal.add_argument("--family", choices=("full", "named"), default="full")
    cal.set_defaults(func=cmd_calibrate)

    t1 = sub.add_parser("known-pairs", parents=[common], help="verify the reference NGPs")
    t1.set_defaults(func=cmd_known_pairs)

    t2 = sub.add_parser("census", parents=[common], help="recompute the NGP census (k, n, n_hat, d, d_hat)")
    t2.add_argument("--ks", type=_ints, default=(3, 5, 7, 9))
    t2.add_argument("--ops", default="default")
    t2.set_defaults(func=cmd_census)
    return p


def _config(args) -> dict:
    skip = {"func", "out", "format"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    buf = io.StringIO() if args.out else sys.stdout
    em = Emitter(args.format, buf)
    code = EXIT_OK
    try:
        em.header(_config(args))
        code = args.func(args, em)
    except ngp.ResourceGuardError as exc:
        print(f"goba: resource guard: {exc}", file=sys.stderr)
        code = EXIT_GUARD
    except (UsageError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"goba: error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
