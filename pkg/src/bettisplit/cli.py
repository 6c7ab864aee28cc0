"""Command-line interface: ``bettisplit <group> <command> [options]``.

Exit codes: 0 success, 1 a verification failed, 2 usage error or unreadable
input, 3 a search or check ran out of budget before deciding.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .clutter import build_clutter, edge_ideal, h_pd_generators
from .corpus import CORPUS, get_entry
from .homology import field_tag
from .ideal import SquarefreeIdeal, UnitIdealError, load_ideal
from .oracle import graded_betti
from .poset import Poset, bits, downsets, load_poset, multichains, poset_multideals
from .recursion import TotalBetti, betti_bipartite_cover, betti_recursive, betti_unique_max
from .simplicial import (
    ComplexAnalyzer,
    NotPureError,
    SimplicialComplex,
    is_non_evasive,
    is_vertex_decomposable,
    load_complex,
)
from .splitting import (
    SearchCapExceeded,
    admits_xi_splitting,
    exhaustive_splitting_search,
    is_betti_splitting,
    splitting_sufficiency,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


class BudgetError(Exception):
    pass


# --- argument parsing ------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, poset=False, ideal=False, complex_=False, d=False, field=True):
    if poset:
        p.add_argument("--poset", metavar="FILE", help='poset JSON {"n": N, "covers": [[a, b], ...]}')
    if ideal:
        p.add_argument("--ideal", metavar="FILE", help='ideal JSON {"variables": [...], "generators": [[...], ...]}')
    if complex_:
        p.add_argument("--complex", metavar="FILE", help='complex JSON {"vertices": n, "facets": [[...], ...]}')
    if ideal or complex_:
        p.add_argument("--corpus", choices=sorted(CORPUS), help="use a built-in complex")
        p.add_argument("--which", choices=("sr", "dual"), default="dual", help="Stanley-Reisner or Alexander dual ideal")
    if d:
        p.add_argument("--d", type=int, help="degree (number of rows)")
    if field:
        p.add_argument("--field", default="f2", choices=("f2", "f3", "q"), help="coefficient field (default f2)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--threads", type=int, default=1, help="worker processes for the Betti oracle")
    p.add_argument("--budget-secs", type=float, default=None, help="wall-time budget for searches")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bettisplit", description="Betti numbers and Betti splittings of squarefree monomial ideals")
    groups = parser.add_subparsers(dest="group", required=True)

    poset = groups.add_parser("poset", help="downsets, multichains and multideals of a poset")
    pc = poset.add_subparsers(dest="command", required=True)
    for name in ("downsets", "multichains", "multideals"):
        _common(pc.add_parser(name), poset=True, d=name != "downsets", field=False)

    clutter = groups.add_parser("clutter", help="the multichain clutter and its ideals")
    cc = clutter.add_subparsers(dest="command", required=True)
    for name in ("build", "edge-ideal", "cover-ideal"):
        _common(cc.add_parser(name), poset=True, d=True, field=False)

    betti = groups.add_parser("betti", help="graded Betti numbers")
    bc = betti.add_subparsers(dest="command", required=True)
    _common(bc.add_parser("oracle", help="brute-force Koszul homology"), poset=True, ideal=True, d=True)
    for name in ("recursive", "unique-max"):
        _common(bc.add_parser(name), poset=True, d=True, field=False)
    _common(bc.add_parser("bipartite"), poset=True, field=False)

    split = groups.add_parser("split", help="Betti splittings")
    sc = split.add_subparsers(dest="command", required=True)
    check = sc.add_parser("check", help="is I = J + K a Betti splitting?")
    _common(check, ideal=True)
    check.add_argument("--j", metavar="FILE")
    check.add_argument("--k", metavar="FILE")
    xi = sc.add_parser("xi", help="x_i-partition of I and whether it splits")
    _common(xi, ideal=True)
    xi.add_argument("--var", required=True, help="variable name or 1-based number")
    search = sc.add_parser("search", help="search all partitions of G(I)")
    _common(search, ideal=True)
    search.add_argument("--budget", type=int, default=None, help="maximum number of partitions")
    search.add_argument("--sample", type=int, default=None, help="check this many random partitions")
    search.add_argument("--seed", type=int, default=0)

    cx = groups.add_parser("complex", help="simplicial complexes")
    xc = cx.add_subparsers(dest="command", required=True)
    analyze = xc.add_parser("analyze")
    _common(analyze, complex_=True)
    analyze.add_argument("--budget", type=int, default=10**5, help="recursive-call budget for the decomposability checks")
    _common(xc.add_parser("dual", help="print the Stanley-Reisner or Alexander dual ideal"), complex_=True, field=False)
    corpus = xc.add_parser("corpus", help="print a built-in complex")
    corpus.add_argument("name", choices=sorted(CORPUS))
    corpus.add_argument("--format", choices=("text", "json"), default="text")

    verify = groups.add_parser("verify", help="acceptance checks")
    vc = verify.add_subparsers(dest="command", required=True)
    paper = vc.add_parser("paper", help="run every acceptance criterion and print a pass/fail matrix")
    paper.add_argument("--sample", type=int, default=None, help="sample the partition search instead of running it in full")
    paper.add_argument("--threads", type=int, default=1)
    paper.add_argument("--format", choices=("text", "json"), default="text")
    return parser


# --- input helpers ----------------------------------------------------------------


def _read(loader, path, what):
    try:
        return loader(path)
    except FileNotFoundError:
        raise UsageError(f"{what} file not found: {path}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed {what} file {path}: {exc}") from None


def _poset(args) -> Poset:
    if not args.poset:
        raise UsageError("--poset FILE is required")
    return _read(load_poset, args.poset, "poset")


def _degree(args, minimum: int = 1) -> int:
    if args.d is None:
        raise UsageError("--d is required")
    if args.d < minimum:
        raise UsageError(f"--d must be at least {minimum}")
    return args.d


def _complex(args) -> SimplicialComplex:
    if getattr(args, "complex", None):
        return _read(load_complex, args.complex, "complex")
    if getattr(args, "corpus", None):
        return get_entry(args.corpus).complex
    raise UsageError("give --complex FILE or --corpus NAME")


def _ideal(args, *, allow_poset: bool = False) -> SquarefreeIdeal:
    if getattr(args, "ideal", None):
        return _read(load_ideal, args.ideal, "ideal")
    if getattr(args, "corpus", None):
        return get_entry(args.corpus).ideal(args.which)
    if allow_poset and getattr(args, "poset", None):
        return h_pd_generators(_poset(args), _degree(args))
    raise UsageError("give --ideal FILE or --corpus NAME" + (" or --poset FILE --d K" if allow_poset else ""))


def _same_ring(I: SquarefreeIdeal, other: SquarefreeIdeal, what: str) -> SquarefreeIdeal:
    if other.variables != I.variables:
        if other.nvars > I.nvars:
            raise UsageError(f"{what} uses more variables than I")
        other = SquarefreeIdeal(other.gens, I.variables)
    return other


def _subsets(P: Poset, mask: int) -> list[str]:
    return [P.name(i) for i in bits(mask)]


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# --- commands -----------------------------------------------------------------------


def cmd_poset(args) -> int:
    P = _poset(args)
    if args.command == "downsets":
        ds = downsets(P)
        items = [_subsets(P, m) for m in ds]
        text = "\n".join("{" + ", ".join(s) + "}" for s in items)
        _emit(args, {"count": len(ds), "downsets": items}, text + f"\n{len(ds)} downsets")
    elif args.command == "multichains":
        d = _degree(args)
        chains = [[P.name(j) for j in mc] for mc in multichains(P, d)]
        text = "\n".join(" <= ".join(c) for c in chains)
        _emit(args, {"count": len(chains), "multichains": chains}, text + f"\n{len(chains)} multichains")
    else:
        d = _degree(args)
        mds = [[_subsets(P, part) for part in md] for md in poset_multideals(P, d)]
        text = "\n".join(" | ".join("{" + ", ".join(part) + "}" for part in md) for md in mds)
        _emit(args, {"count": len(mds), "multideals": mds}, text + f"\n{len(mds)} multideals")
    return EXIT_OK


def _ideal_payload(I: SquarefreeIdeal) -> dict:
    data = I.to_json()
    data["monomials"] = [I.monomial_str(g) for g in I.gens]
    return data


def cmd_clutter(args) -> int:
    P = _poset(args)
    d = _degree(args, 2)
    C = build_clutter(P, d)
    if args.command == "build":
        names = [C.vertices[v] for v in range(len(C.vertices))]
        edges = ["".join(names[v] for v in bits(e)) for e in C.edges]
        _emit(args, C.to_json(), "\n".join(edges) + f"\n{len(edges)} edges")
        return EXIT_OK
    I = edge_ideal(C) if args.command == "edge-ideal" else h_pd_generators(P, d)
    _emit(args, _ideal_payload(I), f"{I}\n{len(I.gens)} generators")
    return EXIT_OK


def _total_payload(T: TotalBetti, label: str) -> tuple[dict, str]:
    data = T.to_json()
    data["method"] = label
    text = f"{label}: beta = {list(T.values)}  (generated in degree {T.degree})\ntotal: {sum(T.values)}"
    return data, text


def cmd_betti(args) -> int:
    if args.command == "oracle":
        I = _ideal(args, allow_poset=True)
        try:
            T = graded_betti(I, args.field, threads=args.threads)
        except UnitIdealError as exc:
            raise UsageError(str(exc)) from None
        _emit(args, T.to_json(), f"field: {T.field}\n{T.render()}")
        return EXIT_OK
    P = _poset(args)
    if args.command == "bipartite":
        data, text = _total_payload(betti_bipartite_cover(P), "bipartite")
    elif args.command == "recursive":
        data, text = _total_payload(betti_recursive(P, _degree(args)), "recursive")
    else:
        try:
            data, text = _total_payload(betti_unique_max(P, _degree(args, 2)), "unique-max")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _emit(args, data, text)
    return EXIT_OK


def cmd_split(args) -> int:
    I = _ideal(args)
    if args.command == "check":
        if args.j and args.k:
            J = _same_ring(I, _read(load_ideal, args.j, "ideal"), "J")
            K = _same_ring(I, _read(load_ideal, args.k, "ideal"), "K")
        elif args.corpus:
            parts = get_entry(args.corpus).parts
            jk = (f"{args.which}_J", f"{args.which}_K")
            if jk[0] not in parts:
                raise UsageError(f"no stored partition for {args.corpus} --which {args.which}; give --j and --k")
            J, K = parts[jk[0]], parts[jk[1]]
        else:
            raise UsageError("give --j FILE and --k FILE")
        try:
            report = is_betti_splitting(I, J, K, args.field, args.threads)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        suff = splitting_sufficiency(I, J, K, args.field)
        payload = report.to_json()
        payload["sufficient_condition"] = suff.value
        _emit(args, payload, report.render(I.variables) + f"\nsufficient condition: {suff.value}")
        return EXIT_OK
    if args.command == "xi":
        try:
            v = I.variable_index(args.var)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report = admits_xi_splitting(I, v, args.field, args.threads)
        payload = report.to_json()
        payload["variable"] = I.variables[v]
        _emit(args, payload, report.render(I.variables))
        return EXIT_OK
    try:
        res = exhaustive_splitting_search(
            I, args.field, budget=args.budget, budget_secs=args.budget_secs, sample=args.sample, seed=args.seed
        )
    except SearchCapExceeded as exc:
        raise UsageError(str(exc)) from None
    if res.candidate is not None:
        text = (
            f"Betti splitting found after {res.checked} of {res.total} partitions"
            f" (confirmed over {res.verified_field})\nJ = {res.candidate.J}\nK = {res.candidate.K}"
        )
    elif res.exhaustive:
        text = f"no Betti splitting: all {res.total} partitions checked"
    else:
        text = f"no Betti splitting among {res.checked} of {res.total} partitions checked ({res.stopped_by})"
    _emit(args, res.to_json(), text)
    if res.stopped_by in ("budget", "time"):
        raise BudgetError(f"search budget exhausted after {res.checked} partitions")
    return EXIT_OK


def cmd_complex(args) -> int:
    if args.command == "corpus":
        D = get_entry(args.name).complex
        text = f"{args.name}: {len(D.facets)} facets on {D.n} vertices\n" + "\n".join(
            "{" + ",".join(map(str, f)) + "}" for f in D.facet_lists()
        )
        _emit(args, D.to_json(), text)
        return EXIT_OK
    D = _complex(args)
    if args.command == "dual":
        I = D.stanley_reisner_ideal() if args.which == "sr" else D.alexander_dual_ideal()
        _emit(args, _ideal_payload(I), f"{I}\n{len(I.gens)} generators")
        return EXIT_OK
    tag = field_tag(args.field)
    an = ComplexAnalyzer(tag)
    info: dict = {
        "vertices": D.n,
        "facets": len(D.facets),
        "dim": D.dim,
        "pure": D.is_pure(),
        "cone_apexes": D.cone_apexes(),
        "reduced_homology": D.reduced_homology(tag),
        "cohen_macaulay": an.cohen_macaulay(D) if D.facets else True,
        "field": tag,
    }
    try:
        ok, witness = an.weakly_vertex_decomposable(D)
        info["weakly_vertex_decomposable"] = ok
        info["wvd_witness"] = witness
    except (NotPureError, ValueError) as exc:
        info["weakly_vertex_decomposable"] = None
        info["wvd_note"] = str(exc)
    vd = is_vertex_decomposable(D, budget=args.budget)
    ne = is_non_evasive(D, budget=args.budget)
    info["vertex_decomposable"] = "unknown" if vd is None else vd
    info["non_evasive"] = "unknown" if ne is None else ne
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    _emit(args, info, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all

    log = print if args.format == "text" else None
    results = run_all(sample=args.sample, threads=args.threads, log=log)
    if args.format == "json":
        print(json.dumps(
            [{"criterion": r.number, "title": r.title, "pass": r.ok, "seconds": round(r.seconds, 2),
              "limit": r.limit, "failures": r.failures[:10], "notes": r.notes} for r in results],
            indent=2,
        ))
    else:
        passed = sum(r.ok for r in results)
        print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


COMMANDS = {
    "poset": cmd_poset,
    "clutter": cmd_clutter,
    "betti": cmd_betti,
    "split": cmd_split,
    "complex": cmd_complex,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.group](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
