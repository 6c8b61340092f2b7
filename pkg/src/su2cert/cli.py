"""Command-line front end: ``su2cert <command> ...``."""

from __future__ import annotations

import argparse
import random
import sys

from . import __version__
from .algebra import AlgebraError
from .certify import (ABSTAIN, RULE_TEXT, InconsistentQuery, SeifertQuery, SurgeryQuery, certify,
                      certify_batch, explain)
from .io import (ParseError, load_document, parse_batch_file, parse_lspace_doc, parse_models_file,
                 parse_query_file, to_json)
from .knots import LINKS, KnotError, builtin_table, casson_plus_one_surgery, formal_phi1, load_table, \
    record_to_dict, skein_combine
from .lspace import LSpaceKB, format_chain
from .operators import ModelError, orthogonality_matrix, random_family
from .seifert import (LensSpaceError, SeifertData, SeifertError, is_homology_sphere, seifert_filling,
                      seifert_h1, seifert_reverse, sfs_lspace_classify)
from .series import orthogonality_matrix_series
from .slopes import Slope, SlopeError

EXIT_OK, EXIT_ABSTAIN, EXIT_INCONSISTENT, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# certify --------------------------------------------------------------------

def _cert_lines(cert, trace: bool) -> list[str]:
    lines = explain(cert)
    if trace:
        lines.append("  rules:")
        for rule in dict.fromkeys(s.rule for s in cert.steps):
            lines.append(f"    {rule}: {RULE_TEXT.get(rule, '')}")
        if cert.trace:
            lines.append("  L-space derivation:")
            lines.extend("    " + t for t in cert.trace)
    return lines


def _exit_for(cert) -> int:
    return EXIT_ABSTAIN if cert.conclusion == ABSTAIN else EXIT_OK


def cmd_certify(args, out) -> int:
    modes = sum(x is not None for x in (args.file, args.knot, args.seifert, args.batch))
    if modes != 1:
        raise UsageError("certify: give exactly one of FILE, --knot/--slope, --seifert, --batch")
    if args.batch is not None:
        queries = parse_batch_file(_read(args.batch))
        results = certify_batch(queries, workers=args.workers)
        code = EXIT_OK
        records = []
        for i, res in enumerate(results):
            if isinstance(res, InconsistentQuery):
                code = EXIT_INCONSISTENT
                records.append({"conclusion": "inconsistent", "error": str(res), "version": __version__})
                if not args.json:
                    out.write(f"[{i}] inconsistent input: {res}\n")
                continue
            if isinstance(res, Exception):
                raise res
            if res.conclusion == ABSTAIN and code == EXIT_OK:
                code = EXIT_ABSTAIN
            records.append(res.to_record())
            if not args.json:
                out.write(f"[{i}]\n" + "\n".join(_cert_lines(res, args.trace)) + "\n")
        if args.json:
            out.write(to_json(records) + "\n")
        return code
    if args.file is not None:
        query = parse_query_file(_read(args.file))
    elif args.knot is not None:
        if args.slope is None:
            raise UsageError("certify: --knot needs --slope")
        try:
            query = SurgeryQuery(builtin_table()[args.knot], Slope.parse(args.slope))
        except (KnotError, SlopeError) as exc:
            raise ParseError(str(exc)) from None
    else:
        try:
            query = SeifertQuery(SeifertData.parse(args.seifert))
        except (SeifertError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc)) from None
    cert = certify(query)
    if args.json:
        out.write(to_json(cert.to_record()) + "\n")
    else:
        out.write("\n".join(_cert_lines(cert, args.trace)) + "\n")
    return _exit_for(cert)


# lspace ---------------------------------------------------------------------

def _kb_from_problem(p: dict) -> LSpaceKB:
    kb = LSpaceKB(label=p["label"])
    if p["nontrivial"]:
        kb.assert_nontrivial(True)
    if p["genus"] is not None:
        kb.assert_genus(p["genus"])
    if p["alexander"] is not None:
        kb.assert_alexander(p["alexander"])
    for s in p["lspace_at"]:
        kb.assert_lspace(s)
    for s in p["not_lspace_at"]:
        kb.assert_not_lspace(s)
    if p["not_lspace_integers_from"] is not None:
        kb.assert_not_lspace_integers_from(p["not_lspace_integers_from"])
    for s, v, exact in p["rank"]:
        kb.assert_rank(s, v, exact)
    return kb.close()


def cmd_lspace(args, out) -> int:
    if args.file is not None:
        doc = load_document(_read(args.file))
    else:
        doc = {"knot": args.knot, "genus": args.genus, "alexander": args.alexander,
               "nontrivial": True if args.nontrivial else None,
               "lspace_at": args.lspace_at, "not_lspace_at": args.not_lspace_at,
               "query": args.query}
    problem = parse_lspace_doc({k: v for k, v in doc.items() if v is not None})
    kb = _kb_from_problem(problem)
    bad = kb.contradictions()
    queries = []
    for s in problem["query"]:
        status, fact = kb.status(s)
        chain = []
        if status in ("lspace", "not_lspace"):
            chain = format_chain(kb, fact)
        elif status == "contradiction":
            chain = format_chain(kb, fact[0]) + format_chain(kb, fact[1])
        queries.append({"slope": str(s), "status": status, "chain": chain})
    if args.json:
        out.write(to_json({"label": kb.label, "queries": queries,
                           "contradictions": [format_chain(kb, f) for f in bad],
                           "facts": [f.to_record() for f in kb.facts] if args.trace else None,
                           "version": __version__}) + "\n")
    else:
        for q in queries:
            out.write(f"{q['slope']}: {q['status']}\n")
            if args.trace:
                out.writelines(f"    {line}\n" for line in q["chain"])
        for f in bad:
            out.write("contradiction:\n")
            out.writelines(f"    {line}\n" for line in format_chain(kb, f))
        if args.trace and not problem["query"]:
            out.writelines(f"#{f.id} [{f.rule}] {f.statement()}\n" for f in kb.facts)
    return EXIT_INCONSISTENT if bad else EXIT_OK


# casson ---------------------------------------------------------------------

def cmd_casson(args, out) -> int:
    modes = sum(x is not None for x in (args.link, args.knot, args.skein))
    if modes != 1:
        raise UsageError("casson: give exactly one of --link, --knot, --skein")
    if args.link is not None:
        if args.link not in LINKS:
            raise ParseError(f"unknown link {args.link!r}; known: {sorted(LINKS)}")
        if args.m is None or args.n is None:
            raise UsageError("casson --link needs --m and --n")
        link = LINKS[args.link]
        a, b, c = link.phi1_values()
        if c is None:
            raise ParseError(f"phi1 of {link.name} is undetermined")
        lam = link.casson(args.m, args.n)
        rec = {"link": link.name, "m": args.m, "n": args.n, "phi1_K1": str(a), "phi1_K2": str(b),
               "phi1_L": str(c), "lambda": str(lam)}
        text = [f"phi1({link.k1}) = {a}, phi1({link.k2}) = {b}, phi1(L) = {c}",
                f"lambda = {lam}"]
    elif args.knot is not None:
        try:
            k = builtin_table()[args.knot]
        except KnotError as exc:
            raise ParseError(str(exc)) from None
        lam = casson_plus_one_surgery(k.alexander)
        rec = {"knot": k.name, "alexander": str(k.alexander), "lambda_plus_one_surgery": str(lam)}
        text = [f"Delta = {k.alexander}", f"lambda(S^3_1(K)) = {lam}"]
    else:
        try:
            expr = skein_combine(args.skein)
            val = formal_phi1(expr, args.components)
        except (KnotError, SyntaxError, ValueError) as exc:
            raise ParseError(str(exc)) from None
        rec = {"conway": str(expr), "components": args.components,
               "phi1": None if val is None else str(val)}
        text = [f"Conway = {expr}", f"phi1 = {'undetermined' if val is None else val}"]
    if args.json:
        out.write(to_json(dict(rec, version=__version__)) + "\n")
    else:
        out.write("\n".join(text) + "\n")
    return EXIT_OK


# seifert --------------------------------------------------------------------

def cmd_seifert(args, out) -> int:
    try:
        Y = SeifertData.parse(args.data)
    except (SeifertError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc)) from None
    h1 = seifert_h1(Y)
    rec = {"data": str(Y), "h1": h1, "reverse": str(seifert_reverse(Y))}
    lines = [f"Y = {Y}", f"|H_1| = {h1}" + ("  (b_1 > 0)" if h1 == 0 else ""),
             f"-Y = {seifert_reverse(Y)}"]
    try:
        f = seifert_filling(Y)
        side = "-Y" if f.reversed else "Y"
        rec.update(filling_of=side, source=f.source, central=f.central,
                   chains=[list(c) for c in f.chains], c1_nonzero=f.c1_nonzero,
                   rotations=[c.rot for c in f.model.components])
        lines.append(f"Stein filling of {side} ({f.source}): central {f.central}, chains "
                     + ", ".join("[" + ", ".join(map(str, c)) + "]" for c in f.chains))
        lines.append(f"c_1 != 0: {'yes' if f.c1_nonzero else 'no'}")
    except LensSpaceError:
        rec.update(filling_of=None)
        lines.append("fewer than three singular fibres: lens space")
    if is_homology_sphere(Y):
        lsp = sfs_lspace_classify(Y)
        rec["lspace"] = lsp
        lines.append("L-space: " + ("yes (+-Sigma(2,3,5))" if lsp else "no"))
    if args.json:
        out.write(to_json(dict(rec, version=__version__)) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


# donaldson-check ------------------------------------------------------------

def _matrix_text(M) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in M) + "]"


def cmd_donaldson(args, out) -> int:
    if args.file is not None:
        fam = parse_models_file(_read(args.file))
        A = orthogonality_matrix(fam)
        B = orthogonality_matrix_series(fam)
        n = len(fam)
        D = [[fam[r].bottom.alpha if r == c else 0 for c in range(n)] for r in range(n)]
        rec = {"matrix": [[str(x) for x in row] for row in A], "diagonal": A == D, "oracle_agrees": A == B,
               "version": __version__}
        if args.json:
            out.write(to_json(rec) + "\n")
        else:
            out.write(f"orthogonality matrix: {_matrix_text(A)}\n")
            out.write(f"diagonal with bottom coefficients: {'yes' if A == D else 'no'}\n")
            out.write(f"power-series oracle agrees: {'yes' if A == B else 'no'}\n")
        return EXIT_OK if A == D and A == B else EXIT_INCONSISTENT
    rng = random.Random(args.seed)
    bad = []
    for i in range(args.count):
        n = rng.randint(1, args.max_n)
        g = rng.randint(2, args.max_g)
        fam = random_family(rng, n, g)
        A = orthogonality_matrix(fam)
        B = orthogonality_matrix_series(fam)
        D = [[fam[r].bottom.alpha if r == c else 0 for c in range(n)] for r in range(n)]
        if A != D or A != B:
            bad.append(i)
    rec = {"families": args.count, "seed": args.seed, "failures": bad, "version": __version__}
    if args.json:
        out.write(to_json(rec) + "\n")
    else:
        out.write(f"{args.count} families (seed {args.seed}, n <= {args.max_n}, g <= {args.max_g}): "
                  f"{'all diagonal and oracle-consistent' if not bad else f'{len(bad)} failures {bad}'}\n")
    return EXIT_OK if not bad else EXIT_INCONSISTENT


# knot-table -----------------------------------------------------------------

def cmd_knot_table(args, out) -> int:
    if args.validate is not None:
        try:
            table = load_table(_read(args.validate))
        except (KnotError, AlgebraError, ValueError) as exc:
            raise ParseError(str(exc)) from None
    else:
        table = builtin_table()
    records = table.records()
    if args.name:
        records = [r for r in records if r.name in args.name]
        missing = set(args.name) - {r.name for r in records}
        if missing:
            raise ParseError(f"unknown knots: {sorted(missing)}")
    if args.json:
        out.write(to_json({"knots": [record_to_dict(r) for r in records], "version": __version__}) + "\n")
        return EXIT_OK
    for r in records:
        extra = []
        if r.genus is not None:
            extra.append(f"g={r.genus}")
        if r.sl_bar_mirror is not None:
            extra.append(f"sl(mirror)={r.sl_bar_mirror}")
        if r.mirror_positive:
            extra.append("mirror positive")
        out.write(f"{r.name}: Conway {r.conway}; Alexander {r.alexander}"
                  + (f"; {', '.join(extra)}" if extra else "") + "\n")
    if args.validate is not None:
        out.write(f"{len(records)} records valid\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="su2cert", description="Exact certificates for SU(2) representations of 3-manifolds.")
    p.add_argument("--version", action="version", version=f"su2cert {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--trace", action="store_true", help="print derivation chains")

    c = sub.add_parser("certify", help="certify a query")
    c.add_argument("file", nargs="?", help="YAML query file ('-' for stdin)")
    c.add_argument("--knot", help="built-in knot name (with --slope)")
    c.add_argument("--slope", help="surgery slope p/q")
    c.add_argument("--seifert", help='Seifert data, e.g. "M(-2; 1/2, 2/3, 4/5)"')
    c.add_argument("--batch", help="YAML file with a 'queries' list")
    c.add_argument("--workers", type=int, default=4)
    common(c)

    ls = sub.add_parser("lspace", help="close L-space facts about surgeries on one knot")
    ls.add_argument("file", nargs="?")
    ls.add_argument("--knot")
    ls.add_argument("--genus", type=int)
    ls.add_argument("--alexander")
    ls.add_argument("--nontrivial", action="store_true")
    ls.add_argument("--lspace-at", action="append", default=None, metavar="SLOPE")
    ls.add_argument("--not-lspace-at", action="append", default=None, metavar="SLOPE")
    ls.add_argument("--query", action="append", default=None, metavar="SLOPE")
    common(ls)

    cs = sub.add_parser("casson", help="Casson invariants")
    cs.add_argument("--link", help=f"curated link ({', '.join(sorted(LINKS))})")
    cs.add_argument("--m", type=int)
    cs.add_argument("--n", type=int)
    cs.add_argument("--knot", help="lambda of +1 surgery on a built-in knot")
    cs.add_argument("--skein", help="skein expression")
    cs.add_argument("--components", type=int, default=1)
    common(cs)

    sf = sub.add_parser("seifert", help="Seifert fibered space report")
    sf.add_argument("data")
    common(sf)

    dc = sub.add_parser("donaldson-check", help="randomised orthogonality check against the series oracle")
    dc.add_argument("file", nargs="?", help="YAML family of models (omit for a random sweep)")
    dc.add_argument("--count", type=int, default=50)
    dc.add_argument("--seed", type=int, default=0)
    dc.add_argument("--max-n", type=int, default=4)
    dc.add_argument("--max-g", type=int, default=5)
    common(dc)

    kt = sub.add_parser("knot-table", help="list or validate knot tables")
    kt.add_argument("name", nargs="*")
    kt.add_argument("--validate", metavar="FILE")
    common(kt)
    return p


COMMANDS = {"certify": cmd_certify, "lspace": cmd_lspace, "casson": cmd_casson, "seifert": cmd_seifert,
            "donaldson-check": cmd_donaldson, "knot-table": cmd_knot_table}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (ParseError, KnotError, SlopeError, SeifertError, AlgebraError, ModelError) as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except InconsistentQuery as exc:
        err.write(f"inconsistent input: {exc}\n")
        return EXIT_INCONSISTENT


def run(argv) -> int:
    return main(argv)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
