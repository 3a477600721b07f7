"""Command-line front end.

Structured output is one JSON object per line on stdout.  The exit status is 0
only if every requested verification succeeded; 1 for refuted, not-applicable
or failed checks; 2 for malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .corpus import CorpusError, load_corpus
from .prover import certificate_json, prove
from .thetaprod import ThetaError, eprod_expand, format_eproduct, parse_eproduct, parse_pochhammer


def _num(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit(record: dict, out) -> None:
    out.write(json.dumps(record, sort_keys=False) + "\n")


def _fail_input(message: str, out, line=None, column=None) -> int:
    rec = {"error": "input", "message": message}
    if line is not None:
        rec["line"] = line
    if column is not None:
        rec["column"] = column
    _emit(rec, out)
    return 2


# -- prove ------------------------------------------------------------------


def _prove_one(args) -> dict:
    path, index, verify_to = args
    entry = load_corpus(path)[index]
    try:
        return prove(entry.statement(), verify_to=verify_to)
    except (ThetaError, ValueError) as exc:
        return {"error": str(exc)}


def cmd_prove(ns, out) -> int:
    try:
        entries = load_corpus(ns.corpus)
    except CorpusError as exc:
        return _fail_input(str(exc), out, exc.line, exc.column)
    except OSError as exc:
        return _fail_input(str(exc), out)
    if ns.only:
        known = {e.tag for e in entries}
        missing = [t for t in ns.only if t not in known]
        if missing:
            return _fail_input(f"unknown tag(s): {', '.join(missing)}", out)
    jobs = [(ns.corpus, i, ns.T) for i, e in enumerate(entries) if not ns.only or e.tag in ns.only]
    if ns.jobs > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            certs = list(pool.map(_prove_one, jobs))
    else:
        certs = [_prove_one(j) for j in jobs]
    certdir = Path(ns.emit_certs) if ns.emit_certs else None
    if certdir:
        certdir.mkdir(parents=True, exist_ok=True)
    status = 0
    for (_, i, _), cert in zip(jobs, certs):
        entry = entries[i]
        if "error" in cert:
            _emit({"tag": entry.tag, "error": "statement", "message": cert["error"]}, out)
            status = max(status, 2)
            continue
        verdict = cert["verdict"]["status"]
        rec = {"tag": entry.tag, "level": cert["level"], "bound": cert.get("bound"),
               "verdict": verdict}
        mismatch = {k: v for k, v in entry.expect.items() if rec.get(k) != v}
        if mismatch:
            rec["expect_mismatch"] = mismatch
        if verdict != "proven" or mismatch:
            status = 1
        if certdir:
            path = certdir / f"{entry.tag}.json"
            path.write_text(certificate_json(cert))
            rec["certificate"] = str(path)
        _emit(rec, out)
    return status


# -- expand -----------------------------------------------------------------


def cmd_expand(ns, out) -> int:
    try:
        if ns.eproduct:
            p = parse_eproduct(ns.eproduct)
        else:
            p = parse_pochhammer(ns.poch).to_eproduct()
    except (ThetaError, ValueError) as exc:
        return _fail_input(str(exc), out)
    s = eprod_expand(p, ns.T)
    terms = [[_num(e), c] for e, c in s.items()]
    if ns.format == "text":
        for e, c in terms:
            out.write(f"{e} {c}\n")
    else:
        _emit({"eproduct": format_eproduct(p), "T": ns.T, "terms": terms}, out)
    return 0


# -- squares ----------------------------------------------------------------


def cmd_squares(ns, out) -> int:
    from .squares import (FAMILIES, FamilyDomainError, PairingError, SquareClassSpec,
                          admissible_parameters, build_bilateral, compile_theta,
                          parametric_instance, sign_pattern)

    if ns.action in ("compile", "pattern"):
        try:
            spec = SquareClassSpec.from_text(ns.spec)
            if ns.action == "compile":
                sums = build_bilateral(spec)
                prods = compile_theta(spec)
        except (PairingError, ValueError, KeyError) as exc:
            return _fail_input(str(exc), out)
        if ns.action == "pattern":
            bits = sign_pattern(spec, ns.count)
            _emit({"spec": spec.to_text(), "bits": "".join(map(str, bits))}, out)
            return 0
        _emit({
            "spec": spec.to_text(),
            "period": spec.period,
            "classes": list(spec.classes),
            "alternating": spec.alternating,
            "bilateral": [{"sign": b.sign, "A": _num(b.A), "B": _num(b.B), "C": _num(b.C)}
                          for b in sums],
            "products": [format_eproduct(p) for p in prods],
        }, out)
        return 0
    families = FAMILIES if ns.family == "all" else (ns.family,)
    status = 0
    for fam in families:
        if fam not in FAMILIES:
            return _fail_input(f"unknown family {fam!r}", out)
        for P, a in admissible_parameters(fam, ns.pmax):
            try:
                stmt = parametric_instance(fam, P, a)
            except FamilyDomainError as exc:
                _emit({"family": fam, "P": P, "a": a, "verdict": "error", "message": str(exc)}, out)
                status = 1
                continue
            cert = prove(stmt)
            verdict = cert["verdict"]["status"]
            if verdict != "proven":
                status = 1
            _emit({"family": fam, "P": P, "a": a, "tag": stmt.tag, "level": cert["level"],
                   "bound": cert.get("bound"), "verdict": verdict}, out)
    return status


# -- weierstrass ------------------------------------------------------------


def cmd_weierstrass(ns, out) -> int:
    from .weierstrass import WeierstrassInstance, instantiate_tadd, search_specialization

    if ns.action == "verify":
        status = 0
        for text in ns.instance:
            try:
                inst = WeierstrassInstance.parse(text)
            except (ValueError, KeyError) as exc:
                return _fail_input(f"{text!r}: {exc}", out)
            T = ns.T if ns.T is not None else 6 * inst.base
            rep = instantiate_tadd(inst, T)
            if not rep["holds"]:
                status = 1
            _emit(rep, out)
        return status
    if len(ns.target) != 2:
        return _fail_input("search needs exactly two --target products", out)
    try:
        A, B = (parse_pochhammer(t).to_eproduct() for t in ns.target)
    except (ThetaError, ValueError) as exc:
        return _fail_input(str(exc), out)
    T = ns.T if ns.T is not None else 6 * ns.base
    hits = search_specialization([A, B], ns.base, ns.bound, T)
    for inst in hits:
        _emit({"instance": str(inst)}, out)
    _emit({"base": ns.base, "bound": ns.bound, "hits": len(hits)}, out)
    return 0 if hits else 1


# -- partitions -------------------------------------------------------------


_CONJ = {"c41": "C41", "c41-inequalities": "C41-inequalities", "cexp": "Cexp"}


def cmd_partitions(ns, out) -> int:
    from .partitions import conjecture_scan, corollary_check, truncated_pentagonal_check

    if ns.action == "scan":
        which = _CONJ.get(ns.conjecture.lower())
        if which is None:
            return _fail_input(f"unknown conjecture {ns.conjecture!r}", out)
        S_set = tuple(int(s) for s in ns.S.split(","))
        rep = conjecture_scan(which, ns.kmax, ns.T, S_set)
        for cell in rep["cells"]:
            _emit({**cell, "T": ns.T}, out)
        _emit({"conjecture": which, "k_max": ns.kmax, "T": ns.T,
               "violations": rep["violations"]}, out)
        return 0 if rep["violations"] == 0 else 1
    status = 0
    for k in range(1, ns.kmax + 1):
        rep = (truncated_pentagonal_check(k, ns.T) if ns.action == "tpnt"
               else corollary_check(k, ns.T))
        if not rep["holds"]:
            status = 1
        _emit(rep, out)
    return status


# -- driver -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thetacert", description="Certified theta-product identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="prove corpus statements")
    p.add_argument("--corpus", default=None, help="corpus file (default: bundled theorems)")
    p.add_argument("--only", action="append", help="restrict to this tag (repeatable)")
    p.add_argument("--emit-certs", metavar="DIR", help="write one JSON certificate per statement")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--T", type=int, default=None,
                   help="verify coefficients through q^T as well (never fewer than the bound)")

    p = sub.add_parser("expand", help="print the q-expansion of a product")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--eproduct", help='E-product, e.g. "105: E22 / E43"')
    g.add_argument("--poch", help='Pochhammer product, e.g. "(q,q^6,q^7;q^7)/(q,q^4;q^5)"')
    p.add_argument("--T", type=int, default=20)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("squares", help="square-sequence generating functions")
    p.add_argument("action", choices=("compile", "pattern", "sweep"))
    p.add_argument("--spec", help='"K=840 bsq=361 signs=+,+,-,+,-,+,-,-"')
    p.add_argument("--count", type=int, default=32, help="pattern length")
    p.add_argument("--family", default="all")
    p.add_argument("--pmax", type=int, default=60)

    p = sub.add_parser("weierstrass", help="three-term theta relation")
    p.add_argument("action", choices=("verify", "search"))
    p.add_argument("--instance", action="append", default=[],
                   help='"base=35 u=q^10 v=q^3 x=q^14 y=q^6" (repeatable)')
    p.add_argument("--target", action="append", default=[], help="Pochhammer product (give two)")
    p.add_argument("--base", type=int, default=35)
    p.add_argument("--bound", type=int, default=35)
    p.add_argument("--T", type=int, default=None)

    p = sub.add_parser("partitions", help="partition identities and conjecture scans")
    p.add_argument("action", choices=("scan", "tpnt", "corollary"))
    p.add_argument("--conjecture", default="c41")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--T", type=int, default=300)
    p.add_argument("--S", default="1,2,3,4,5,6")
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ns = build_parser().parse_args(argv)
    if ns.command == "squares" and ns.action in ("compile", "pattern") and not ns.spec:
        return _fail_input("--spec is required", out)
    if ns.command == "weierstrass" and ns.action == "verify" and not ns.instance:
        return _fail_input("--instance is required", out)
    handler = {"prove": cmd_prove, "expand": cmd_expand, "squares": cmd_squares,
               "weierstrass": cmd_weierstrass, "partitions": cmd_partitions}[ns.command]
    return handler(ns, out)


if __name__ == "__main__":
    sys.exit(main())
