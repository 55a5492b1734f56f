"""Command-line interface.

Exit codes: 0 definite verdict, 2 Unrecognized, 3 Inconclusive, 4 input
error, 5 precondition violation (corank 2, n != 2, recognition refused for a
non-frontal, ...).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .errors import (CorankError, FrontalRecError, InconclusiveError, NotFrontalError,
                     PreconditionError)
from .frontal import FrontalStatus, adapt_target, frontality, is_front, kernel_field
from .germs import corank
from .jets import DEFAULT_ORDER
from .parsing import ParseError, parse_document
from .recognize import MAX_ETA_ORDER, Tag, recognize, vanishing_order
from .report import base_report, certificate_json, dumps, plain, render_text

EXIT_OK, EXIT_UNRECOGNIZED, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3, 4, 5

BATCH_SUFFIXES = (".germ", ".json", ".txt")


def _load(path, order):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    doc = parse_document(text)
    N = order or doc.order or DEFAULT_ORDER
    return doc, doc.to_jetmap(N), N


def _frontal_summary(fd, names):
    out = {"status": fd.status.value}
    if fd.lam is not None:
        out["jacobian"] = fd.lam.to_str(names)
        out["generator_index"] = [i + 1 for i in fd.generator_index]
    if fd.witness:
        I0, I, deg = fd.witness
        out["witness"] = {"generator": [i + 1 for i in I0], "minor": [i + 1 for i in I], "degree": deg}
    if fd.reason:
        out["reason"] = fd.reason
    if fd.order is not None:
        out["inconclusive_order"] = fd.order
    return out


def cmd_recognize(doc, f, N, args):
    rep = base_report("recognize", doc, N)
    names = doc.vars
    try:
        res = recognize(f)
    except NotFrontalError as exc:
        rep["verdict"] = exc.frontal_data.status.value
        rep["refused"] = "recognition requires a proper frontal"
        rep["frontality"] = _frontal_summary(exc.frontal_data, names)
        return rep, (EXIT_INCONCLUSIVE if exc.frontal_data.status is FrontalStatus.INCONCLUSIVE
                     else EXIT_PRECONDITION)
    rep["verdict"] = res.tag.value
    if res.detail:
        rep["detail"] = res.detail
    if res.order is not None:
        rep["inconclusive_order"] = res.order
    if res.frontal is not None and res.frontal.lam is not None:
        rep["jacobian"] = res.frontal.lam.to_str(names)
    if res.frame is not None:
        rep["normalized_frame"] = [c.to_str(["s1", "s2"]) for c in res.frame]
    rep["certificate"] = certificate_json(res.certificate)
    if res.certificate.notes:
        rep["notes"] = list(res.certificate.notes)
    code = EXIT_OK
    if res.tag is Tag.UNRECOGNIZED:
        code = EXIT_UNRECOGNIZED
    elif res.tag is Tag.INCONCLUSIVE:
        code = EXIT_INCONCLUSIVE
    return rep, code


def cmd_frontality(doc, f, N, args):
    rep = base_report("frontality", doc, N)
    fd = frontality(f)
    rep["verdict"] = fd.status.value
    rep.update({k: v for k, v in _frontal_summary(fd, doc.vars).items() if k != "status"})
    return rep, EXIT_INCONCLUSIVE if fd.status is FrontalStatus.INCONCLUSIVE else EXIT_OK


def cmd_jacobian(doc, f, N, args):
    rep = base_report("jacobian", doc, N)
    names = doc.vars
    fd = frontality(f)
    rep["verdict"] = fd.status.value
    rep["minors"] = {"".join(str(i + 1) for i in I): D.to_str(names) for I, D in fd.minors.items()}
    if not fd.is_proper:
        rep.update({k: v for k, v in _frontal_summary(fd, names).items() if k != "status"})
        return rep, EXIT_INCONCLUSIVE if fd.status is FrontalStatus.INCONCLUSIVE else EXIT_OK
    rep["jacobian"] = fd.lam.to_str(names)
    rep["generator_index"] = [i + 1 for i in fd.generator_index]
    rep["pluecker"] = {"".join(str(i + 1) for i in I): h.to_str(names) for I, h in fd.pluecker.items()}
    rep["singular_locus"] = f"{fd.lam.to_str(names)} = 0"
    rep["adapting_matrix"] = plain(fd.adapted)
    k = corank(f)
    rep["corank"] = k
    if k == 1:
        eta = kernel_field(f)
        rep["kernel_field"] = [c.to_str(names) for c in eta.coeffs]
    if f.m > f.n and k <= 1:
        try:
            rep["front"] = is_front(f, fd)
        except InconclusiveError as exc:
            rep["front"] = f"inconclusive: {exc.reason}"
    return rep, EXIT_OK


def cmd_orders(doc, f, N, args):
    rep = base_report("orders", doc, N)
    names = doc.vars
    cap = args.max_eta_order
    fd = frontality(f)
    if not fd.is_proper:
        raise NotFrontalError(fd)
    k = corank(f)
    if k != 1:
        raise CorankError(k)
    fa = adapt_target(f, fd)
    eta = kernel_field(fa)
    rep["kernel_field"] = [c.to_str(names) for c in eta.coeffs]
    rep["adapted"] = [c.to_str(names) for c in fa]
    orders = {}
    code = EXIT_OK

    def one(label, h):
        nonlocal code
        try:
            orders[label] = vanishing_order(h, eta, cap)
        except InconclusiveError as exc:
            orders[label] = f"inconclusive: {exc.reason}"
            code = EXIT_INCONCLUSIVE

    one("lambda", fd.lam)
    for i in range(f.n, f.m):
        one(f"f{i + 1}", fa[i])
    rep["orders"] = orders
    rep["max_eta_order"] = cap
    return rep, code


def cmd_opening(docs, maps, N, args):
    from .openings import is_opening, is_versal_opening, j_module_equal

    (fdoc, gdoc), (f, g) = docs, maps
    rep = {"tool": "frontalrec", "version": __version__, "command": "opening", "order": N,
           "input": {"f": fdoc.to_json(), "g": gdoc.to_json()}}
    try:
        opening = is_opening(f, g)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    rep["opening"] = opening
    if opening:
        vr = is_versal_opening(f, g)
        rep["versal"] = vr.versal
        rep["versal_order"] = vr.degree
        if vr.missing:
            rep["missing"] = [h.to_str(fdoc.vars) for h in vr.missing[:5]]
    jm = j_module_equal(f, g)
    rep["jacobi_modules_equal"] = jm.equal
    rep["jacobi_module_degree"] = jm.degree
    if jm.obstruction:
        rep["obstruction"] = jm.obstruction
    return rep, EXIT_OK


def cmd_selftest(args):
    from .gallery import CATALOG, normal_form, random_a_perturbation

    N = args.order or DEFAULT_ORDER
    rep = {"tool": "frontalrec", "version": __version__, "command": "selftest", "order": N,
           "seed": args.seed, "count": args.count}
    results = {}
    ok = True
    for tag, kw in CATALOG:
        f = normal_form(tag, order=N, **kw)
        label = tag.value + "".join(f"[{k}={v}]" for k, v in kw.items())
        agree = 0
        for s in range(args.seed, args.seed + args.count):
            if recognize(random_a_perturbation(f, s)).tag is tag:
                agree += 1
        results[label] = f"{agree}/{args.count}"
        ok = ok and agree == args.count
    rep["agreement"] = results
    rep["verdict"] = "pass" if ok else "fail"
    return rep, EXIT_OK if ok else EXIT_UNRECOGNIZED


COMMANDS = {
    "recognize": cmd_recognize,
    "frontality": cmd_frontality,
    "jacobian": cmd_jacobian,
    "orders": cmd_orders,
}


def run_file(command, path, args):
    """Run one single-file command; returns (report dict, exit code)."""
    try:
        doc, f, N = _load(path, args.order)
        return COMMANDS[command](doc, f, N, args)
    except (ParseError, OSError, UnicodeDecodeError) as exc:
        return _error_report(command, path, "input error", exc), EXIT_INPUT
    except NotFrontalError as exc:
        rep = _error_report(command, path, "precondition", exc)
        rep["verdict"] = exc.frontal_data.status.value
        return rep, EXIT_PRECONDITION
    except (CorankError, PreconditionError) as exc:
        return _error_report(command, path, "precondition", exc), EXIT_PRECONDITION
    except InconclusiveError as exc:
        rep = _error_report(command, path, "inconclusive", exc)
        rep["verdict"] = Tag.INCONCLUSIVE.value
        return rep, EXIT_INCONCLUSIVE
    except (FrontalRecError, ValueError) as exc:
        return _error_report(command, path, "precondition", exc), EXIT_PRECONDITION


def _error_report(command, path, kind, exc):
    return {"tool": "frontalrec", "version": __version__, "command": command,
            "file": str(path), "error": kind, "message": str(exc)}


def _emit(rep, fmt, out):
    out.write((dumps(rep) if fmt == "json" else render_text(rep)) + "\n")


def _batch_job(job):
    command, path, args = job
    return run_file(command, path, args)


def build_parser():
    p = argparse.ArgumentParser(prog="frontalrec", description="Recognize frontal map-germs from polynomial jets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, batch=True):
        sp.add_argument("--order", type=int, default=None, help=f"truncation order (default {DEFAULT_ORDER})")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if batch:
            sp.add_argument("--batch", metavar="DIR", help="process every germ file in DIR")
            sp.add_argument("--jobs", type=int, default=1, help="parallel workers for --batch")

    for name, helptext in (("recognize", "classify a germ and print a certificate"),
                           ("frontality", "test frontality"),
                           ("jacobian", "minors, Jacobian, Pluecker coefficients, kernel field"),
                           ("orders", "vanishing orders along the kernel field")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file", nargs="?")
        common(sp)
        if name == "orders":
            sp.add_argument("--max-eta-order", type=int, default=MAX_ETA_ORDER)
    sp = sub.add_parser("opening", help="opening / versal opening / Jacobi module comparison of f over g")
    sp.add_argument("f_file")
    sp.add_argument("g_file")
    common(sp, batch=False)
    sp = sub.add_parser("selftest", help="classify random A-equivalent copies of the catalog")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=5)
    common(sp, batch=False)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = sys.stdout
    if args.order is not None and args.order < 1:
        out.write("error: --order must be positive\n")
        return EXIT_INPUT
    if args.command == "selftest":
        rep, code = cmd_selftest(args)
        _emit(rep, args.format, out)
        return code
    if args.command == "opening":
        try:
            fdoc, f, N = _load(args.f_file, args.order)
            gdoc, g, _ = _load(args.g_file, N)
            f = f.with_order(N)
        except (ParseError, OSError) as exc:
            _emit(_error_report("opening", args.f_file, "input error", exc), args.format, out)
            return EXIT_INPUT
        try:
            rep, code = cmd_opening((fdoc, gdoc), (f, g), N, args)
        except (FrontalRecError, ValueError) as exc:
            rep, code = _error_report("opening", args.f_file, "precondition", exc), EXIT_PRECONDITION
        _emit(rep, args.format, out)
        return code
    if args.batch:
        if not os.path.isdir(args.batch):
            out.write(f"error: {args.batch} is not a directory\n")
            return EXIT_INPUT
        paths = sorted(os.path.join(args.batch, n) for n in os.listdir(args.batch)
                       if n.endswith(BATCH_SUFFIXES))
        jobs = [(args.command, p, args) for p in paths]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as ex:
                results = list(ex.map(_batch_job, jobs))
        else:
            results = [_batch_job(j) for j in jobs]
        worst = EXIT_OK
        for path, (rep, code) in zip(paths, results):
            rep = {"file": path, **rep} if "file" not in rep else rep
            _emit(rep, args.format, out)
            worst = max(worst, code)
        return worst
    if not args.file:
        out.write("error: a germ file (or --batch DIR) is required\n")
        return EXIT_INPUT
    rep, code = run_file(args.command, args.file, args)
    _emit(rep, args.format, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
