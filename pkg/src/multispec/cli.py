"""Command-line front end.

Every subcommand builds a report ``{"schema", "command", "inputs",
"results", "status", "timing"}``.  Exact rationals are written as strings so
that the JSON form is lossless.  Exit codes: 0 success, 1 error, 2 when a
mathematical hypothesis of the requested computation does not hold.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Callable

from .classify import (
    distinct_critical_values_count,
    generalized_lattes_form,
    genus_hF,
    genus_hFH,
    gl_cubic_family,
    is_exceptional,
    is_presimple,
    ramification_portrait,
)
from .dynmaps import AffineMap, PolyMap, chebyshev, conjugacy_test, sigma_group
from .exactalg import Poly
from .ritt import ProgressionFailure, build_ritt_pair, normalize_pair, verify_progression
from .spectrum import (
    compare_iterates,
    multiplier_charpoly,
    spectra_equal_up_to,
    superattracting_cycle_count,
)

SCHEMA = "multispec/1"

__all__ = ["PolySyntaxError", "parse_poly", "run", "main"]


# ---------------------------------------------------------------------------
# polynomial grammar
# ---------------------------------------------------------------------------

class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


class _Parser:
    """expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" integer)?
    atom   := integer ("/" integer)? | "z" | "(" expr ")"
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, msg: str, pos: int | None = None):
        raise PolySyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Poly:
        if not self.text.strip():
            self.fail("empty polynomial", 0)
        p = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() == "*":
            self.pos += 1
            p = p * self.unary()
        return p

    def unary(self) -> Poly:
        c = self.peek()
        if c in ("+", "-"):
            self.pos += 1
            p = self.unary()
            return -p if c == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "-":
                self.fail("negative exponent")
            if not self.peek().isdigit():
                self.fail("exponent must be a nonnegative integer")
            return base ** self.integer()
        return base

    def atom(self) -> Poly:
        c = self.peek()
        if c.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                if not self.peek().isdigit():
                    self.fail("'/' is only allowed between integer literals")
                den = self.integer()
                if den == 0:
                    self.fail("zero denominator")
                return Poly([Fraction(num, den)])
            if self.peek() and (self.peek().isalpha() or self.peek() == "("):
                self.fail("implicit multiplication is not allowed")
            return Poly([num])
        if c == "z":
            self.pos += 1
            if self.peek() and (self.peek().isalnum() or self.peek() == "("):
                self.fail("implicit multiplication is not allowed")
            return Poly.z()
        if c == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return p
        if c.isalpha():
            self.fail(f"unknown variable {c!r} (only z is allowed)")
        if not c:
            self.fail("unexpected end of input")
        self.fail(f"unexpected {c!r}")


def parse_poly(text: str) -> Poly:
    """Parse a polynomial in ``z`` with rational coefficients."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _q(x) -> str:
    return str(Fraction(x))


def _poly(p: Poly) -> dict:
    return {"text": str(p), "coeffs": [_q(c) for c in p.coeffs]}


class _Outcome:
    def __init__(self, results: dict, status: str = "ok"):
        self.results = results
        self.status = status


HYPOTHESIS = "hypothesis not satisfied"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _map(text: str) -> PolyMap:
    return PolyMap(parse_poly(text))


def cmd_spectrum(a) -> _Outcome:
    f = _map(a.f)
    mp = multiplier_charpoly(f, a.n)
    sp = mp.to_spectrum()
    return _Outcome({
        "level": a.n,
        "degree": mp.degree,
        "charpoly": _poly(mp.charpoly),
        "sigmas": [_q(s) for s in sp.sigmas],
    })


def cmd_compare(a) -> _Outcome:
    res = spectra_equal_up_to(_map(a.f), _map(a.g), a.m)
    return _Outcome({"equal": res.equal, "first_diff": res.first_diff, "levels": a.m})


def cmd_stable_compare(a) -> _Outcome:
    res = compare_iterates(_map(a.f), _map(a.g), a.k, a.m)
    return _Outcome({"equal": res.equal, "first_diff": res.first_diff, "k": a.k, "levels": a.m})


def cmd_ritt(a) -> _Outcome:
    pair = build_ritt_pair(a.r, a.k, parse_poly(a.R))
    npair = normalize_pair(pair)
    try:
        report = verify_progression(pair, a.terms)
    except ProgressionFailure as exc:
        report = exc.report
    params = report.params
    results = {
        "P": _poly(pair.P.poly),
        "Q": _poly(pair.Q.poly),
        "normalized": {"r": npair.r, "k": npair.k, "R": _poly(npair.R)},
        "valid": params.valid,
        "c1": params.c1,
        "d": params.d,
        "reason": params.reason,
        "progression": params.levels(a.terms),
        "levels": [
            {"level": c.level, "equal": c.equal, "good": c.good, "in_progression": c.in_progression}
            for c in report.checks
        ],
        "truncated_at": report.truncated_at,
        "verdict": report.status,
    }
    if report.status == "failure":
        return _Outcome(results, "failed")
    return _Outcome(results, HYPOTHESIS if not params.valid else "ok")


def _gl(form) -> dict | None:
    if form is None:
        return None
    w = form.witness
    if isinstance(w, Poly):
        w = {"root_of": _poly(w)}
    elif w is not None:
        w = _q(w)
    return {"r": form.r, "n": form.n, "witness": w, "source": form.source}


def cmd_classify(a) -> _Outcome:
    f = _map(a.f)
    exc = is_exceptional(f)
    return _Outcome({
        "degree": f.degree,
        "critical_values": distinct_critical_values_count(f),
        "presimple": is_presimple(f),
        "exceptional": exc.tag,
        "gl_form": _gl(generalized_lattes_form(f)),
    })


def _portrait(p) -> list:
    return [{"values": _poly(c.values), "profiles": [list(x) for x in c.profiles]} for c in p.classes]


def cmd_genus(a) -> _Outcome:
    f = _map(a.f)
    if a.g is None:
        return _Outcome({"genus": genus_hF(f), "portrait": _portrait(ramification_portrait(f))})
    g = _map(a.g)
    return _Outcome({"genus": genus_hFH(f, g), "portrait": _portrait(ramification_portrait(f, g))})


def cmd_sac(a) -> _Outcome:
    rep = superattracting_cycle_count(_map(a.f), a.bound)
    return _Outcome({
        "count": rep.count,
        "per_period": [list(x) for x in rep.per_period],
        "certified_complete": rep.certified_complete,
        "bound": rep.bound,
        "unresolved": [_poly(u) for u in rep.unresolved],
    })


def _affine(w: AffineMap) -> dict:
    if w.is_rational:
        return {"scale": _q(w.scale), "shift": _q(w.shift), "text": str(w)}
    c = w.scale
    return {
        "scale": {"root_degree": c.g, "power": _q(c.rho)},
        "pre_shift": _q(w.pre_shift),
        "shift": _q(w.shift),
        "text": str(w),
    }


def cmd_conj(a) -> _Outcome:
    w = conjugacy_test(_map(a.f), _map(a.g))
    return _Outcome({"conjugate": w is not None, "witness": None if w is None else _affine(w)})


def _repro_cases() -> list[tuple[str, Callable[[], bool]]]:
    z = Poly.z()
    P23, Q23 = z ** 2 * (z ** 3 + 1), z ** 2 * (z + 1) ** 3
    T = lambda d: chebyshev(d).poly

    def ritt_example():
        rep = verify_progression(build_ritt_pair(2, 3, z + 1), 2)
        eq = {c.level: c.equal for c in rep.checks}
        return rep.params.c1 == 1 and rep.params.d == 2 and eq == {1: True, 2: False, 3: True}

    def conj_pair():
        w = conjugacy_test(z * (z ** 2 - 3), z * (z - 3) ** 2)
        return w is not None and w.scale == 1 and w.shift == 2

    def presimple_genus():
        fs = {4: z ** 4 + z ** 3 - 2 * z + 1, 5: z ** 5 + 2 * z ** 2 - z + 3, 6: z ** 6 + z ** 4 - z + 1}
        return all(is_presimple(f) and genus_hF(f) == (m - 2) * (m - 3) // 2 for m, f in fs.items())

    return [
        ("two-three Ritt move, levels 1-3", ritt_example),
        ("two-three Ritt move, level 4 differs",
         lambda: spectra_equal_up_to(P23, Q23, 4) == (False, 2)
         and multiplier_charpoly(P23, 4).charpoly != multiplier_charpoly(Q23, 4).charpoly),
        ("conjugate Ritt pair, shift 2", conj_pair),
        ("conjugate Ritt pair, equal spectra to level 3",
         lambda: spectra_equal_up_to(z * (z ** 2 - 3), z * (z - 3) ** 2, 3).equal),
        ("Chebyshev commute and differential identity",
         lambda: all(T(p)(T(q)) == T(q)(T(p)) == T(p * q) for p in range(1, 6) for q in range(1, 6))
         and all((4 - z ** 2) * T(d).derivative() ** 2 == d * d * (4 - T(d) ** 2) for d in range(2, 7))),
        ("symmetries of z^2 + c",
         lambda: all(g.orders == (1, 2) for c in (Fraction(1, 3), Fraction(-2), Fraction(5, 7))
                     for g in sigma_group(z ** 2 + c, 3))),
        ("pre-simple genus table", presimple_genus),
        ("odd-map iterates coincide",
         lambda: compare_iterates(z * (z ** 2 + 1), -z * (z ** 2 + 1), 2, 2).equal),
        ("degree-3 generalized Lattes family",
         lambda: generalized_lattes_form(gl_cubic_family(2, Fraction(1, 3), -1)) is not None),
    ]


def cmd_repro(a) -> _Outcome:
    rows = []
    for name, fn in _repro_cases():
        try:
            ok = bool(fn())
        except Exception as exc:  # report, keep going
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        rows.append({"case": name, "pass": ok})
    status = "ok" if all(r["pass"] for r in rows) else "failed"
    return _Outcome({"cases": rows}, status)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

class _ArgError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def _build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="multispec", description="Exact multiplier spectra of polynomial maps.")
    ap.add_argument("--json", action="store_true", help="emit the report as one JSON object")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=fn)
        return p

    p = add("spectrum", cmd_spectrum, "multiplier polynomial and spectrum at one level")
    p.add_argument("-f", required=True)
    p.add_argument("-n", type=int, required=True)

    p = add("compare", cmd_compare, "compare spectra at levels 1..m")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.add_argument("-m", type=int, required=True)

    p = add("ritt", cmd_ritt, "verify the spectrum progression of a Ritt move")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-R", required=True)
    p.add_argument("--terms", type=int, default=2)

    p = add("classify", cmd_classify, "pre-simple, exceptional and generalized Lattes tests")
    p.add_argument("-f", required=True)

    p = add("genus", cmd_genus, "genus formula for F(x)=F(y) or F(x)=G(y)")
    p.add_argument("-f", required=True)
    p.add_argument("-g", default=None)

    p = add("sac", cmd_sac, "count superattracting cycles")
    p.add_argument("-f", required=True)
    p.add_argument("--bound", type=int, default=10)

    p = add("stable-compare", cmd_stable_compare, "compare spectra of k-th iterates")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-m", type=int, required=True)

    p = add("conj", cmd_conj, "affine conjugacy test")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)

    p = add("verify-report", cmd_verify, "re-run a JSON report and compare results")
    p.add_argument("report", help="path to a JSON report, or - for stdin")

    add("repro", cmd_repro, "run the built-in example corpus")
    return ap


_INPUT_KEYS = ("f", "g", "n", "m", "k", "r", "R", "terms", "bound", "report")


def _inputs(args) -> dict:
    return {k: getattr(args, k) for k in _INPUT_KEYS if getattr(args, k, None) is not None}


def _argv_from_report(rep: dict) -> list[str]:
    cmd = rep["command"]
    argv = [cmd]
    for k, v in rep.get("inputs", {}).items():
        flag = f"--{k}" if k in ("terms", "bound") else f"-{k}"
        argv.append(f"{flag}={v}")
    return argv


def cmd_verify(a) -> _Outcome:
    src = sys.stdin.read() if a.report == "-" else open(a.report, encoding="utf-8").read()
    rep = json.loads(src)
    if rep.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {rep.get('schema')!r}")
    if rep.get("command") in ("verify-report",):
        raise ValueError("cannot verify a verification report")
    fresh, _ = run(_argv_from_report(rep))
    same = fresh["results"] == rep.get("results") and fresh["status"] == rep.get("status")
    return _Outcome({"command": rep.get("command"), "identical": same},
                    "ok" if same else "mismatch")


def run(argv: list[str]) -> tuple[dict, int]:
    """Execute one command; returns ``(report, exit_code)``."""
    t0 = time.perf_counter()
    report: dict[str, Any] = {"schema": SCHEMA, "command": argv[0] if argv else None, "inputs": {}}
    try:
        args = _build_parser().parse_args(argv)
        report["command"] = args.command
        report["inputs"] = _inputs(args)
        out = args.handler(args)
        report["results"] = out.results
        report["status"] = out.status
        code = 2 if out.status == HYPOTHESIS else (0 if out.status == "ok" else 1)
    except (_ArgError, ValueError, ArithmeticError, OSError) as exc:
        report["results"] = {"error": str(exc), "type": type(exc).__name__}
        report["status"] = "error"
        code = 1
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return report, code


def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                sub = _text(v, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip())
                lines += sub[1:]
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    argv = [x for x in argv if x != "--json"]
    report, code = run(argv)
    if as_json:
        print(json.dumps(report, sort_keys=False))
    else:
        out = [f"command: {report['command']}", f"status: {report['status']}"]
        out += _text(report.get("results", {}))
        out.append(f"time: {report['timing']['seconds']:.3f}s")
        print("\n".join(out))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
