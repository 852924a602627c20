"""Command line entry point and the polynomial parser it uses."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .algebra.multipoly import MultiPoly
from .assembly import TrackingFailure, load_trunk
from .carrousel import StaleLadder, UncertifiedExpansion
from .errors import (
    EliminationError,
    HypothesisViolation,
    InternalError,
    InvalidTrunk,
    IsolationError,
    TowerError,
    TruncationTooShort,
)
from .pipeline import RunConfig, emit_dot, emit_json, report_dict, run_pipeline

EXIT_OK = 0
EXIT_USAGE = 2  # argparse's own code
EXIT_PARSE = 3
EXIT_HYPOTHESIS = 4
EXIT_TRUNCATION = 5
EXIT_INTERNAL = 6
EXIT_TRUNK = 7

VARIABLES = ("x", "y", "z")


class PolynomialSyntaxError(ValueError):
    def __init__(self, text: str, position: int, expected: str, found: str | None = None):
        self.text = text
        self.position = position
        self.expected = expected
        self.found = found
        what = "end of input" if found is None else repr(found)
        super().__init__(f"at position {position}: expected {expected}, found {what}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


class UnknownVariable(PolynomialSyntaxError):
    def __init__(self, text: str, position: int, name: str, allowed: tuple[str, ...] = VARIABLES):
        names = ", ".join(allowed)
        super().__init__(text, position, f"one of {names}", name)
        self.args = (f"at position {position}: unknown variable {name!r}; expected one of {names}",)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def _tokens(text: str) -> list[_Token]:
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(_Token("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("name", text[i:j], i))
            i = j
        elif text.startswith("**", i):
            out.append(_Token("op", "^", i))
            i += 2
        elif ch in "+-*/^()":
            out.append(_Token("op", ch, i))
            i += 1
        elif ch == "−":  # typographic minus
            out.append(_Token("op", "-", i))
            i += 1
        else:
            raise PolynomialSyntaxError(text, i, "a number, a variable, an operator or a parenthesis", ch)
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    """Recursive descent over

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary | unary-without-sign)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" integer)?
    atom   := number | variable | "(" expr ")"

    Juxtaposition means multiplication (``2x``, ``x y``).  A sign may be
    repeated, so ``z^2 - - y`` is ``z^2 + y``.  Division is only by nonzero
    rational constants.
    """

    def __init__(self, text: str, variables: tuple[str, ...] = VARIABLES):
        self.text = text
        self.variables = variables
        self.toks = _tokens(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.toks[self.i]

    def _fail(self, expected: str):
        t = self.tok
        raise PolynomialSyntaxError(self.text, t.pos, expected, None if t.kind == "end" else t.text)

    def _eat(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> MultiPoly:
        if self.tok.kind == "end":
            self._fail("an expression")
        p = self.expr()
        if self.tok.kind != "end":
            self._fail("an operator or end of input")
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while True:
            if self._eat("+"):
                p = p + self.term()
            elif self._eat("-"):
                p = p - self.term()
            else:
                return p

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("num", "name") or (t.kind == "op" and t.text == "(")

    def term(self) -> MultiPoly:
        p = self.unary()
        while True:
            if self._eat("*"):
                p = p * self.unary()
            elif self.tok.kind == "op" and self.tok.text == "/":
                pos = self.tok.pos
                self.i += 1
                q = self.unary()
                if not q.is_constant() or q.is_zero():
                    raise PolynomialSyntaxError(self.text, pos, "division by a nonzero constant")
                p = p.scale(1 / Fraction(q.evaluate({})))
            elif self._starts_atom():
                p = p * self.power()
            else:
                return p

    def unary(self) -> MultiPoly:
        if self._eat("-"):
            return -self.unary()
        if self._eat("+"):
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self._eat("^"):
            if self.tok.kind != "num":
                self._fail("a non-negative integer exponent")
            n = int(self.tok.text)
            self.i += 1
            return base ** n
        return base

    def atom(self) -> MultiPoly:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return MultiPoly.constant(Fraction(int(t.text)))
        if t.kind == "name":
            if t.text not in self.variables:
                raise UnknownVariable(self.text, t.pos, t.text, self.variables)
            self.i += 1
            return MultiPoly.var(t.text)
        if self._eat("("):
            p = self.expr()
            if not self._eat(")"):
                self._fail("')'")
            return p
        self._fail("a number, a variable or '('")


def parse_polynomial(text: str, variables: tuple[str, ...] = VARIABLES) -> MultiPoly:
    """Exact polynomial from its usual infix notation (``^`` or ``**`` for powers).

    Only x, y, z are accepted by default; pass ``("x", "y", "t")`` to read a
    discriminant.
    """
    return _Parser(text, variables).parse()


def _read_input(arg: str) -> tuple[str, str]:
    p = Path(arg)
    try:
        if p.is_file():
            return p.read_text(encoding="utf-8").strip(), str(p)
    except OSError:
        pass
    return arg, "<inline>"


def _shear(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated rationals 'lambda,mu,nu'")
    try:
        return tuple(Fraction(s) for s in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vanzone",
        description="Decompose the vanishing zone of a non-isolated surface singularity z-germ f(x, y, z).",
    )
    ap.add_argument("-i", "--input", required=True, help="file holding the polynomial, or the polynomial itself")
    ap.add_argument("--truncation", type=_positive_fraction, default=Fraction(5), metavar="R",
                    help="initial truncation order of the expansions (doubled on demand, default 5)")
    ap.add_argument("--json", metavar="PATH", help="write the full report as JSON ('-' for stdout)")
    ap.add_argument("--dot", metavar="PATH", help="write the decomposition graph in DOT ('-' for stdout)")
    ap.add_argument("--probe", action="store_true", help="run the independent numeric estimate of the pairs")
    ap.add_argument("--probe-alpha", type=float, default=0.5, help="radius of the x-circle for the probe")
    ap.add_argument("--probe-eta", type=float, default=1e-3, help="largest |t| used by the probe")
    ap.add_argument("--denominator-bound", type=int, default=12, help="largest denominator when snapping slopes")
    ap.add_argument("--trunk", metavar="PATH", help="trunk description to compare the vanishing zone against")
    ap.add_argument("--shear", type=_shear, metavar="L,M,N", help="coordinate change applied before anything else")
    ap.add_argument("--seed", type=int, default=0, help="seed for the probe's sample phases")
    return ap


def format_report(report: dict) -> str:
    lines = [f"f = {report['polynomial']}"]
    if report["shear"]:
        lines.append(f"shear {report['shear']}")
    for k, run in enumerate(report["sigma_branches"]):
        tr = run["transversal"]
        lines.append(f"singular branch {k}: {run['sigma']}")
        lines.append(f"  N = {run['covering_degree']}, mu = {tr['mu']}, transversal branches = {tr['branch_count']}")
        lines.append(f"  D = {run['discriminant']['D']}")
        for b in run["branches"]:
            lines.append(f"  branch pair ({b['pair'][0]}, {b['pair'][1]}) in Z{tuple(b['zone'])}, b = {b['b']}")
        for z in run["ladder"]["zones"]:
            lines.append(f"  {z}")
        g = run["graph"]
        lines.append(f"  graph: r = {g['boundary_tori']}, g = {g['g']}, s = {g['s'][0]}, cycle rank = {g['cycle_rank']}")
        for p in g["pieces"]:
            ms = [e["multiplicity"] for e in p["exceptional_fibers"] if e["multiplicity"] > 1]
            lines.append(
                f"    piece {p['id']} Z{tuple(p['zone'])}: genus {p['base_genus']}, "
                f"{p['boundary_count']} boundary, slope {tuple(p['slope'])}, exceptional {ms}"
            )
        if g["q_manifold"]:
            lines.append("  Q-manifold (r = 1, annulus fibre)")
        if run["verdict"]:
            lines.append(f"  verdict: {run['verdict']['verdict']}")
            lines.extend(f"    {d}" for d in run["verdict"]["details"])
    if report.get("probe"):
        for k, pr in report["probe"].items():
            if pr["status"] != "ok":
                lines.append(f"probe {k}: inconclusive ({pr.get('reason')})")
                continue
            found = ", ".join(f"({p['pair'][0]}, {p['pair'][1]})" for p in pr["pairs"])
            lines.append(f"probe {k}: {found}; residual {pr['max_residual']:.2e}; agrees = {pr.get('agrees')}")
    return "\n".join(lines)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    err = sys.stderr
    text, source = _read_input(args.input)
    try:
        f = parse_polynomial(text)
    except PolynomialSyntaxError as exc:
        print(f"parse error in {source}: {exc}\n{exc.caret()}", file=err)
        return EXIT_PARSE
    try:
        trunk = load_trunk(args.trunk) if args.trunk else None
        cfg = RunConfig(
            polynomial=f,
            text=text,
            truncation=args.truncation,
            shear=args.shear,
            trunk=trunk,
            probe=args.probe,
            probe_alpha=args.probe_alpha,
            probe_eta=args.probe_eta,
            denominator_bound=args.denominator_bound,
            seed=args.seed,
        )
    except InvalidTrunk as exc:
        print(f"trunk: {exc}", file=err)
        return EXIT_TRUNK
    except OSError as exc:
        print(f"trunk: {exc}", file=err)
        return EXIT_TRUNK
    except ValueError as exc:
        print(f"configuration: {exc}", file=err)
        return EXIT_USAGE
    try:
        result = run_pipeline(cfg)
    except HypothesisViolation as exc:
        print(f"geometry: hypothesis violated: {exc}", file=err)
        return EXIT_HYPOTHESIS
    except (TruncationTooShort, StaleLadder, UncertifiedExpansion) as exc:
        print(f"puiseux: truncation too short after retries: {exc}\n  hint: raise --truncation", file=err)
        return EXIT_TRUNCATION
    except InvalidTrunk as exc:
        print(f"assembly: {exc}\n  hint: the trunk must have as many boundary tori as the vanishing zone", file=err)
        return EXIT_TRUNK
    except (InternalError, TrackingFailure, EliminationError, IsolationError, TowerError) as exc:
        print(f"{type(exc).__module__.split('.')[-1]}: internal error: {exc}\n  hint: try --shear or another --seed",
              file=err)
        return EXIT_INTERNAL
    report = report_dict(result)
    if args.json:
        _write(args.json, emit_json(report))
    if args.dot:
        _write(args.dot, emit_dot(report))
    if args.json != "-" and args.dot != "-":
        print(format_report(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
