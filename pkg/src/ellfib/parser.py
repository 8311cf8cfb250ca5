"""Reader for fibration description files.

The format is line oriented; '#' starts a comment anywhere on a line.
Two input modes exist and cannot be mixed:

  branch mode, one declared branch per line:
      [branch NAME] va=0 vb=0 vdelta=2
  polynomial mode, a single global model whose coordinate-axis branches
  are derived automatically (named s-axis and t-axis):
      [weierstrass] a = s^2*t^2 b = -1/2*s^3*t^3

Shared sections:
      [collision] LEFT RIGHT [presentation=FILE.json]
      [topology] b2_X=23 rho_X=20 b2_S=2 rho_S=1
      [picard-degrees] 3 0

Valuations accept nonnegative integers or "inf".  Polynomials use infix
syntax over s and t with integer or ratio coefficients, explicit '*'
between factors and '^' for powers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import poly
from .errors import DegenerateModel, Diagnostic, ParseError, ValidationError
from .weierstrass import INFINITY, WeierstrassPolyModel, discriminant

__all__ = [
    "BranchDecl",
    "CollisionDecl",
    "FibrationDescription",
    "parse_description",
    "parse_polynomial",
    "render_description",
    "AXIS_BRANCH_NAMES",
]

AXIS_BRANCH_NAMES = ("s-axis", "t-axis")


@dataclass(frozen=True)
class BranchDecl:
    name: str
    va: object
    vb: object
    vdelta: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CollisionDecl:
    left: str
    right: str
    presentation: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FibrationDescription:
    mode: str  # "branches" or "weierstrass"
    branches: tuple[BranchDecl, ...]
    model: WeierstrassPolyModel | None
    collisions: tuple[CollisionDecl, ...]
    topology: tuple[int, int, int, int] | None
    picard_degrees: tuple[int, ...] | None


_TOKEN = re.compile(r"\s*(\d+|[st^*+/()-])")


def parse_polynomial(text: str, line: int = 0, col_offset: int = 0) -> poly.Poly:
    """Parse infix polynomial text into the sparse representation.

    Grammar:  poly  := [-] term ((+|-) term)*
              term  := factor (* factor)*
              factor:= INT [/ INT] | s | t | var ^ INT
    """
    tokens: list[tuple[str, int]] = []  # (token, column)
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            col = col_offset + len(text) - len(stripped) + 1
            raise ParseError([Diagnostic(line, col, f"unexpected character {stripped[0]!r} in polynomial")])
        tokens.append((m.group(1), col_offset + m.start(1) + 1))
        pos = m.end()

    idx = 0

    def peek() -> str | None:
        return tokens[idx][0] if idx < len(tokens) else None

    def fail(message: str):
        col = tokens[idx][1] if idx < len(tokens) else (
            tokens[-1][1] + len(tokens[-1][0]) if tokens else col_offset + 1
        )
        raise ParseError([Diagnostic(line, col, message)])

    def take() -> str:
        nonlocal idx
        tok = tokens[idx][0]
        idx += 1
        return tok

    def parse_factor() -> tuple[Fraction, int, int]:
        tok = peek()
        if tok is None:
            fail("expected a coefficient or variable")
        if tok.isdigit():
            take()
            num = int(tok)
            if peek() == "/":
                take()
                den = peek()
                if den is None or not den.isdigit():
                    fail("expected an integer denominator")
                take()
                if int(den) == 0:
                    fail("zero denominator")
                return Fraction(num, int(den)), 0, 0
            return Fraction(num), 0, 0
        if tok in ("s", "t"):
            take()
            exp = 1
            if peek() == "^":
                take()
                e = peek()
                if e is None or not e.isdigit():
                    fail("expected an integer exponent after '^'")
                take()
                exp = int(e)
            return (Fraction(1), exp, 0) if tok == "s" else (Fraction(1), 0, exp)
        fail(f"unexpected token {tok!r} in polynomial")

    def parse_term() -> poly.Poly:
        coeff, es, et = parse_factor()
        while peek() == "*":
            take()
            c2, e2s, e2t = parse_factor()
            coeff *= c2
            es += e2s
            et += e2t
        return poly.monomial(coeff, es, et)

    result = poly.zero()
    sign = 1
    if peek() == "-":
        take()
        sign = -1
    elif peek() == "+":
        take()
    while True:
        term = parse_term()
        result = poly.add(result, poly.scale(term, sign))
        tok = peek()
        if tok is None:
            break
        if tok == "+":
            sign = 1
        elif tok == "-":
            sign = -1
        else:
            fail(f"expected '+' or '-', got {tok!r}")
        take()
    return result


_SECTION = re.compile(r"^(\s*)\[([A-Za-z][A-Za-z0-9-]*)(?:\s+([^\]]*?))?\s*\](\s*)(.*)$")
_KEYVAL = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)")
_WEIERSTRASS = re.compile(r"^\s*a\s*=\s*(.+?)\s+b\s*=\s*(.+?)\s*$")


def _parse_valuation(text: str):
    if text.lower() in ("inf", "infinity"):
        return INFINITY
    if text.isdigit():
        return int(text)
    return None


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def parse_description(text: str) -> FibrationDescription:
    """Parse and validate a description file.

    Raises ParseError with positioned diagnostics for syntax problems,
    then ValidationError naming the offending branch or collision for
    semantic ones.
    """
    syntax: list[Diagnostic] = []
    branches: list[BranchDecl] = []
    collisions: list[CollisionDecl] = []
    model: WeierstrassPolyModel | None = None
    model_line = 0
    topology: tuple[int, int, int, int] | None = None
    degrees: tuple[int, ...] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _SECTION.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            syntax.append(Diagnostic(lineno, col, "expected a [section] header"))
            continue
        indent, section, header_arg, _gap, payload = m.groups()
        payload_col = m.start(5)  # 0-based column where the payload begins

        if section == "branch":
            if not header_arg:
                syntax.append(Diagnostic(lineno, len(indent) + 2, "[branch] needs a name"))
                continue
            name = header_arg.strip()
            vals = {}
            consumed = 0
            for kv in _KEYVAL.finditer(payload):
                vals[kv.group(1)] = kv.group(2)
                consumed += 1
            leftovers = _KEYVAL.sub("", payload).strip()
            if leftovers:
                syntax.append(Diagnostic(lineno, payload_col + 1, f"unexpected text {leftovers!r} in [branch]"))
                continue
            missing = [k for k in ("va", "vb", "vdelta") if k not in vals]
            extra = [k for k in vals if k not in ("va", "vb", "vdelta")]
            if missing or extra or consumed != 3:
                if missing:
                    what = f"missing {', '.join(missing)}"
                elif extra:
                    what = f"unexpected {', '.join(extra)}"
                else:
                    what = "duplicate keys"
                syntax.append(Diagnostic(lineno, payload_col + 1, f"[branch] needs va, vb, vdelta ({what})"))
                continue
            parsed = {k: _parse_valuation(v) for k, v in vals.items()}
            bad = [k for k, v in parsed.items() if v is None]
            if bad:
                syntax.append(Diagnostic(
                    lineno, payload_col + 1,
                    f"{bad[0]} must be a nonnegative integer or inf, got {vals[bad[0]]!r}",
                ))
                continue
            if parsed["vdelta"] == INFINITY:
                syntax.append(Diagnostic(lineno, payload_col + 1, "vdelta cannot be inf"))
                continue
            branches.append(BranchDecl(name, parsed["va"], parsed["vb"], parsed["vdelta"], lineno))

        elif section == "weierstrass":
            wm = _WEIERSTRASS.match(payload)
            if not wm:
                syntax.append(Diagnostic(lineno, payload_col + 1, "[weierstrass] needs 'a = POLY b = POLY'"))
                continue
            try:
                a = parse_polynomial(wm.group(1), lineno, payload_col + wm.start(1))
                b = parse_polynomial(wm.group(2), lineno, payload_col + wm.start(2))
            except ParseError as exc:
                syntax.extend(exc.diagnostics)
                continue
            if model is not None:
                syntax.append(Diagnostic(lineno, len(indent) + 2, "only one [weierstrass] model is allowed"))
                continue
            model = WeierstrassPolyModel(a, b)
            model_line = lineno

        elif section == "collision":
            parts = payload.split()
            pres = None
            if parts and parts[-1].startswith("presentation="):
                pres = parts[-1].split("=", 1)[1]
                parts = parts[:-1]
            if len(parts) != 2:
                syntax.append(Diagnostic(
                    lineno, payload_col + 1,
                    "[collision] needs two branch names and an optional presentation=FILE",
                ))
                continue
            collisions.append(CollisionDecl(parts[0], parts[1], pres, lineno))

        elif section == "topology":
            vals = dict(kv.groups() for kv in _KEYVAL.finditer(payload))
            keys = ("b2_X", "rho_X", "b2_S", "rho_S")
            if sorted(vals) != sorted(keys) or not all(v.isdigit() for v in vals.values()):
                syntax.append(Diagnostic(
                    lineno, payload_col + 1,
                    "[topology] needs b2_X, rho_X, b2_S, rho_S as nonnegative integers",
                ))
                continue
            topology = tuple(int(vals[k]) for k in keys)

        elif section == "picard-degrees":
            parts = payload.split()
            if not parts or not all(re.fullmatch(r"-?\d+", p) for p in parts):
                syntax.append(Diagnostic(lineno, payload_col + 1, "[picard-degrees] needs integers"))
                continue
            degrees = tuple(int(p) for p in parts)

        else:
            syntax.append(Diagnostic(lineno, len(indent) + 2, f"unknown section [{section}]"))

    if syntax:
        raise ParseError(syntax)

    semantic: list[Diagnostic] = []
    if model is not None and branches:
        semantic.append(Diagnostic(
            model_line, 1, "[weierstrass] and [branch] modes cannot be mixed"
        ))
    if model is None and not branches:
        semantic.append(Diagnostic(1, 1, "no branches declared: need [branch] lines or a [weierstrass] model"))

    seen: dict[str, int] = {}
    for b in branches:
        if b.name in seen:
            semantic.append(Diagnostic(b.line, 1, f"branch {b.name!r} declared twice"))
        seen[b.name] = b.line
        if b.name in AXIS_BRANCH_NAMES:
            semantic.append(Diagnostic(b.line, 1, f"branch name {b.name!r} is reserved for polynomial mode"))

    if model is not None:
        try:
            discriminant(model)
        except DegenerateModel as exc:
            semantic.append(Diagnostic(model_line, 1, str(exc)))
        declared = set(AXIS_BRANCH_NAMES)
    else:
        declared = {b.name for b in branches}

    for c in collisions:
        for side in (c.left, c.right):
            if side not in declared:
                hint = " (polynomial mode branches are 's-axis' and 't-axis')" if model is not None else ""
                semantic.append(Diagnostic(
                    c.line, 1, f"collision references undeclared branch {side!r}{hint}"
                ))
        if c.left == c.right:
            semantic.append(Diagnostic(
                c.line, 1, f"collision needs two distinct branches, got {c.left!r} twice"
            ))

    if semantic:
        raise ValidationError(semantic)

    return FibrationDescription(
        mode="weierstrass" if model is not None else "branches",
        branches=tuple(branches),
        model=model,
        collisions=tuple(collisions),
        topology=topology,
        picard_degrees=degrees,
    )


def _render_valuation(v) -> str:
    return "inf" if v == INFINITY else str(v)


def render_description(d: FibrationDescription) -> str:
    """Canonical text form; parsing it back yields an equal description
    (up to line numbers)."""
    lines = []
    if d.mode == "weierstrass":
        lines.append(f"[weierstrass] a = {poly.render(d.model.a)} b = {poly.render(d.model.b)}")
    else:
        for b in d.branches:
            lines.append(
                f"[branch {b.name}] va={_render_valuation(b.va)} "
                f"vb={_render_valuation(b.vb)} vdelta={_render_valuation(b.vdelta)}"
            )
    for c in d.collisions:
        extra = f" presentation={c.presentation}" if c.presentation else ""
        lines.append(f"[collision] {c.left} {c.right}{extra}")
    if d.topology:
        b2x, rx, b2s, rs = d.topology
        lines.append(f"[topology] b2_X={b2x} rho_X={rx} b2_S={b2s} rho_S={rs}")
    if d.picard_degrees:
        lines.append("[picard-degrees] " + " ".join(str(x) for x in d.picard_degrees))
    return "\n".join(lines) + "\n"
