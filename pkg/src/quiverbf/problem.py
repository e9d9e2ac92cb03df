"""Line-oriented problem files.

    # comment
    vertices 4
    arrow a1: 1 -> 4
    beta 1 1 2 2
    alpha 1 1 1 1        (or alphastar / sigma; repeat for several weights)
    m 1                  (optional)
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .quiver import Arrow, Quiver, Violations, convert_weight, validate_quiver

WEIGHT_KINDS = ("alpha", "alphastar", "sigma")


class ProblemError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column, self.message = line, column, message
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(loc + message)


@dataclass
class ProblemFile:
    quiver: Quiver
    beta: tuple
    weights: list = field(default_factory=list)  # (kind, vector) as written
    m: tuple | None = None

    @property
    def nweights(self) -> int:
        return len(self.weights)

    def exponents(self) -> tuple:
        return self.m or (1,) * self.nweights

    def alphas(self) -> list[tuple]:
        return [convert_weight(self.quiver, **{kind: vec}).alpha for kind, vec in self.weights]

    def sigmas(self) -> list[tuple]:
        return [convert_weight(self.quiver, **{kind: vec}).sigma for kind, vec in self.weights]


_ARROW = re.compile(r"^arrow\s+(?P<id>[^\s:]+)\s*:\s*(?P<tail>\S+)\s*->\s*(?P<head>\S+)\s*$")


def _ints(tokens, lineno, start_col, what):
    out = []
    for tok, col in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ProblemError(f"{what}: expected an integer, got {tok!r}", lineno, col) from None
    return tuple(out)


def _tokens(line: str):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def parse(text: str) -> ProblemFile:
    nverts = None
    arrows: list[Arrow] = []
    beta = None
    weights: list = []
    m = None
    where: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = _tokens(line)
        key, kcol = toks[0]
        args = toks[1:]
        if key == "vertices":
            if nverts is not None:
                raise ProblemError("vertices declared twice", lineno, kcol)
            vals = _ints(args, lineno, kcol, "vertices")
            if len(vals) != 1 or vals[0] <= 0:
                raise ProblemError("vertices takes one positive integer", lineno, kcol)
            nverts = vals[0]
        elif key == "arrow":
            mt = _ARROW.match(line.strip())
            if not mt:
                raise ProblemError("expected 'arrow <id>: <tail> -> <head>'", lineno, kcol)
            try:
                tail, head = int(mt["tail"]), int(mt["head"])
            except ValueError:
                raise ProblemError("arrow endpoints must be vertex numbers", lineno, kcol) from None
            arrows.append(Arrow(mt["id"], tail, head))
            where[mt["id"]] = lineno
        elif key in ("beta", *WEIGHT_KINDS, "m"):
            if nverts is None and key != "m":
                raise ProblemError(f"{key} before vertices", lineno, kcol)
            vals = _ints(args, lineno, kcol, key)
            if key == "m":
                if m is not None:
                    raise ProblemError("m given twice", lineno, kcol)
                if not vals or any(v <= 0 for v in vals):
                    raise ProblemError("m needs positive integers", lineno, kcol)
                m = vals
                where["m"] = (lineno, kcol)
                continue
            if len(vals) != nverts:
                raise ProblemError(f"{key} has {len(vals)} entries, expected {nverts}", lineno, kcol)
            if key == "beta":
                if beta is not None:
                    raise ProblemError("beta given twice", lineno, kcol)
                if any(v < 0 for v in vals):
                    raise ProblemError("beta must be nonnegative", lineno, kcol)
                beta = vals
            else:
                weights.append((key, vals))
                where[("w", len(weights) - 1)] = (lineno, kcol)
        else:
            raise ProblemError(f"unknown keyword {key!r}", lineno, kcol)

    if nverts is None:
        raise ProblemError("missing 'vertices'")
    if beta is None:
        raise ProblemError("missing 'beta'")
    Q = Quiver(tuple(range(1, nverts + 1)), tuple(arrows))
    check = validate_quiver(Q)
    if isinstance(check, Violations):
        named = lambda a: any(re.search(rf"(?<![\w']){re.escape(a.id)}(?![\w'])", v) for v in check.violations)
        first = next((where[a.id] for a in arrows if named(a)), 0)
        raise ProblemError("; ".join(check.violations), first, 1)
    if m is not None and len(m) != len(weights):
        ln, col = where["m"]
        raise ProblemError(f"m has {len(m)} entries but there are {len(weights)} weights", ln, col)
    pf = ProblemFile(Q, beta, weights, m)
    for i, sigma in enumerate(pf.sigmas()):
        val = sum(s * b for s, b in zip(sigma, beta))
        if val:
            ln, col = where[("w", i)]
            raise ProblemError(f"weight {i + 1} has sigma(beta) = {val}; it must be 0 "
                               f"(sigma = {' '.join(map(str, sigma))})", ln, col)
    return pf


def render(pf: ProblemFile) -> str:
    lines = [f"vertices {pf.quiver.n}"]
    for a in pf.quiver.arrows:
        lines.append(f"arrow {a.id}: {a.tail} -> {a.head}")
    lines.append("beta " + " ".join(map(str, pf.beta)))
    for kind, vec in pf.weights:
        lines.append(f"{kind} " + " ".join(map(str, vec)))
    if pf.m is not None:
        lines.append("m " + " ".join(map(str, pf.m)))
    return "\n".join(lines) + "\n"


def load(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
