"""Space descriptors and the ``family:key=value,...`` mini-language.

Examples::

    lp:p=2
    lpq:p=2,q=inf
    lorentz:q=2,w=power(0.5)
    lorentz:q=1,w=invlog
    orlicz:powerlog(p=2,a=1)

:func:`parse_space` and :meth:`SpaceDescriptor.describe` round-trip: the
described text of a parsed descriptor parses to an equal descriptor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from .orlicz import OrliczGenerator
from .weights import WeightGenerator, fmt_num

FAMILIES = ("lp", "lpq", "lorentz", "orlicz")


@dataclass(frozen=True)
class SpaceDescriptor:
    """One concrete symmetric sequence space.

    Build with :func:`lp`, :func:`lpq`, :func:`lorentz`, :func:`orlicz`
    or :func:`parse_space`; parameter ranges are checked on construction.
    """

    family: str
    p: float | None = None
    q: float | None = None
    weight: WeightGenerator | None = None
    orlicz: OrliczGenerator | None = None

    def __post_init__(self):
        f = self.family
        if f == "lp":
            if self.p is None or not self.p >= 1.0:
                raise InvalidArgumentError("lp needs 1 <= p <= inf")
        elif f == "lpq":
            if self.p is None or self.q is None:
                raise InvalidArgumentError("lpq needs p and q")
            if not 1.0 < self.p < np.inf:
                raise InvalidArgumentError("lpq needs 1 < p < inf")
            if not self.q >= 1.0:
                raise InvalidArgumentError("lpq needs 1 <= q <= inf")
        elif f == "lorentz":
            if self.q is None or not 1.0 <= self.q < np.inf:
                raise InvalidArgumentError("lorentz needs 1 <= q < inf")
            if not isinstance(self.weight, WeightGenerator):
                raise InvalidArgumentError("lorentz needs a weight generator")
        elif f == "orlicz":
            if not isinstance(self.orlicz, OrliczGenerator):
                raise InvalidArgumentError("orlicz needs an Orlicz generator")
        else:
            raise InvalidArgumentError(f"unknown family {f!r}")

    @property
    def degenerate(self) -> bool:
        """Lorentz space with a weight that does not tend to zero."""
        return self.family == "lorentz" and self.weight.degenerate

    def describe(self) -> str:
        f = self.family
        if f == "lp":
            return f"lp:p={fmt_num(self.p)}"
        if f == "lpq":
            return f"lpq:p={fmt_num(self.p)},q={fmt_num(self.q)}"
        if f == "lorentz":
            return f"lorentz:q={fmt_num(self.q)},w={self.weight.describe()}"
        return f"orlicz:{self.orlicz.describe()}"

    def params(self) -> dict:
        """Flat parameter mapping, used in CSV and JSON reports."""
        f = self.family
        if f == "lp":
            return {"p": fmt_num(self.p)}
        if f == "lpq":
            return {"p": fmt_num(self.p), "q": fmt_num(self.q)}
        if f == "lorentz":
            return {"q": fmt_num(self.q), "w": self.weight.describe()}
        return {"N": self.orlicz.describe()}

    def __str__(self):
        return self.describe()


def lp(p: float) -> SpaceDescriptor:
    return SpaceDescriptor("lp", p=float(p))


def lpq(p: float, q: float) -> SpaceDescriptor:
    return SpaceDescriptor("lpq", p=float(p), q=float(q))


def lorentz(q: float, w: WeightGenerator) -> SpaceDescriptor:
    return SpaceDescriptor("lorentz", q=float(q), weight=w)


def orlicz(N: OrliczGenerator) -> SpaceDescriptor:
    return SpaceDescriptor("orlicz", orlicz=N)


# parsing --------------------------------------------------------------------


class SpaceParseError(InvalidArgumentError):
    """Malformed descriptor text; ``token`` names the offending piece."""

    def __init__(self, message: str, token: str):
        super().__init__(f"{message}: {token!r}")
        self.token = token


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([-+]?(?:\d+\.?\d*|\.\d+)"
                    r"(?:[eE][-+]?\d+)?)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            pos = m.end()
            if m.group(1) is not None:
                self.toks.append(("name", m.group(1)))
            elif m.group(2) is not None:
                self.toks.append(("num", m.group(2)))
            elif m.group(3) is not None and not m.group(3).isspace():
                self.toks.append(("sym", m.group(3)))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "<end>")

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value:
            raise SpaceParseError(f"expected {value!r}", tok[1])

    def number(self) -> float:
        kind, text = self.take()
        if kind == "num":
            return float(text)
        if kind == "name" and text in ("inf", "infinity"):
            return float("inf")
        raise SpaceParseError("expected a number", text)

    def args(self) -> tuple[list[float], dict[str, object]]:
        """Parenthesized ``(v, k=v, ...)``; values are numbers or calls."""
        pos: list = []
        kw: dict = {}
        if self.peek()[1] != "(":
            return pos, kw
        self.take()
        if self.peek()[1] == ")":
            self.take()
            return pos, kw
        while True:
            kind, text = self.peek()
            if kind == "name" and self.toks[self.i + 1:self.i + 2] == [("sym", "=")]:
                self.take()
                self.take()
                kw[text] = self.value()
            else:
                pos.append(self.value())
            sep = self.take()
            if sep[1] == ")":
                return pos, kw
            if sep[1] not in (",", ";"):
                raise SpaceParseError("expected ',' or ')'", sep[1])

    def value(self):
        kind, text = self.peek()
        if kind == "name" and text not in ("inf", "infinity"):
            return self.call()
        return self.number()

    def call(self):
        kind, name = self.take()
        if kind != "name":
            raise SpaceParseError("expected a name", name)
        pos, kw = self.args()
        return (name, pos, kw)

    def done(self):
        kind, text = self.peek()
        if kind != "end":
            raise SpaceParseError("unexpected trailing input", text)


def _num(x, token: str) -> float:
    if isinstance(x, tuple):
        raise SpaceParseError("expected a number", token)
    return float(x)


def _weight_from(call) -> WeightGenerator:
    if not isinstance(call, tuple):
        raise SpaceParseError("expected a weight generator", fmt_num(call))
    name, pos, kw = call
    try:
        if name == "power":
            alpha = kw.get("alpha", pos[0] if pos else None)
            if alpha is None:
                raise SpaceParseError("power weight needs alpha", name)
            return WeightGenerator.power(_num(alpha, name))
        if name in ("invlog", "constant"):
            if pos or kw:
                raise SpaceParseError(f"{name} takes no arguments", name)
            return getattr(WeightGenerator, name)()
        if name == "explicit":
            return WeightGenerator.explicit([_num(v, name) for v in pos])
    except SpaceParseError:
        raise
    except InvalidArgumentError as exc:
        raise SpaceParseError(str(exc), name) from exc
    raise SpaceParseError("unknown weight generator", name)


def _orlicz_from(call) -> OrliczGenerator:
    if not isinstance(call, tuple):
        raise SpaceParseError("expected an Orlicz generator", fmt_num(call))
    name, pos, kw = call
    try:
        if name == "power":
            p = kw.get("p", pos[0] if pos else None)
            if p is None:
                raise SpaceParseError("power needs p", name)
            return OrliczGenerator.power(_num(p, name))
        if name == "powerlog":
            p = kw.get("p", pos[0] if pos else None)
            a = kw.get("a", pos[1] if len(pos) > 1 else None)
            if p is None or a is None:
                raise SpaceParseError("powerlog needs p and a", name)
            return OrliczGenerator.powerlog(_num(p, name), _num(a, name))
        if name == "conjugate":
            if len(pos) != 1:
                raise SpaceParseError("conjugate takes one generator", name)
            return OrliczGenerator.conjugate_of(_orlicz_from(pos[0]))
    except SpaceParseError:
        raise
    except InvalidArgumentError as exc:
        raise SpaceParseError(str(exc), name) from exc
    raise SpaceParseError("unknown Orlicz generator", name)


def parse_space(text: str) -> SpaceDescriptor:
    """Parse descriptor text into a :class:`SpaceDescriptor`.

    Raises :class:`SpaceParseError` naming the offending token.
    """
    ps = _Parser(text)
    kind, family = ps.take()
    if kind != "name" or family not in FAMILIES:
        raise SpaceParseError("unknown space family", family)
    ps.expect(":")
    if family == "orlicz":
        gen = _orlicz_from(ps.call())
        ps.done()
        return orlicz(gen)

    kw: dict = {}
    while True:
        kind, key = ps.take()
        if kind != "name":
            raise SpaceParseError("expected a parameter name", key)
        ps.expect("=")
        kw[key] = ps.value()
        sep = ps.take()
        if sep[0] == "end":
            break
        if sep[1] != ",":
            raise SpaceParseError("expected ','", sep[1])

    allowed = {"lp": {"p"}, "lpq": {"p", "q"}, "lorentz": {"q", "w"}}[family]
    for key in kw:
        if key not in allowed:
            raise SpaceParseError(f"unknown parameter for {family}", key)
    for key in allowed:
        if key not in kw:
            raise SpaceParseError(f"missing parameter for {family}", key)
    try:
        if family == "lp":
            return lp(_num(kw["p"], "p"))
        if family == "lpq":
            return lpq(_num(kw["p"], "p"), _num(kw["q"], "q"))
        return lorentz(_num(kw["q"], "q"), _weight_from(kw["w"]))
    except SpaceParseError:
        raise
    except InvalidArgumentError as exc:
        raise SpaceParseError(str(exc), text) from exc
