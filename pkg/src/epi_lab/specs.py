"""Textual density specifications: ``family:key=value[,key=value]``.

>>> parse_density_spec("gaussian:var=2")
Gaussian(variance=2.0)
>>> format_density_spec(DensitySpec.parse("quartic:a=0.10"))
'quartic:a=0.1'
"""

from dataclasses import dataclass
import math
import re

from .densities import Gaussian, Laplace, QuarticGibbs, mixture_counterexample, read_grid_csv
from .errors import DomainError, ParseError

__all__ = ["DensitySpec", "parse_density_spec", "format_density_spec", "format_number"]

# family -> (key, validator, message)
FAMILIES = {
    "gaussian": ("var", lambda v: math.isfinite(v) and v > 0, "var must be a finite positive number"),
    "mixture": ("eps", lambda v: 0.0 < v < 1.0, "eps must lie in (0, 1)"),
    "laplace": ("scale", lambda v: math.isfinite(v) and v > 0, "scale must be a finite positive number"),
    "quartic": ("a", lambda v: math.isfinite(v) and v >= 0, "a must be a finite number >= 0"),
    "grid": ("file", None, None),
}

_FAMILY_RE = re.compile(r"[a-z]+")


def format_number(x):
    """Shortest round-tripping decimal form, without a trailing ``.0``."""
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


@dataclass(frozen=True)
class DensitySpec:
    family: str
    key: str
    value: object

    @classmethod
    def parse(cls, text):
        if not isinstance(text, str) or not text.strip():
            raise ParseError("empty density specification", str(text), 0)
        colon = text.find(":")
        if colon < 0:
            raise ParseError("expected 'family:key=value'", text, len(text))
        family = text[:colon]
        if family not in FAMILIES:
            raise ParseError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}", text, 0)
        key, check, message = FAMILIES[family]
        pos = colon + 1
        seen = {}
        for item in text[pos:].split(","):
            eq = item.find("=")
            if eq <= 0:
                raise ParseError("expected 'key=value'", text, pos)
            name, raw = item[:eq], item[eq + 1:]
            if name != key:
                raise ParseError(f"unknown key {name!r} for family {family!r} (expected {key!r})", text, pos)
            if name in seen:
                raise ParseError(f"duplicate key {name!r}", text, pos)
            vpos = pos + eq + 1
            if not raw:
                raise ParseError(f"missing value for {name!r}", text, vpos)
            if check is None:
                seen[name] = raw
            else:
                try:
                    value = float(raw)
                except ValueError:
                    raise ParseError(f"not a number: {raw!r}", text, vpos) from None
                if not check(value):
                    raise ParseError(message, text, vpos)
                seen[name] = value
            pos += len(item) + 1
        return cls(family, key, seen[key])

    def build(self):
        """The Density1D named by this specification."""
        if self.family == "gaussian":
            return Gaussian(self.value)
        if self.family == "mixture":
            return mixture_counterexample(self.value)
        if self.family == "laplace":
            return Laplace(self.value)
        if self.family == "quartic":
            return QuarticGibbs(self.value)
        try:
            return read_grid_csv(self.value)
        except (OSError, DomainError) as exc:
            raise ParseError(f"cannot load grid file: {exc}", str(self), len(self.family) + len(self.key) + 2) from exc

    def __str__(self):
        value = self.value if self.family == "grid" else format_number(self.value)
        return f"{self.family}:{self.key}={value}"


def parse_density_spec(text):
    """Parse ``family:key=value`` into a density; raises ParseError with a character position."""
    return DensitySpec.parse(text).build()


def format_density_spec(spec):
    """Canonical text of a DensitySpec or of an analytic density."""
    if isinstance(spec, DensitySpec):
        return str(spec)
    if isinstance(spec, Gaussian):
        return f"gaussian:var={format_number(spec.variance)}"
    if isinstance(spec, Laplace):
        return f"laplace:scale={format_number(spec.scale)}"
    if isinstance(spec, QuarticGibbs):
        return f"quartic:a={format_number(spec.a)}"
    eps = getattr(spec, "counterexample_eps", None)
    if eps is not None:
        return f"mixture:eps={format_number(eps)}"
    raise DomainError(f"no textual form for {spec!r}")
