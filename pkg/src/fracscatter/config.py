"""Run configuration: flat ``key = value`` files, flag merging and the echo format.

The same option table drives the argparse flags, the config-file parser and
:meth:`RunConfig.to_text`, so every resolved configuration can be written
out and read back unchanged.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from typing import Any, Callable, Mapping

from .core import DomainError, LevyContext
from .scan import ScanGrid
from .transfer import ComplexBarrier, ComplexDelta, Potential


class ConfigError(ValueError):
    """Malformed or unknown configuration input (a usage error)."""


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


def _parse_complex(s: str) -> complex:
    s = s.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"not a complex number: {s!r}") from None


def _parse_floats(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in s.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"not a comma-separated list of numbers: {s!r}") from None


def _choice(*allowed: str) -> Callable[[str], str]:
    def parse(s: str) -> str:
        s = s.strip()
        if s not in allowed:
            raise ConfigError(f"expected one of {', '.join(allowed)}; got {s!r}")
        return s

    parse.choices = allowed  # type: ignore[attr-defined]
    return parse


def _num(kind: Callable[[str], Any]) -> Callable[[str], Any]:
    def parse(s: str) -> Any:
        try:
            return kind(s.strip())
        except ValueError:
            raise ConfigError(f"not a valid {kind.__name__}: {s!r}") from None

    parse.__name__ = kind.__name__
    return parse


@dataclass(frozen=True)
class Option:
    key: str
    parse: Callable[[str], Any]
    help: str
    flag: bool = False  # store_true style

    @property
    def cli(self) -> str:
        return "--" + self.key.replace("_", "-")


OPTIONS: dict[str, Option] = {
    o.key: o
    for o in [
        Option("potential", _choice("barrier", "delta"), "potential family"),
        Option("rho", _num(float), "gain strength of the delta, zeta = -i rho"),
        Option("zeta", _parse_complex, "complex delta strength (overrides rho)"),
        Option("x0", _num(float), "delta position"),
        Option("V1", _num(float), "real part of the barrier height"),
        Option("V2", _num(float), "imaginary part of the barrier height"),
        Option("b", _num(float), "barrier width"),
        Option("alpha", _num(float), "Levy index"),
        Option("alphas", _parse_floats, "comma-separated list of Levy indices"),
        Option("alpha_min", _num(float), "lower alpha of a sweep"),
        Option("alpha_max", _num(float), "upper alpha of a sweep"),
        Option("alpha_points", _num(int), "alpha samples of a sweep"),
        Option("v", _num(float), "characteristic velocity"),
        Option("m", _num(float), "mass"),
        Option("hbar", _num(float), "reduced Planck constant"),
        Option("e_min", _num(float), "lower energy"),
        Option("e_max", _num(float), "upper energy"),
        Option("e_points", _num(int), "energy samples"),
        Option("e_scale", _choice("linear", "log"), "energy spacing"),
        Option("energies", _parse_floats, "comma-separated fixed energies (profile)"),
        Option("kind", _choice("SS", "CPA"), "tracked singularity kind"),
        Option("threshold", _num(float), "detection depth in decades"),
        Option("rtol", _num(float), "relative refinement tolerance"),
        Option("maxiter", _num(int), "refinement iteration cap"),
        Option("window", _num(float), "track continuation window in E"),
        Option("include_below", _parse_bool, "also track peaks below the main one", flag=True),
        Option("output", str, "output path, '-' for stdout"),
        Option("format", _choice("csv", "json"), "output format"),
        Option("dump_matrix", _parse_bool, "include transfer matrices in reports", flag=True),
        Option("workers", _num(int), "worker threads (default FRACSCATTER_THREADS or CPU count)"),
    ]
}


@dataclass(frozen=True)
class RunConfig:
    command: str = ""
    preset: str | None = None
    potential: str = "barrier"
    rho: float | None = None
    zeta: complex | None = None
    x0: float = 0.0
    V1: float = 0.0
    V2: float = 0.0
    b: float | None = None
    alpha: float = 2.0
    alphas: tuple[float, ...] | None = None
    alpha_min: float | None = None
    alpha_max: float | None = None
    alpha_points: int | None = None
    v: float = 1e-5
    m: float = 1.0
    hbar: float = 1.0
    e_min: float | None = None
    e_max: float | None = None
    e_points: int = 4000
    e_scale: str = "linear"
    energies: tuple[float, ...] | None = None
    kind: str = "SS"
    threshold: float = 6.0
    rtol: float = 1e-10
    maxiter: int = 200
    window: float | None = None
    include_below: bool = False
    output: str = "-"
    format: str | None = None
    dump_matrix: bool = False
    workers: int | None = None

    # -- serialisation --------------------------------------------------------

    def to_text(self) -> str:
        """Flat ``key = value`` text; unset optional keys are omitted."""
        lines = ["# fracscatter resolved configuration"]
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            lines.append(f"{f.name} = {_render(val)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls.from_mapping(parse_text(text, allow_meta=True))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
        return cls(**values)

    def replace(self, **changes: Any) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    # -- domain objects -------------------------------------------------------

    def context(self, alpha: float | None = None) -> LevyContext:
        return LevyContext(self.alpha if alpha is None else alpha, self.v, self.m, self.hbar)

    def alpha_list(self) -> tuple[float, ...]:
        return self.alphas if self.alphas else (self.alpha,)

    def build_potential(self) -> Potential:
        if self.potential == "delta":
            if self.zeta is not None:
                return ComplexDelta(self.zeta, self.x0)
            if self.rho is None:
                raise DomainError("delta potential needs rho or zeta")
            return ComplexDelta(-1j * self.rho, self.x0)
        if self.b is None:
            raise DomainError("barrier potential needs a width b")
        return ComplexBarrier(complex(self.V1, self.V2), self.b)

    def energy_range(self) -> tuple[float, float]:
        if self.e_min is None or self.e_max is None:
            raise DomainError("e_min and e_max are required")
        if not 0 < self.e_min < self.e_max:
            raise DomainError("energies must satisfy 0 < e_min < e_max")
        return self.e_min, self.e_max

    def grid(self) -> ScanGrid:
        e_lo, e_hi = self.energy_range()
        if self.alphas:
            return ScanGrid(e_lo, e_hi, self.e_points, self.e_scale, alpha_values=self.alphas)
        a_hi = self.alpha_max if self.alpha_max is not None else self.alpha
        a_lo = self.alpha_min if self.alpha_min is not None else a_hi
        pts = self.alpha_points if self.alpha_points is not None else (1 if a_lo == a_hi else 200)
        return ScanGrid(e_lo, e_hi, self.e_points, self.e_scale, a_lo, a_hi, pts)

    def validate(self) -> None:
        """Raise :class:`DomainError` naming the first violated invariant."""
        for a in self.alpha_list():
            self.context(a)
        for a in (self.alpha_min, self.alpha_max):
            if a is not None:
                self.context(a)
        if self.e_points < 1:
            raise DomainError("e_points must be positive")
        if not (self.threshold == self.threshold):
            raise DomainError("threshold must be a number")
        if not (self.rtol > 0):
            raise DomainError("rtol must be positive")
        if self.maxiter < 1:
            raise DomainError("maxiter must be positive")
        if self.window is not None and not self.window > 0:
            raise DomainError("window must be positive")
        if self.workers is not None and self.workers < 1:
            raise DomainError("workers must be positive")
        if self.rho is not None and not (self.rho > 0 and math.isfinite(self.rho)):
            raise DomainError("rho must be positive")


def _render(val: Any) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return format(val, ".17g")
    if isinstance(val, complex):
        return f"{format(val.real, '.17g')}{'+' if val.imag >= 0 or val.imag != val.imag else '-'}{format(abs(val.imag), '.17g')}j"
    if isinstance(val, tuple):
        return ",".join(_render(v) for v in val)
    return str(val)


def parse_text(text: str, *, allow_meta: bool = False) -> dict[str, Any]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment.

    Keys may use dashes or underscores. ``command`` and ``preset`` are
    accepted only with `allow_meta`.
    """
    out: dict[str, Any] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if allow_meta and key in ("command", "preset"):
            out[key] = value
            continue
        opt = OPTIONS.get(key)
        if opt is None:
            raise ConfigError(f"line {n}: unknown configuration key {key!r}")
        out[key] = opt.parse(value)
    return out


def load_file(path: str) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())
