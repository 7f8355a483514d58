"""Norm selectors: small callables ``norm(f, space) -> float`` picked by name."""

from __future__ import annotations

from dataclasses import dataclass

from .grand_norm import grand_norm
from .measure_space import INF, ExponentParams, MeasureSpace, lp_norm
from .small_norm import small_norm_estimate, small_norm_upper


@dataclass(frozen=True)
class LpNorm:
    q: float

    def __call__(self, f, space: MeasureSpace) -> float:
        return lp_norm(f, self.q, space)

    def describe(self):
        return {"norm": "lp", "q": self.q if self.q != INF else "inf"}


@dataclass(frozen=True)
class GrandNorm:
    params: ExponentParams

    def __call__(self, f, space: MeasureSpace) -> float:
        return grand_norm(f, self.params, space)

    def describe(self):
        return {"norm": "grand", "p": self.params.p, "theta": self.params.theta}


@dataclass(frozen=True)
class SmallUpperNorm:
    """Best decomposition cost, the upper end of the small-norm bracket."""

    params: ExponentParams

    def __call__(self, f, space: MeasureSpace) -> float:
        return small_norm_upper(f, self.params, space)

    def describe(self):
        return {"norm": "small_upper", "p": self.params.p, "theta": self.params.theta}


@dataclass(frozen=True)
class SmallNorm:
    """Midpoint of the small-norm bracket; :meth:`estimate` gives the bracket."""

    params: ExponentParams

    def __call__(self, f, space: MeasureSpace) -> float:
        return self.estimate(f, space).midpoint

    def estimate(self, f, space: MeasureSpace):
        return small_norm_estimate(f, self.params, space)

    def describe(self):
        return {"norm": "small", "p": self.params.p, "theta": self.params.theta}


def parse_selector(text: str, grid=None):
    """Build a selector from ``lp:2``, ``lp:inf``, ``grand:2,1``, ``small:3,2`` or ``small_upper:2,1``."""
    kind, _, args = text.partition(":")
    kind = kind.strip().lower().replace("-", "_")
    vals = [a.strip() for a in args.split(",") if a.strip()]
    if kind == "lp":
        if len(vals) != 1:
            raise ValueError("lp selector takes one exponent, e.g. lp:2")
        return LpNorm(INF if vals[0] in ("inf", "infinity") else float(vals[0]))
    if len(vals) != 2:
        raise ValueError(f"{kind} selector takes p,theta, e.g. {kind}:2,1")
    kw = {} if grid is None else {"grid": grid}
    params = ExponentParams(float(vals[0]), float(vals[1]), **kw)
    try:
        return {"grand": GrandNorm, "small": SmallNorm,
                "small_upper": SmallUpperNorm}[kind](params)
    except KeyError:
        raise ValueError(f"unknown norm selector {text!r}") from None
