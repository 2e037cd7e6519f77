"""Shared plumbing for the case studies: family descriptors, chart limits, CM records."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from ..ellsurf import (
    INF,
    NeedsRenormalization,
    Section,
    SurfaceModel,
    fiber_configuration,
    section_from_x,
    specialize,
)
from ..exactalg import Poly, RatFunc, VerificationFailed
from ..exactalg.errors import K3ShimError
from ..nslattice import RootLatticeSum, determinant


class CatalogCorrupt(K3ShimError):
    pass


Coefficients = Callable[[Any, Any], tuple]  # (parameter, t) -> (a2, a4, a6)


def extended_model(coeffs: Coefficients, param, t=None) -> SurfaceModel:
    if t is None:
        one = param ** 0 if not isinstance(param, int) else Fraction(1)
        t = Poly((one * 0, one))
    a2, a4, a6 = coeffs(param, t)
    return SurfaceModel.extended(a2, a4, a6)


@dataclass(frozen=True)
class Chart:
    """A change of variables on a family, valid near one parameter value.

    The parameter is replaced by ``param(s)``, t by ``t_expr(s, t')`` and X by
    ``scale(s) X'``; the chart surface is the s -> ``at`` specialization.
    """

    name: str
    param: Callable[[Any], Any]
    t_expr: Callable[[Any, Poly], Poly]
    scale: Callable[[Any], Any]
    domain: str
    at: Any = 0


def chart_model(coeffs: Coefficients, chart: Chart) -> SurfaceModel:
    """The chart surface over Q(s), before specializing."""
    s = RatFunc.gen(Fraction(1))
    tp = Poly((Fraction(0), s ** 0))
    a2, a4, a6 = coeffs(chart.param(s), chart.t_expr(s, tp))
    k = chart.scale(s)
    ki = RatFunc(Poly((Fraction(1),))) / k
    return SurfaceModel.extended(Poly(a2) * ki, Poly(a4) * ki ** 2, Poly(a6) * ki ** 3)


def chart_limit(coeffs: Coefficients, chart: Chart, value=None) -> SurfaceModel:
    """Specialize the chart surface at s = ``value`` (default: the chart's own point)."""
    S = chart_model(coeffs, chart)
    return specialize(S, chart.at if value is None else value)


@dataclass
class FamilyDescriptor:
    N: int
    parameters: tuple[str, ...]
    coefficients: Coefficients
    expected_R: RootLatticeSum
    expected_places: dict
    generic_sections: Callable[[Any], list] = lambda p: []
    involutions: dict = field(default_factory=dict)
    charts: dict = field(default_factory=dict)
    note: str = ""

    def surface(self, value=None) -> SurfaceModel:
        """The member at ``value``; the generic member over Q(parameter) when omitted."""
        p = RatFunc.gen(Fraction(1)) if value is None else value
        return extended_model(self.coefficients, p)

    def sections(self, value=None) -> list[Section]:
        S = self.surface(value)
        p = RatFunc.gen(Fraction(1)) if value is None else value
        return [section_from_x(S, X) for X in self.generic_sections(p)]

    def check(self, value=None) -> dict:
        """Fiber configuration and NS discriminant of a member; raises on mismatch."""
        S = self.surface(value)
        cfg = fiber_configuration(S)
        if cfg.root_lattice != self.expected_R:
            raise VerificationFailed(f"N={self.N} member at {value}: root lattice", self.expected_R, cfg.root_lattice)
        for place, kod in self.expected_places.items():
            f = cfg.at(place)
            got = f.kodaira if f else "I0"
            if got != kod:
                raise VerificationFailed(f"N={self.N} fiber at t={place}", kod, got)
        secs = self.sections(value)
        disc = ns_disc_from(S, cfg, secs)
        if disc != 2 * self.N:
            raise VerificationFailed(f"N={self.N} NS discriminant", 2 * self.N, disc)
        return {"config": cfg, "sections": secs, "disc": disc}

    def chart(self, name: str, value=None) -> SurfaceModel:
        return chart_limit(self.coefficients, self.charts[name], value)


def ns_disc_from(S: SurfaceModel, cfg, sections: list, torsion: int = 1) -> Fraction:
    from ..ellsurf import height_gram

    gram = height_gram(S, sections, cfg) if sections else []
    reg = determinant(gram) if gram else Fraction(1)
    return Fraction(cfg.root_lattice.disc) * reg / (torsion * torsion)


def shioda_hall_a18_surface() -> SurfaceModel:
    """Y^2 = X^3 + (t^4+3t^3+6t^2+7t+4) X^2 - 2 (t^3+2t^2+3t+2) X + (t^2+t+1), I19 at infinity."""
    t = Poly.x(Fraction(1))
    return SurfaceModel.extended(t ** 4 + 3 * t ** 3 + 6 * t ** 2 + 7 * t + 4,
                                 -2 * (t ** 3 + 2 * t ** 2 + 3 * t + 2), t ** 2 + t + 1)


# ---------------------------------------------------------------------------
# CM records


@dataclass(frozen=True)
class Witness:
    """How to re-derive a CM point.

    ``surface`` names the model: ("family", N, value), ("chart", name) or
    ("orbit", name) for Galois orbits, or ("branch", value)
    for the N=206 branch-locus checks.  ``sections`` lists X-coordinates of
    Mordell-Weil generators, ``torsion`` X-coordinates of torsion sections.
    """

    kind: str               # "degeneration", "section", "chart", "branch"
    surface: tuple
    root_lattice: str | None = None
    sections: tuple = ()
    torsion: tuple = ()
    field_poly: Any = None  # splitting polynomial for sections defined over Q(sqrt(-m))
    note: str = ""


@dataclass(frozen=True)
class CMRecord:
    N: int
    parameter: Any          # Fraction, INF, or the defining Poly of a Galois orbit
    D: int
    witness: Witness
    cross_reference: str = ""

    def parameter_label(self) -> str:
        if isinstance(self.parameter, Poly):
            from ..exactalg import format_poly

            return f"root of {format_poly(self.parameter, 's')}"
        return "inf" if self.parameter == INF else str(self.parameter)


@dataclass
class CMReport:
    record: CMRecord
    root_lattice: RootLatticeSum | None
    heights: list
    gram: list
    disc: Fraction
    picard: int | None
    ok: bool
    details: str = ""


__all__ = [
    "CMRecord", "CMReport", "CatalogCorrupt", "Chart", "FamilyDescriptor", "NeedsRenormalization",
    "Witness", "chart_limit", "shioda_hall_a18_surface", "chart_model", "extended_model", "ns_disc_from",
]

