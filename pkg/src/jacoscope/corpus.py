"""Built-in example maps and raw fields."""

from __future__ import annotations

from dataclasses import dataclass

from .compactify import PlanarField
from .parser import parse_map
from .polycore import PolyMap


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str  # "map" or "field"
    source: str
    description: str

    def load(self) -> PolyMap:
        return parse_map(self.source)

    def field(self) -> PlanarField:
        if self.kind != "field":
            raise ValueError(f"corpus entry {self.name!r} is a map, not a raw field")
        F = parse_map(self.source)
        return PlanarField(F[0], F[1], "raw")


ENTRIES = {
    e.name: e
    for e in [
        CorpusEntry("identity", "map", "f = x; g = y", "identity map"),
        CorpusEntry("example-1.1", "map", "f = y + y^3; g = x + x*y^2",
                    "injective map whose top forms share a real linear factor"),
        CorpusEntry("triangular", "map", "f = x; g = y + x^2", "triangular automorphism"),
        CorpusEntry("invalid-hypothesis", "map", "f = x^2; g = y",
                    "Jacobian vanishes on x = 0; not injective"),
        CorpusEntry("saddle-field", "field", "p = x; q = -y", "linear saddle (raw field)"),
        CorpusEntry("center-field", "field", "p = -y; q = x", "linear center (raw field)"),
    ]
}

MAP_NAMES = tuple(n for n, e in ENTRIES.items() if e.kind == "map")


def get(name: str) -> CorpusEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}; available: {', '.join(ENTRIES)}") from None


def nonsingular_maps() -> list[str]:
    """Corpus maps whose linear part at the origin is invertible."""
    from .polycore import jacobian_det

    out = []
    for name in MAP_NAMES:
        F = get(name).load()
        if jacobian_det(F).constant_term() != 0:
            out.append(name)
    return out


__all__ = ["CorpusEntry", "ENTRIES", "MAP_NAMES", "get", "nonsingular_maps"]
