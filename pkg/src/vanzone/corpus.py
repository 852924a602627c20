"""A bundled set of germs exercising one or several zones, tori and transversal types."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Germ:
    name: str
    text: str


HIRZEBRUCH = [(2, 1, 2), (3, 1, 2), (3, 2, 3), (2, 1, 3)]

CORPUS = [
    *(Germ(f"hirzebruch{m}{k}{l}", f"z^{m} - x^{k}*y^{l}") for m, k, l in HIRZEBRUCH),
    Germ("cube-cube", "z^3 - x*y^3"),
    Germ("reducible-node", "z^2 - x^2*y^2"),
    Germ("node-times-line", "z^2 - y^2"),
    Germ("cusp-times-line", "z^2 - y^3"),
    Germ("unit-twisted", "z^2 - x*(1 + x)*y^2"),
    Germ("three-planes", "(z - y)*(z + y)*(z - x*y)"),
    Germ("cubic-perturbed", "z^3 - x*y^2 + y^3"),
    Germ("cusp-deformed", "z^2 - y^3 - x*y^2"),
    Germ("two-zones", "(z - y)*(z^2 - x*y^3)"),
]


def corpus(names: list[str] | None = None) -> list[Germ]:
    if names is None:
        return list(CORPUS)
    wanted = set(names)
    return [g for g in CORPUS if g.name in wanted]
