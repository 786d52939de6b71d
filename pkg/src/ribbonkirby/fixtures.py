"""Reference diagrams used by the tests, the demos, and the acceptance suite."""

from __future__ import annotations

from typing import Dict, List

from .kirby import (
    DottedComponent,
    FramedComponent,
    GeneralizedKirbyDiagram,
    KCross,
    KCrossing,
    Pierce,
)
from .permutation import Transposition
from .ribbon import Band, Disk, HalfTwist, RibbonDiagram

T12 = Transposition(1, 2)


def double_cover_surface() -> RibbonDiagram:
    """Three horizontal disks joined by ten plain vertical bands, all labelled
    (1 2): the standard double-covering example (chi of the covering is 9)."""
    f = RibbonDiagram(degree=2)
    for i in range(3):
        f.disks[f"d{i}"] = Disk(f"d{i}", T12, role=f"row{i}")
    slots = {d: -1 for d in f.disks}

    def nxt(d):
        slots[d] += 1
        return slots[d]

    layout = [("d0", "d1")] * 5 + [("d1", "d2")] * 5
    for i, (a, b) in enumerate(layout):
        f.bands[f"b{i}"] = Band(f"b{i}", ((a, nxt(a)), (b, nxt(b))), [], [T12])
    return f


def empty_ball() -> GeneralizedKirbyDiagram:
    return GeneralizedKirbyDiagram(zero_handles=1)


def single_dotted() -> GeneralizedKirbyDiagram:
    k = GeneralizedKirbyDiagram(zero_handles=1)
    k.dotted["u0"] = DottedComponent("u0", (1, 1))
    return k


def framed_unknot(n: int) -> GeneralizedKirbyDiagram:
    k = GeneralizedKirbyDiagram(zero_handles=1)
    k.framed["k0"] = FramedComponent("k0", [], [1], 2 * n)
    return k


def hopf_link(f1: int = 0, f2: int = 0) -> GeneralizedKirbyDiagram:
    """Positive Hopf link with the given framings."""
    k = GeneralizedKirbyDiagram(zero_handles=1)
    k.crossings["x0"] = KCrossing("x0", 1)
    k.crossings["x1"] = KCrossing("x1", 1)
    k.framed["k0"] = FramedComponent(
        "k0", [KCross("x0", "over"), KCross("x1", "under")], [1, 1], 2 * f1)
    k.framed["k1"] = FramedComponent(
        "k1", [KCross("x0", "under"), KCross("x1", "over")], [1, 1], 2 * f2)
    return k


def trefoil(framing: int) -> GeneralizedKirbyDiagram:
    """Right-handed trefoil: writhe 3, twists adjusted to hit the framing."""
    k = GeneralizedKirbyDiagram(zero_handles=1)
    events = []
    for i in range(3):
        k.crossings[f"x{i}"] = KCrossing(f"x{i}", 1)
    events = [
        KCross("x0", "over"), KCross("x1", "under"), KCross("x2", "over"),
        KCross("x0", "under"), KCross("x1", "over"), KCross("x2", "under"),
    ]
    k.framed["k0"] = FramedComponent("k0", events, [1] * 6, 2 * (framing - 3))
    return k


def akbulut_kirby_sigma3() -> GeneralizedKirbyDiagram:
    """The n = 3 member of the Akbulut-Kirby family: two 1-handles x, y and
    two 2-handles reading x^3 y^-4 and x y x y^-1 x^-1 y^-1, honest crossing
    data included so the attaching words are carried by the piercings."""
    k = GeneralizedKirbyDiagram(zero_handles=1)
    k.dotted["ux"] = DottedComponent("ux", (1, 1))
    k.dotted["uy"] = DottedComponent("uy", (1, 1))

    def word(spec: List) -> List:
        events = []
        for dotted, power in spec:
            enter = 0 if power > 0 else 1
            for _ in range(abs(power)):
                events.append(Pierce(dotted, enter))
        return events

    r1 = word([("ux", 3), ("uy", -4)])
    r2 = word([("ux", 1), ("uy", 1), ("ux", 1), ("uy", -1), ("ux", -1), ("uy", -1)])
    k.framed["k0"] = FramedComponent("k0", r1, [1] * len(r1), 0)
    k.framed["k1"] = FramedComponent("k1", r2, [1] * len(r2), 0)
    return k


def roundtrip_corpus() -> Dict[str, GeneralizedKirbyDiagram]:
    """The fixed ordinary diagrams the round-trip acceptance criterion names."""
    out: Dict[str, GeneralizedKirbyDiagram] = {
        "empty": empty_ball(),
        "dotted": single_dotted(),
        "hopf_0_0": hopf_link(0, 0),
    }
    for n in range(-2, 3):
        out[f"unknot_{n}"] = framed_unknot(n)
    for n in (-1, 0, 1):
        out[f"trefoil_{n}"] = trefoil(n)
    return out
