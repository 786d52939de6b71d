"""Labelled link diagrams: simple branched coverings of the 3-sphere.

This is the boundary layer: links carry per-arc transposition labels subject
to the Wirtinger rules, with no orientation (simple coverings need none).
"""

from __future__ import annotations

import copy
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

from .permutation import Transposition, conjugate, orbit_count
from .ribbon import ValidationReport, id_key

OVER = "over"
UNDER = "under"


@dataclass(frozen=True)
class LCross:
    crossing: str
    role: str


@dataclass
class LinkComponent:
    id: str
    events: List[LCross] = field(default_factory=list)
    labels: List[Transposition] = field(default_factory=list)  # labels[k] = arc after events[k]; [base] if closed arcless


@dataclass
class LinkCrossing:
    id: str
    sign: int


class LabelledLink:
    def __init__(self, degree: int, components: Iterable[LinkComponent] = (),
                 crossings: Iterable[LinkCrossing] = ()):
        self.degree = degree
        self.components: Dict[str, LinkComponent] = {c.id: c for c in components}
        self.crossings: Dict[str, LinkCrossing] = {c.id: c for c in crossings}

    def copy(self) -> "LabelledLink":
        return copy.deepcopy(self)

    def sorted_components(self) -> List[LinkComponent]:
        return [self.components[k] for k in sorted(self.components, key=id_key)]

    def fresh_crossing_id(self) -> str:
        n = 0
        while f"x{n}" in self.crossings:
            n += 1
        return f"x{n}"

    @staticmethod
    def arc_before(comp: LinkComponent, k: int) -> Transposition:
        return comp.labels[k - 1] if k > 0 else comp.labels[-1]

    def crossing_visits(self, cid: str) -> List[Tuple[str, int, str]]:
        out = []
        for c in self.sorted_components():
            for i, e in enumerate(c.events):
                if e.crossing == cid:
                    out.append((c.id, i, e.role))
        return out

    def over_label(self, cid: str) -> Transposition | None:
        for c in self.components.values():
            for i, e in enumerate(c.events):
                if e.crossing == cid and e.role == OVER:
                    return c.labels[i]
        return None

    # --------------------------------------------------------- validation

    def validate_link(self) -> ValidationReport:
        rep = ValidationReport()
        if self.degree < 2:
            rep.add("degree", f"degree must be >= 2, got {self.degree}")
        for c in self.components.values():
            want = len(c.events) if c.events else 1
            if len(c.labels) != want:
                rep.add("labels-length", f"component {c.id}: {len(c.labels)} labels for {len(c.events)} events", c.id)
                continue
            for lab in c.labels:
                if not lab.within(self.degree):
                    rep.add("label-range", f"component {c.id} label {lab} exceeds degree {self.degree}", c.id)
            for k, e in enumerate(c.events):
                if e.crossing not in self.crossings:
                    rep.add("cross-ref", f"component {c.id} references missing crossing {e.crossing}", c.id)
                    continue
                before, after = self.arc_before(c, k), c.labels[k]
                if e.role == OVER:
                    if after != before:
                        rep.add("wirtinger-over", f"component {c.id} event {k}: over-arc label must not change", c.id)
                elif e.role == UNDER:
                    nu = self.over_label(e.crossing)
                    if nu is None:
                        rep.add("wirtinger-under", f"crossing {e.crossing} lacks an over strand", e.crossing)
                    elif after != conjugate(before, nu):
                        rep.add("wirtinger",
                                f"component {c.id} event {k}: expected {conjugate(before, nu)} after undercrossing, got {after}",
                                c.id, e.crossing)
                else:
                    rep.add("role", f"component {c.id} event {k} role {e.role}", c.id)
        for cid, c in self.crossings.items():
            visits = self.crossing_visits(cid)
            roles = sorted(v[2] for v in visits)
            if len(visits) != 2 or roles != [OVER, UNDER]:
                rep.add("crossing-visits", f"crossing {cid}: {len(visits)} visits with roles {roles}", cid)
            if c.sign not in (1, -1):
                rep.add("crossing-sign", f"crossing {cid} sign {c.sign}", cid)
        return rep

    # --------------------------------------------------------- invariants

    def link_invariants(self) -> dict:
        rep = self.validate_link()
        if not rep.ok:
            raise ValueError(f"invalid link: {rep.errors[0].message}")
        labels = [l for c in self.components.values() for l in c.labels]
        per_component = {
            c.id: tuple(sorted(Counter(l.pair for l in c.labels).items()))
            for c in self.sorted_components()
        }
        return {
            "degree": self.degree,
            "orbit_count": orbit_count(labels, self.degree) if labels else self.degree,
            "component_count": len(self.components),
            "labels_per_component": per_component,
        }

    def stabilize_link(self, i: int) -> "LabelledLink":
        if not (1 <= i <= self.degree):
            raise ValueError(f"sheet {i} out of range for degree {self.degree}")
        out = self.copy()
        out.degree = self.degree + 1
        n = 0
        while f"s{n}" in out.components:
            n += 1
        cid = f"s{n}"
        out.components[cid] = LinkComponent(cid, [], [Transposition(i, self.degree + 1)])
        return out

    def destabilize_link(self) -> "LabelledLink":
        d = self.degree
        for c in self.sorted_components():
            if c.events or len(c.labels) != 1 or c.labels[0].j != d:
                continue
            uses = sum(1 for comp in self.components.values() for l in comp.labels if d in l.pair)
            if uses == 1:
                out = self.copy()
                del out.components[c.id]
                out.degree = d - 1
                return out
        raise ValueError("no destabilizing component")

    # ------------------------------------------------------ serialization

    def to_payload(self) -> dict:
        return {
            "degree": self.degree,
            "components": [
                {
                    "id": c.id,
                    "events": [{"cross": e.crossing, "role": e.role} for e in c.events],
                    "labels": [list(l.pair) for l in c.labels],
                }
                for c in self.sorted_components()
            ],
            "crossings": [
                {"id": c.id, "sign": c.sign}
                for c in (self.crossings[k] for k in sorted(self.crossings, key=id_key))
            ],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "LabelledLink":
        comps = [
            LinkComponent(
                c["id"],
                [LCross(e["cross"], e["role"]) for e in c["events"]],
                [Transposition(*l) for l in c["labels"]],
            )
            for c in payload["components"]
        ]
        crossings = [LinkCrossing(c["id"], c["sign"]) for c in payload["crossings"]]
        return cls(payload["degree"], comps, crossings)
