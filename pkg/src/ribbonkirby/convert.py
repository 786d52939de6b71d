"""The two constructions between labelled ribbon surfaces and Kirby diagrams,
plus trivial states, boundary links, braid band presentations and the
Montesinos moves.

surface_to_kirby walks the boundary of each doubled band through the sheets
of the covering: every piercing, its direction, and every real crossing of
the framed loops falls out of the sheet bookkeeping. Each disk becomes a
dotted component whose sides are the disk's polarization (lower sheet index
in front).

kirby_to_surface realizes the degree-3 construction: two base disks labelled
(1 2) and (2 3), one (2 3)-disk per 1-handle, a closed ribbon per 2-handle
carrying f + 2c - 2w half twists, and a marked small disk per crossing the
trivial state inverts. An inverted crossing is encoded as the flipped
crossing plus a compensating one, bracketed by passes through the small disk
on one strand; the bracket shifts that strand into sheet 3, so exactly one
doubled copy of each crossing survives and the pair cancels. That encoding
is what makes the framing identity (f + 2c - 2w) + (w + w') = f and the
linking recovery exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .kirby import (
    DottedComponent,
    FramedComponent,
    GeneralizedKirbyDiagram,
    KCross,
    KCrossing,
    Pierce,
)
from .kirby import OVER as K_OVER
from .kirby import UNDER as K_UNDER
from .link import LabelledLink, LCross, LinkComponent, LinkCrossing
from .permutation import Transposition, conjugate
from .ribbon import (
    BACK,
    Band,
    Cross,
    Disk,
    FRONT,
    HalfTwist,
    OVER,
    Pass,
    RCrossing,
    RibbonDiagram,
    UNDER,
    id_key,
)

# Kink framing corrections per ribbon-intersection case, in half-twist units.
# The compensating-crossing encoding of inverted crossings makes every entry
# zero; the table is kept as data so the convention is visible and editable.
KINK_TWIST = {"same": 0, "share_front": 0, "share_back": 0, "disjoint": 0}

T12 = Transposition(1, 2)
T13 = Transposition(1, 3)
T23 = Transposition(2, 3)


class ConversionError(ValueError):
    pass


def _require_valid(obj, what: str):
    rep = obj.validate() if hasattr(obj, "validate") else obj.validate_link()
    if not rep.ok:
        raise ConversionError(f"invalid {what}: {rep.errors[0].message}")
    return rep


# =====================================================================
# surface -> generalized Kirby diagram
# =====================================================================

def surface_to_kirby(f: RibbonDiagram) -> GeneralizedKirbyDiagram:
    """Generalized Kirby diagram of the branched covering determined by f."""
    _require_valid(f, "ribbon diagram")
    k = GeneralizedKirbyDiagram(zero_handles=f.degree)
    for disk in f.sorted_disks():
        k.dotted[disk.id] = DottedComponent(disk.id, disk.label.pair)

    # phase 1: walk the boundary circle of every doubled band
    walks: Dict[str, List[Tuple[object, int]]] = {}
    slot_sheets: Dict[Tuple[str, int], List[Tuple[str, int, int, int]]] = {}

    for band in f.sorted_bands():
        items: List[object] = []  # Pierce or ("slot", band id, ribbon event idx)
        sheets: List[int] = []  # walk sheet after each item
        sheet = band.labels[0].i

        def pierce(disk_id: str):
            nonlocal sheet
            mu = f.disks[disk_id].label
            enter = 0 if sheet == mu.i else 1
            items.append(Pierce(disk_id, enter))
            sheet = mu.apply(sheet)
            sheets.append(sheet)

        def handle(idx: int, direction: int):
            nonlocal sheet
            e = band.events[idx]
            if isinstance(e, Pass):
                mu = f.disks[e.disk].label
                if sheet in mu.pair:
                    pierce(e.disk)
            elif isinstance(e, Cross):
                items.append(("slot", band.id, idx))
                sheets.append(sheet)
                slot_sheets.setdefault((band.id, idx), []).append(
                    (band.id, len(items) - 1, sheet, direction))

        for idx in range(len(band.events)):
            handle(idx, 1)
        pierce(band.ends[1][0])
        for idx in range(len(band.events) - 1, -1, -1):
            handle(idx, -1)
        pierce(band.ends[0][0])
        if sheet != band.labels[0].i:
            raise ConversionError(f"band {band.id}: boundary walk did not close")
        walks[band.id] = list(zip(items, sheets))

    # phase 2: a doubled crossing is real exactly when the two copies lie in
    # the same sheet. A same-label crossing has two real copies; a share-one
    # crossing has one, which the return paths through the 1-handles must
    # meet again, so it is emitted doubled (keeping all pairwise crossing
    # sums even, as any honest closed-curve diagram has).
    assigned: Dict[Tuple[str, int], List[Tuple[str, str]]] = {}
    xn = 0

    def allocate(sign: int, oslot, uslot):
        nonlocal xn
        xid = f"x{xn}"
        xn += 1
        k.crossings[xid] = KCrossing(xid, sign)
        assigned.setdefault(oslot, []).append((xid, K_OVER))
        assigned.setdefault(uslot, []).append((xid, K_UNDER))

    for cid in sorted(f.crossings, key=id_key):
        over = under = None
        for b in f.sorted_bands():
            for i, e in enumerate(b.events):
                if isinstance(e, Cross) and e.crossing == cid:
                    if e.role == OVER:
                        over = (b.id, i)
                    else:
                        under = (b.id, i)
        # the sign of a doubled crossing transforms with the traversal
        # direction of each copy (reversing a strand negates its crossings)
        matches = []
        for ob, opos, osheet, odir in slot_sheets.get(over, []):
            for ub, upos, usheet, udir in slot_sheets.get(under, []):
                if osheet == usheet:
                    matches.append(((ob, opos), (ub, upos), odir * udir))
        sign = f.crossings[cid].sign
        for oslot, uslot, orient in matches:
            allocate(sign * orient, oslot, uslot)
        if len(matches) == 1:
            oslot, uslot, orient = matches[0]
            allocate(sign * orient, oslot, uslot)

    # phase 3: assemble the framed components
    for band in f.sorted_bands():
        events, labels = [], []
        for pos, (item, sheet) in enumerate(walks[band.id]):
            if isinstance(item, Pierce):
                events.append(item)
                labels.append(sheet)
            else:
                for xid, role in assigned.get((band.id, pos), ()):
                    events.append(KCross(xid, role))
                    labels.append(sheet)
        if not events:
            labels = [band.labels[0].i]
        twists = 2 * sum(e.sign for e in band.events if isinstance(e, HalfTwist))
        k.framed[band.id] = FramedComponent(band.id, events, labels, twists)
    return k


# =====================================================================
# trivial states
# =====================================================================

@dataclass
class TrivialStateResult:
    """Outcome of the naive unlinking procedure on the framed part."""

    changed: frozenset
    modified: GeneralizedKirbyDiagram  # the diagram with the flagged crossings inverted
    writhe: Dict[str, int]  # w_i before
    writhe_trivial: Dict[str, int]  # w'_i after
    inverted: Dict[str, int]  # c_i = (w_i - w'_i) / 2
    component_order: Tuple[str, ...] = ()
    basepoints: Dict[str, int] = field(default_factory=dict)
    orientation: str = "forward"


def _naive_flags(order: List[str], visits_by_crossing: Dict[str, List[Tuple[str, int, str]]]):
    """Crossings whose first point (lexicographic by component then position)
    currently passes over: the naive procedure inverts exactly those."""
    pos = {cid: i for i, cid in enumerate(order)}
    changed = set()
    for cid in sorted(visits_by_crossing, key=id_key):
        visits = visits_by_crossing[cid]
        if len(visits) != 2:
            continue
        keyed = sorted(visits, key=lambda v: (pos[v[0]], v[1]))
        if keyed[0][2] == "over":
            changed.add(cid)
    return changed


def trivial_state(k: GeneralizedKirbyDiagram) -> TrivialStateResult:
    _require_valid(k, "kirby diagram")
    order = [c.id for c in k.sorted_framed()]
    visits = {cid: k.crossing_visits(cid) for cid in k.crossings}
    changed = _naive_flags(order, visits)
    modified = k.copy()
    for cid in changed:
        modified.crossings[cid].sign = -modified.crossings[cid].sign
        for comp in modified.framed.values():
            for i, e in enumerate(comp.events):
                if isinstance(e, KCross) and e.crossing == cid:
                    comp.events[i] = KCross(cid, K_OVER if e.role == K_UNDER else K_UNDER)
    w = {fid: k.writhe(fid) for fid in order}
    wp = {fid: modified.writhe(fid) for fid in order}
    c = {}
    for fid in order:
        diff = w[fid] - wp[fid]
        if diff % 2:
            raise ConversionError(f"non-integral inversion count on {fid}")
        c[fid] = diff // 2
    return TrivialStateResult(
        changed=frozenset(changed),
        modified=modified,
        writhe=w,
        writhe_trivial=wp,
        inverted=c,
        component_order=tuple(order),
        basepoints={fid: 0 for fid in order},
    )


def trivial_state_link(link: LabelledLink) -> Tuple[frozenset, Optional[LabelledLink]]:
    """Naive-procedure flags for a labelled link diagram.

    Returns (inverted crossing ids, trivial-state diagram). The diagram is
    None when the labelling obstructs the crossing changes (a flip is only
    label-safe where the two strands carry equal or disjoint labels).
    """
    _require_valid(link, "link")
    order = [c.id for c in link.sorted_components()]
    visits = {cid: link.crossing_visits(cid) for cid in link.crossings}
    changed = _naive_flags(order, visits)
    out = link.copy()
    for cid in changed:
        over = next(v for v in visits[cid] if v[2] == "over")
        under = next(v for v in visits[cid] if v[2] == "under")
        nu = link.components[over[0]].labels[over[1]]
        lam = link.arc_before(link.components[under[0]], under[1])
        if nu.shares(lam) == 1:
            return frozenset(changed), None
        out.crossings[cid].sign = -out.crossings[cid].sign
        for comp in out.components.values():
            for i, e in enumerate(comp.events):
                if e.crossing == cid:
                    comp.events[i] = LCross(cid, "over" if e.role == "under" else "under")
    return frozenset(changed), out


# =====================================================================
# ordinary Kirby diagram -> labelled ribbon surface
# =====================================================================

def kirby_to_surface(k: GeneralizedKirbyDiagram,
                     state: Optional[TrivialStateResult] = None) -> RibbonDiagram:
    """Degree-3 labelled ribbon surface representing the same 2-handlebody."""
    _require_valid(k, "kirby diagram")
    if not k.is_ordinary():
        raise ConversionError("kirby_to_surface requires an ordinary diagram (one 0-handle)")
    if state is None:
        state = trivial_state(k)

    f = RibbonDiagram(degree=3)
    f.disks["A0"] = Disk("A0", T12, role="A0")
    f.disks["B0"] = Disk("B0", T23, role="B0")
    end_slots: Dict[str, int] = {}
    pass_slots: Dict[str, int] = {}

    def next_end(did: str) -> int:
        end_slots[did] = end_slots.get(did, -1) + 1
        return end_slots[did]

    def next_pass(did: str) -> int:
        pass_slots[did] = pass_slots.get(did, -1) + 1
        return pass_slots[did]

    for d in k.sorted_dotted():
        did = f"C_{d.id}"
        f.disks[did] = Disk(did, T23, role=f"C:{d.id}")
    for cid in sorted(state.changed, key=id_key):
        pid = f"P_{cid}"
        f.disks[pid] = Disk(pid, T23, role=f"Bp:{cid}")
        bid = f"bt_{cid}"
        f.bands[bid] = Band(bid, (("B0", next_end("B0")), (pid, next_end(pid))), [], [T23])

    comp_pos = {c.id: i for i, c in enumerate(k.sorted_framed())}
    first_visit: Dict[str, Tuple[str, int]] = {}
    for cid in state.changed:
        keyed = sorted(k.crossing_visits(cid), key=lambda v: (comp_pos[v[0]], v[1]))
        first_visit[cid] = (keyed[0][0], keyed[0][1])

    for comp in k.sorted_framed():
        fid = comp.id
        fr = k.framing(fid)
        h = fr + 2 * state.inverted[fid] - 2 * state.writhe[fid]
        tid = f"T_{fid}"
        f.disks[tid] = Disk(tid, T12, role=f"Ai:{fid}")
        events: List = []
        labels: List[Transposition] = [T12]

        def emit(ev, lab):
            events.append(ev)
            labels.append(lab)

        sign = 1 if h >= 0 else -1
        for _ in range(abs(h)):
            emit(HalfTwist(sign), labels[-1])

        for idx, e in enumerate(comp.events):
            if isinstance(e, Pierce):
                cdid = f"C_{e.dotted}"
                if e.enter == 0:
                    emit(Pass("B0", FRONT, next_pass("B0")), T13)
                    emit(Pass(cdid, BACK, next_pass(cdid)), T12)
                else:
                    emit(Pass(cdid, FRONT, next_pass(cdid)), T13)
                    emit(Pass("B0", BACK, next_pass("B0")), T12)
            elif isinstance(e, KCross):
                cid = e.crossing
                s = k.crossings[cid].sign
                if cid not in state.changed:
                    rc = f"rc_{cid}"
                    if rc not in f.crossings:
                        f.crossings[rc] = RCrossing(rc, s)
                    emit(Cross(rc, e.role), labels[-1])
                else:
                    pid = f"P_{cid}"
                    rcf, rcc = f"rf_{cid}", f"rg_{cid}"
                    if rcf not in f.crossings:
                        f.crossings[rcf] = RCrossing(rcf, -s)
                        f.crossings[rcc] = RCrossing(rcc, s)
                    if (fid, idx) == first_visit[cid]:
                        emit(Pass(pid, FRONT, next_pass(pid)), T13)
                        emit(Cross(rcf, UNDER), T13)
                        emit(Cross(rcc, UNDER), T13)
                        emit(Pass(pid, BACK, next_pass(pid)), T12)
                    else:
                        emit(Pass(pid, FRONT, next_pass(pid)), T13)
                        emit(Pass(pid, BACK, next_pass(pid)), T12)
                        emit(Cross(rcf, OVER), T12)
                        emit(Cross(rcc, OVER), T12)
        bid = f"a_{fid}"
        f.bands[bid] = Band(bid, ((tid, next_end(tid)), (tid, next_end(tid))), events, labels)
        aid = f"al_{fid}"
        f.bands[aid] = Band(aid, (("A0", next_end("A0")), (tid, next_end(tid))), [], [T12])

    rep = f.validate()
    if not rep.ok:
        raise ConversionError(f"construction produced an invalid surface: {rep.errors[0].message}")
    return f


# =====================================================================
# boundary link of a ribbon surface
# =====================================================================

def _x_id(cid: str, over_side: int, under_side: int) -> str:
    return f"x_{cid}_{over_side}{under_side}"


def boundary_link(f: RibbonDiagram) -> LabelledLink:
    """Labelled link traced along the boundary of the surface diagram.

    Band sides and disk boundary arcs form a 2-regular graph whose cycles
    are the link components. Crossings: one per half twist (the two sides of
    the band cross), four per band crossing (sides against sides), four per
    ribbon intersection (the passing band's sides against the disk boundary,
    routed through the disk's escape gap).
    """
    _require_valid(f, "ribbon diagram")

    slot_lists: Dict[str, List[int]] = {}
    edges: Dict[Tuple, Tuple] = {}
    standalone: List[str] = []
    for d in f.sorted_disks():
        slots = sorted(s for b in f.bands.values() for (did, s) in b.ends if did == d.id)
        slot_lists[d.id] = slots
        if not slots:
            standalone.append(d.id)
            continue
        for t in range(len(slots)):
            a, b = slots[t], slots[(t + 1) % len(slots)]
            edges[("darc", d.id, t)] = ((d.id, a, "+"), (d.id, b, "-"))
    twist_parity = {}
    for band in f.sorted_bands():
        parity = sum(1 for e in band.events if isinstance(e, HalfTwist)) % 2
        twist_parity[band.id] = parity
        for sigma in (0, 1):
            arrive = sigma ^ parity
            p0 = (band.ends[0][0], band.ends[0][1], "-" if sigma == 0 else "+")
            p1 = (band.ends[1][0], band.ends[1][1], "+" if arrive == 0 else "-")
            edges[("bside", band.id, sigma)] = (p0, p1)

    incident: Dict[Tuple, List] = {}
    for key, (p0, p1) in edges.items():
        incident.setdefault(p0, []).append(key)
        incident.setdefault(p1, []).append(key)

    gap_arc: Dict[str, Tuple] = {}
    for d in f.sorted_disks():
        slots = slot_lists[d.id]
        if slots:
            gap_arc[d.id] = ("darc", d.id, (d.gap - 1) % len(slots))

    pass_list: Dict[str, List[Tuple[str, int]]] = {d: [] for d in f.disks}
    for band in f.sorted_bands():
        for idx, e in enumerate(band.events):
            if isinstance(e, Pass):
                pass_list[e.disk].append((band.id, idx))

    crossings: Dict[str, LinkCrossing] = {}

    def need(cid: str, sign: int):
        if cid not in crossings:
            crossings[cid] = LinkCrossing(cid, sign)

    def band_side_trace(band: Band, sigma: int, forward: bool):
        out: List[Tuple[str, str, Transposition]] = []
        cur_side = sigma if forward else sigma ^ twist_parity[band.id]
        cur = band.labels[0] if forward else band.labels[-1]
        rng = range(len(band.events)) if forward else range(len(band.events) - 1, -1, -1)
        for idx in rng:
            e = band.events[idx]
            before = band.labels[idx]
            after = band.labels[idx + 1]
            if isinstance(e, HalfTwist):
                cid = f"tw_{band.id}_{idx}"
                need(cid, e.sign)
                if forward:
                    role = OVER if cur_side == 0 else UNDER
                    cur_side ^= 1
                else:
                    cur_side ^= 1
                    role = OVER if cur_side == 0 else UNDER
                out.append((cid, role, cur))
            elif isinstance(e, Pass):
                cin = f"ps_{band.id}_{idx}_{cur_side}i"
                cout = f"ps_{band.id}_{idx}_{cur_side}o"
                need(cin, 1)
                need(cout, 1)
                if forward:
                    if e.side == FRONT:
                        seq = [(cin, UNDER, after), (cout, OVER, after)]
                    else:
                        seq = [(cin, OVER, before), (cout, UNDER, after)]
                else:
                    if e.side == FRONT:
                        seq = [(cout, OVER, after), (cin, UNDER, before)]
                    else:
                        seq = [(cout, UNDER, before), (cin, OVER, before)]
                out.extend(seq)
                cur = seq[-1][2]
            elif isinstance(e, Cross):
                visits = f.crossing_visits(e.crossing)
                other = next(v for v in visits if not (v[0] == band.id and v[1] == idx))
                sign = f.crossings[e.crossing].sign
                order = (0, 1) if forward else (1, 0)
                if e.role == OVER:
                    for j in order:
                        cid = _x_id(e.crossing, cur_side, j)
                        need(cid, sign)
                        out.append((cid, OVER, cur))
                else:
                    nu = f.bands[other[0]].labels[other[1]]
                    mid = conjugate(cur, nu)
                    first = _x_id(e.crossing, order[0], cur_side)
                    second = _x_id(e.crossing, order[1], cur_side)
                    need(first, sign)
                    need(second, sign)
                    out.append((first, UNDER, mid))
                    out.append((second, UNDER, cur))
        return out

    def darc_trace(disk: Disk, key):
        out: List[Tuple[str, str, Transposition]] = []
        if key is not None and gap_arc.get(disk.id) != key:
            return out
        mu = disk.label
        for band_id, idx in pass_list[disk.id]:
            band = f.bands[band_id]
            e = band.events[idx]
            before, after = band.labels[idx], band.labels[idx + 1]
            if e.side == FRONT:
                # band under at entries, over at exits; the disk dips at exits
                dip = conjugate(mu, after)
                out.append((f"ps_{band_id}_{idx}_0i", OVER, mu))
                out.append((f"ps_{band_id}_{idx}_1i", OVER, mu))
                out.append((f"ps_{band_id}_{idx}_0o", UNDER, dip))
                out.append((f"ps_{band_id}_{idx}_1o", UNDER, mu))
            else:
                dip = conjugate(mu, before)
                out.append((f"ps_{band_id}_{idx}_0o", OVER, mu))
                out.append((f"ps_{band_id}_{idx}_1o", OVER, mu))
                out.append((f"ps_{band_id}_{idx}_0i", UNDER, dip))
                out.append((f"ps_{band_id}_{idx}_1i", UNDER, mu))
            for s in (0, 1):
                need(f"ps_{band_id}_{idx}_{s}i", 1)
                need(f"ps_{band_id}_{idx}_{s}o", 1)
        return out

    comps: List[LinkComponent] = []
    edge_seen = set()
    for start_key in sorted(edges, key=lambda k: (k[0], id_key(str(k[1])), k[2])):
        if start_key in edge_seen:
            continue
        seq = []
        key = start_key
        enter_port = edges[key][0]
        while True:
            edge_seen.add(key)
            a, b = edges[key]
            forward = enter_port == a
            exit_port = b if forward else a
            seq.append((key, forward))
            key = next(e for e in incident[exit_port] if e != key)
            enter_port = exit_port
            if key == start_key:
                break
        events: List[LCross] = []
        labels: List[Transposition] = []
        base_label = None
        for key, forward in seq:
            if key[0] == "bside":
                band = f.bands[key[1]]
                trace = band_side_trace(band, key[2], forward)
                if base_label is None:
                    base_label = band.labels[0] if forward else band.labels[-1]
            else:
                disk = f.disks[key[1]]
                trace = darc_trace(disk, key)
                if base_label is None:
                    base_label = disk.label
            for cid, role, lab in trace:
                events.append(LCross(cid, role))
                labels.append(lab)
        if not events:
            labels = [base_label]
        comps.append(LinkComponent(f"l{len(comps)}", events, labels))

    for did in standalone:
        disk = f.disks[did]
        trace = darc_trace(disk, None)
        events = [LCross(c, r) for c, r, _ in trace]
        labels = [lab for _, _, lab in trace] or [disk.label]
        comps.append(LinkComponent(f"l{len(comps)}", events, labels))

    link = LabelledLink(f.degree, comps, crossings.values())
    rep = link.validate_link()
    if not rep.ok:
        raise ConversionError(f"boundary link invalid: {rep.errors[0].message}")
    return link


# =====================================================================
# braid band presentations
# =====================================================================

@dataclass(frozen=True)
class BraidFactor:
    conjugator: Tuple[int, ...]  # signed generator letters, applied bottom-up
    index: int  # position of the conjugated standard generator
    exponent: int  # +1 or -1
    interval_type: int = 1


@dataclass(frozen=True)
class FactoredLiftableBraid:
    degree: int
    strands: int
    end_labels: Tuple[Transposition, ...]
    factors: Tuple[BraidFactor, ...] = ()


def _braid_step(labels: List[Transposition], perm: List[int], letter: int):
    """One signed generator acting on the labelling and the strand tracking."""
    p = abs(letter) - 1
    a, b = labels[p], labels[p + 1]
    if letter > 0:
        labels[p], labels[p + 1] = conjugate(b, a), a
    else:
        labels[p], labels[p + 1] = b, conjugate(a, b)
    perm[p], perm[p + 1] = perm[p + 1], perm[p]


def braid_closure_link(braid: FactoredLiftableBraid) -> LabelledLink:
    """Labelled closure of the factored braid (used to check boundaries)."""
    n = braid.strands
    labels = list(braid.end_labels)
    perm = list(range(n))
    word: List[int] = []
    for factor in braid.factors:
        word.extend(factor.conjugator)
        word.append(factor.index * (1 if factor.exponent > 0 else -1))
        word.extend(-l for l in reversed(factor.conjugator))
    comp_events: Dict[int, List[Tuple[int, str]]] = {i: [] for i in range(n)}
    crossings: List[LinkCrossing] = []
    for t, letter in enumerate(word):
        p = abs(letter) - 1
        cid = f"x{t}"
        crossings.append(LinkCrossing(cid, 1 if letter > 0 else -1))
        sa, sb = perm[p], perm[p + 1]
        if letter > 0:
            comp_events[sa].append((t, "over"))
            comp_events[sb].append((t, "under"))
        else:
            comp_events[sa].append((t, "under"))
            comp_events[sb].append((t, "over"))
        _braid_step(labels, perm, letter)
    # components of the closure = cycles of the position permutation
    cycles: List[List[int]] = []
    seen = set()
    for s in range(n):
        if s in seen:
            continue
        cyc = []
        cur = s
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = perm.index(cur)
        cycles.append(cyc)
    comps = []
    cross_used = {}
    for ci, cyc in enumerate(cycles):
        events: List[LCross] = []
        labs: List[Transposition] = []
        for s in cyc:
            lab = braid.end_labels[s]
            # replay this strand's visits, tracking its label up the braid
            labels2 = list(braid.end_labels)
            perm2 = list(range(n))
            for t, letter in enumerate(word):
                p = abs(letter) - 1
                strand_positions = {perm2[p]: p, perm2[p + 1]: p + 1}
                if s in strand_positions:
                    role = next(r for tt, r in comp_events[s] if tt == t)
                    events.append(LCross(f"x{t}", role))
                _braid_step(labels2, perm2, letter)
                if s in strand_positions:
                    labs.append(labels2[perm2.index(s)])
        if not events:
            labs = [braid.end_labels[cyc[0]]]
        comps.append(LinkComponent(f"l{ci}", events, labs))
        for e in comps[-1].events:
            cross_used[e.crossing] = True
    link = LabelledLink(braid.degree, comps, [c for c in crossings if c.id in cross_used])
    return link


def band_presentation_surface(braid: FactoredLiftableBraid) -> RibbonDiagram:
    """Ribbon surface spanned by the band presentation of a factored braid:
    one labelled disk per strand, one labelled twisted band per type-1
    factor, with conjugator-determined pass events."""
    n = braid.strands
    if len(braid.end_labels) != n:
        raise ConversionError("end labelling length must match the strand count")
    for lab in braid.end_labels:
        if not lab.within(braid.degree):
            raise ConversionError(f"label {lab} exceeds degree {braid.degree}")
    f = RibbonDiagram(degree=braid.degree)
    for p in range(n):
        f.disks[f"S{p}"] = Disk(f"S{p}", braid.end_labels[p], role=f"strand:{p}")
    end_slots = {d: -1 for d in f.disks}
    pass_slots = {d: -1 for d in f.disks}

    def next_end(did):
        end_slots[did] += 1
        return end_slots[did]

    def next_pass(did):
        pass_slots[did] += 1
        return pass_slots[did]

    for fi, factor in enumerate(braid.factors):
        if factor.interval_type != 1:
            raise ConversionError(
                f"factor {fi} has interval type {factor.interval_type}: trivialize type-2/3 "
                "factors by Montesinos moves before building the surface")
        if factor.exponent not in (1, -1):
            raise ConversionError(f"factor {fi} exponent must be +1 or -1")
        m = factor.index - 1
        if not (0 <= m < n - 1):
            raise ConversionError(f"factor {fi} generator index out of range")
        # labelling and strand positions just below the conjugated generator
        labels = list(braid.end_labels)
        perm = list(range(n))
        checkpoints = []
        for letter in factor.conjugator:
            if not (1 <= abs(letter) <= n - 1):
                raise ConversionError(f"factor {fi} conjugator letter out of range")
            checkpoints.append((list(labels), list(perm), letter))
            _braid_step(labels, perm, letter)
        if labels[m] != labels[m + 1]:
            raise ConversionError(
                f"factor {fi} is not a liftable interval of type 1: "
                f"labels {labels[m]} and {labels[m + 1]} differ at the generator")
        u, v = perm[m], perm[m + 1]

        def walk_down(top_pos: int):
            """Trace one endpoint of the interval back to the base, collecting
            pass events through the strands it crosses."""
            events: List = []
            pos = top_pos
            lab = labels[top_pos]
            for labs, pm, letter in reversed(checkpoints):
                p = abs(letter) - 1
                if pos == p:
                    other_pos, pos = p, p + 1
                elif pos == p + 1:
                    other_pos, pos = p + 1, p
                else:
                    continue
                other = pm[other_pos]
                crossed = labs[other_pos]
                if lab.disjoint(crossed):
                    continue
                target = f"S{other}"
                side = FRONT if letter > 0 else BACK
                events.append(Pass(target, side, next_pass(target)))
                lab = conjugate(lab, f.disks[target].label)
            return events, pos

        left_events, left_base = walk_down(m)
        right_events, right_base = walk_down(m + 1)
        du, dv = f"S{left_base}", f"S{right_base}"
        events = list(reversed(left_events)) + [HalfTwist(factor.exponent)] + right_events
        # recompute the stored labels by forward propagation from the left disk
        labs = [f.disks[du].label]
        for e in events:
            if isinstance(e, Pass):
                labs.append(conjugate(labs[-1], f.disks[e.disk].label))
            else:
                labs.append(labs[-1])
        bid = f"f{fi}"
        f.bands[bid] = Band(bid, ((du, next_end(du)), (dv, next_end(dv))), events, labs)
        if labs[-1] != f.disks[dv].label:
            raise ConversionError(f"factor {fi} violates the lift condition along the conjugator")
    rep = f.validate()
    if not rep.ok:
        raise ConversionError(f"band presentation invalid: {rep.errors[0].message}")
    return f


# =====================================================================
# Montesinos moves on labelled links
# =====================================================================

def list_montesinos_sites(link: LabelledLink, kind: str) -> List[Tuple]:
    _require_valid(link, "link")
    sites = []
    if kind == "M2":
        for cid in sorted(link.crossings, key=id_key):
            visits = link.crossing_visits(cid)
            if len(visits) != 2:
                continue
            over = next(v for v in visits if v[2] == "over")
            under = next(v for v in visits if v[2] == "under")
            lo = link.components[over[0]].labels[over[1]]
            lu = link.components[under[0]].labels[under[1]]
            if lo.disjoint(lu):
                sites.append((cid,))
    elif kind == "M1":
        for cid in sorted(link.crossings, key=id_key):
            if cid.endswith(("_m1a", "_m1b", "_m1c")):
                continue
            visits = link.crossing_visits(cid)
            if len(visits) != 2:
                continue
            over = next(v for v in visits if v[2] == "over")
            under = next(v for v in visits if v[2] == "under")
            nu = link.components[over[0]].labels[over[1]]
            lam = link.arc_before(link.components[under[0]], under[1])
            if nu.shares(lam) == 1:
                sites.append((cid,))
    elif kind == "M1_inv":
        for cid in sorted(link.crossings, key=id_key):
            if cid.endswith("_m1a") and f"{cid[:-4]}_m1b" in link.crossings \
                    and f"{cid[:-4]}_m1c" in link.crossings:
                sites.append((cid[:-4],))
    else:
        raise ConversionError(f"unknown Montesinos move {kind!r}")
    return sites


def montesinos_move(link: LabelledLink, kind: str, site: Tuple) -> LabelledLink:
    """M1 (merging rotation), its inverse, and the self-inverse M2."""
    if site not in list_montesinos_sites(link, kind):
        raise ConversionError(f"stale or mismatched site {site} for {kind}")
    out = link.copy()
    if kind == "M2":
        (cid,) = site
        for comp in out.components.values():
            for i, e in enumerate(comp.events):
                if e.crossing == cid:
                    comp.events[i] = LCross(cid, "over" if e.role == "under" else "under")
        out.crossings[cid].sign = -out.crossings[cid].sign
    elif kind == "M1":
        (cid,) = site
        visits = out.crossing_visits(cid)
        over = next(v for v in visits if v[2] == "over")
        under = next(v for v in visits if v[2] == "under")
        s = out.crossings[cid].sign
        xcomp, xk = under[0], under[1]
        ycomp, yk = over[0], over[1]
        xc = out.components[xcomp]
        lam = out.arc_before(xc, xk)
        nu = out.components[ycomp].labels[yk]
        tau = conjugate(lam, nu)
        a, b, c3 = f"{cid}_m1a", f"{cid}_m1b", f"{cid}_m1c"
        out.crossings[a] = LinkCrossing(a, s)
        out.crossings[b] = LinkCrossing(b, s)
        out.crossings[c3] = LinkCrossing(c3, -s)
        del out.crossings[cid]
        x_events = [LCross(a, "under"), LCross(b, "over"), LCross(c3, "over")]
        x_labels = [tau, tau, tau]
        y_events = [LCross(a, "over"), LCross(b, "under"), LCross(c3, "under")]
        y_labels = [nu, conjugate(nu, tau), nu]
        if xcomp == ycomp:
            comp = out.components[xcomp]
            hi, lo = (yk, xk) if yk > xk else (xk, yk)
            hi_ev, hi_lab = (y_events, y_labels) if yk > xk else (x_events, x_labels)
            lo_ev, lo_lab = (x_events, x_labels) if yk > xk else (y_events, y_labels)
            comp.events[hi:hi + 1] = hi_ev
            comp.labels[hi:hi + 1] = hi_lab
            comp.events[lo:lo + 1] = lo_ev
            comp.labels[lo:lo + 1] = lo_lab
        else:
            out.components[xcomp].events[xk:xk + 1] = x_events
            out.components[xcomp].labels[xk:xk + 1] = x_labels
            out.components[ycomp].events[yk:yk + 1] = y_events
            out.components[ycomp].labels[yk:yk + 1] = y_labels
    elif kind == "M1_inv":
        (base,) = site
        a, b, c3 = f"{base}_m1a", f"{base}_m1b", f"{base}_m1c"
        visits_a = out.crossing_visits(a)
        under_a = next(v for v in visits_a if v[2] == "under")
        over_a = next(v for v in visits_a if v[2] == "over")
        s = out.crossings[a].sign
        out.crossings[base] = LinkCrossing(base, s)
        xc = out.components[under_a[0]]
        xk = under_a[1]
        xc.events[xk:xk + 3] = [LCross(base, "under")]
        xc.labels[xk:xk + 3] = [xc.labels[xk]]
        yc = out.components[over_a[0]]
        for i, e in enumerate(yc.events):
            if e.crossing == a and e.role == "over":
                yc.events[i:i + 3] = [LCross(base, "over")]
                yc.labels[i:i + 3] = [yc.labels[i]]
                break
        for cid in (a, b, c3):
            del out.crossings[cid]
    else:
        raise ConversionError(f"unknown Montesinos move {kind!r}")
    rep = out.validate_link()
    if not rep.ok:
        raise ConversionError(f"{kind} produced an invalid link: {rep.errors[0].message}")
    return out
