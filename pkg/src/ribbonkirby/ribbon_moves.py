"""Local moves on labelled ribbon-surface diagrams.

Each move kind has a left-hand pattern (the site finder) and a rewrite.
MOVE_KINDS below is the reviewable pattern table: it states, per kind, the
matched local configuration and its replacement in the event-sequence code.
Every kind preserves the diagram's degree and the covering orbit structure;
the surface-isotopy and covering-move kinds (I*, R*) also preserve the
derived handlebody invariants, while P+/P-/T change them by the documented
deltas. Those contracts are enforced by the test suite rather than assumed.
"""

from __future__ import annotations

from typing import Callable, Dict, List

from .permutation import Transposition, conjugate, third
from .ribbon import (
    BACK,
    Band,
    Cross,
    Disk,
    FRONT,
    HalfTwist,
    MoveSite,
    OVER,
    Pass,
    RCrossing,
    RibbonDiagram,
    UNDER,
    id_key,
)


class MoveError(ValueError):
    pass


MOVE_KINDS: Dict[str, Dict[str, str]] = {
    "I1": {
        "lhs": "band: [over(c), under(c)] adjacent curl of sign s",
        "rhs": "band: [twist(s), twist(s)]",
        "constraint": "both crossing roles on the same band, adjacent",
    },
    "I1_inv": {
        "lhs": "band: [twist(s), twist(s)] adjacent, equal signs",
        "rhs": "band: [over(c), under(c)] fresh curl of sign s",
        "constraint": "",
    },
    "I2": {
        "lhs": "band: [pass(D front), pass(D back)] adjacent (finger through a disk)",
        "rhs": "band: [] (both ribbon intersections cancelled)",
        "constraint": "same disk",
    },
    "I2_inv": {
        "lhs": "band gap g, disk D",
        "rhs": "band: [pass(D front), pass(D back)] inserted at g",
        "constraint": "",
    },
    "I3": {
        "lhs": "band: [pass(D back), pass(D front)] adjacent",
        "rhs": "band: []",
        "constraint": "same disk",
    },
    "I3_inv": {
        "lhs": "band gap g, disk D",
        "rhs": "band: [pass(D back), pass(D front)] inserted at g",
        "constraint": "",
    },
    "I4": {
        "lhs": "band: [twist(s), pass(D side slot)] adjacent",
        "rhs": "band: [pass(D side slot), twist(s)] (twist slides past the intersection)",
        "constraint": "",
    },
    "I4_inv": {
        "lhs": "band: [pass(D side slot), twist(s)] adjacent",
        "rhs": "band: [twist(s), pass(D side slot)]",
        "constraint": "",
    },
    "R1": {
        "lhs": "pass of a band labelled x through a disk labelled y, |x ∩ y| = 1; "
               "three cell states: [pass], [twist(+), pass, twist(-)], [twist(-), pass, twist(+)]",
        "rhs": "the next state in the 120-degree rotation cycle (R1^3 = identity, R1^-1 = R1^2)",
        "constraint": "labels share exactly one sheet",
    },
    "R1_inv": {
        "lhs": "as R1",
        "rhs": "the previous rotation state",
        "constraint": "labels share exactly one sheet",
    },
    "R2": {
        "lhs": "crossing between segments with disjoint labels",
        "rhs": "ribbon intersection: the over band is split by a new disk carrying its label; "
               "the under band passes through that disk",
        "constraint": "all four sheets distinct",
    },
    "R2_inv": {
        "lhs": "disk with exactly two attached band ends, one disjoint-labelled pass, nothing else",
        "rhs": "the two attached bands fused, the pass replaced by a crossing",
        "constraint": "pass label disjoint from disk label",
    },
    "R3": {
        "lhs": "two tongue tips: separate one-band disks with labels sharing one sheet",
        "rhs": "tips removed, bands joined through a new small disk labelled with the third transposition",
        "constraint": "|t1 ∩ t2| = 1, distinct bands",
    },
    "R3_inv": {
        "lhs": "small disk with no attachments and exactly one pass whose labels share one sheet",
        "rhs": "the passing band cut at the disk into two tongue tips",
        "constraint": "",
    },
    "R4": {
        "lhs": "crossing between segments with disjoint labels",
        "rhs": "the same crossing with over/under exchanged and sign negated",
        "constraint": "all four sheets distinct; self-inverse",
    },
    "R5": {
        "lhs": "pass with labels sharing one sheet",
        "rhs": "the passing band split just after the pass by a new 0-handle",
        "constraint": "",
    },
    "R5_inv": {
        "lhs": "disk with exactly two attached band ends and no passes",
        "rhs": "the two bands fused, disk removed",
        "constraint": "distinct bands",
    },
    "R6": {
        "lhs": "band: [twist(s), twist(s), pass(D)] with labels sharing one sheet",
        "rhs": "band: [pass(D), curl(s)] (a full twist transferred across the intersection)",
        "constraint": "a curl equals one full twist in the framing",
    },
    "R6_inv": {
        "lhs": "band: [pass(D), curl(s)] with labels sharing one sheet",
        "rhs": "band: [twist(s), twist(s), pass(D)]",
        "constraint": "",
    },
    "P+": {
        "lhs": "any disk D",
        "rhs": "a split closed ribbon with one positive half twist, tied to D by a plain band",
        "constraint": "positive blow-up: chi(M) + 1, signature + 1, boundary unchanged",
    },
    "P-": {
        "lhs": "any disk D",
        "rhs": "as P+ with one negative half twist",
        "constraint": "negative blow-up",
    },
    "T": {
        "lhs": "separate disk D plus a same-labelled anchor disk P",
        "rhs": "D acquires an untwisted closed ribbon and a connecting band to P (1/2-handle trading)",
        "constraint": "chi(M) + 2, boundary invariants unchanged",
    },
}

RIBBON_MOVE_KINDS = ("I1", "I2", "I3", "I4", "R1", "R2", "R3", "R4", "R5", "R6")
BOUNDARY_MOVE_KINDS = ("P+", "P-", "T")


# ----------------------------------------------------------------- helpers

def _reverse_band(b: Band) -> None:
    b.events = list(reversed(b.events))
    b.labels = list(reversed(b.labels))
    b.ends = (b.ends[1], b.ends[0])


def _tip_disks(f: RibbonDiagram) -> List[Disk]:
    out = []
    for d in f.sorted_disks():
        if len(f.attachments(d.id)) == 1 and not f.passes_through(d.id):
            out.append(d)
    return out


def _crossing_pair(f: RibbonDiagram, cid: str):
    over = under = None
    for b in f.sorted_bands():
        for i, e in enumerate(b.events):
            if isinstance(e, Cross) and e.crossing == cid:
                if e.role == OVER:
                    over = (b.id, i)
                else:
                    under = (b.id, i)
    return over, under


def _is_curl(f: RibbonDiagram, band: Band, k: int) -> bool:
    if k + 1 >= len(band.events):
        return False
    a, b = band.events[k], band.events[k + 1]
    return (
        isinstance(a, Cross)
        and isinstance(b, Cross)
        and a.crossing == b.crossing
        and {a.role, b.role} == {OVER, UNDER}
    )


# ------------------------------------------------------------ site finders

def _sites_I1(f):
    for b in f.sorted_bands():
        for k in range(len(b.events) - 1):
            if _is_curl(f, b, k):
                yield MoveSite("I1", (b.id, k))


def _sites_I1_inv(f):
    for b in f.sorted_bands():
        for k in range(len(b.events) - 1):
            a, c = b.events[k], b.events[k + 1]
            if isinstance(a, HalfTwist) and isinstance(c, HalfTwist) and a.sign == c.sign:
                yield MoveSite("I1_inv", (b.id, k))


def _sites_fingers(kind, first, second):
    def finder(f):
        for b in f.sorted_bands():
            for k in range(len(b.events) - 1):
                a, c = b.events[k], b.events[k + 1]
                if (
                    isinstance(a, Pass)
                    and isinstance(c, Pass)
                    and a.disk == c.disk
                    and a.side == first
                    and c.side == second
                ):
                    yield MoveSite(kind, (b.id, k))
    return finder


def _sites_finger_inv(kind):
    def finder(f):
        disk_ids = [d.id for d in f.sorted_disks()]
        for b in f.sorted_bands():
            for gap in range(len(b.events) + 1):
                for did in disk_ids:
                    yield MoveSite(kind, (b.id, gap, did))
    return finder


def _sites_I4(f):
    for b in f.sorted_bands():
        for k in range(len(b.events) - 1):
            if isinstance(b.events[k], HalfTwist) and isinstance(b.events[k + 1], Pass):
                yield MoveSite("I4", (b.id, k))


def _sites_I4_inv(f):
    for b in f.sorted_bands():
        for k in range(len(b.events) - 1):
            if isinstance(b.events[k], Pass) and isinstance(b.events[k + 1], HalfTwist):
                yield MoveSite("I4_inv", (b.id, k))


def _share_one_pass_sites(kind):
    def finder(f):
        for b in f.sorted_bands():
            for k, e in enumerate(b.events):
                if isinstance(e, Pass) and b.labels[k].shares(f.disks[e.disk].label) == 1:
                    yield MoveSite(kind, (b.id, k))
    return finder


def _disjoint_crossing_sites(kind):
    def finder(f):
        for cid in sorted(f.crossings, key=id_key):
            over, under = _crossing_pair(f, cid)
            if over is None or under is None:
                continue
            lo = f.bands[over[0]].labels[over[1]]
            lu = f.bands[under[0]].labels[under[1]]
            if lo.disjoint(lu):
                yield MoveSite(kind, (cid,))
    return finder


def _sites_R2_inv(f):
    for d in f.sorted_disks():
        att = f.attachments(d.id)
        passes = f.passes_through(d.id)
        if len(att) != 2 or len(passes) != 1:
            continue
        if att[0][0] == att[1][0]:
            continue
        w, q = passes[0]
        if f.bands[w].labels[q].disjoint(d.label):
            yield MoveSite("R2_inv", (d.id,))


def _sites_R3(f):
    tips = _tip_disks(f)
    for i, t1 in enumerate(tips):
        for t2 in tips[i + 1:]:
            if t1.label.shares(t2.label) != 1:
                continue
            b1 = f.attachments(t1.id)[0][0]
            b2 = f.attachments(t2.id)[0][0]
            if b1 != b2:
                yield MoveSite("R3", (t1.id, t2.id))


def _sites_R3_inv(f):
    for d in f.sorted_disks():
        if f.attachments(d.id):
            continue
        passes = f.passes_through(d.id)
        if len(passes) != 1:
            continue
        w, q = passes[0]
        if f.bands[w].labels[q].shares(d.label) == 1:
            yield MoveSite("R3_inv", (d.id,))


def _sites_R5_inv(f):
    for d in f.sorted_disks():
        att = f.attachments(d.id)
        if len(att) == 2 and not f.passes_through(d.id) and att[0][0] != att[1][0]:
            yield MoveSite("R5_inv", (d.id,))


def _sites_R6(f):
    for b in f.sorted_bands():
        for k in range(len(b.events) - 2):
            e1, e2, p = b.events[k], b.events[k + 1], b.events[k + 2]
            if (
                isinstance(e1, HalfTwist)
                and isinstance(e2, HalfTwist)
                and e1.sign == e2.sign
                and isinstance(p, Pass)
                and b.labels[k + 2].shares(f.disks[p.disk].label) == 1
            ):
                yield MoveSite("R6", (b.id, k))


def _sites_R6_inv(f):
    for b in f.sorted_bands():
        for k in range(len(b.events) - 2):
            p = b.events[k]
            if not isinstance(p, Pass):
                continue
            if not _is_curl(f, b, k + 1):
                continue
            if b.labels[k].shares(f.disks[p.disk].label) == 1:
                yield MoveSite("R6_inv", (b.id, k))


def _sites_blowup(kind):
    def finder(f):
        for d in f.sorted_disks():
            yield MoveSite(kind, (d.id,))
    return finder


def _sites_T(f):
    for d in f.sorted_disks():
        if f.attachments(d.id) or f.passes_through(d.id):
            continue
        for p in f.sorted_disks():
            if p.id != d.id and p.label == d.label:
                yield MoveSite("T", (d.id, p.id))


# ---------------------------------------------------------------- appliers

def _apply_I1(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    cid = b.events[k].crossing
    sign = out.crossings[cid].sign
    b.events[k:k + 2] = [HalfTwist(sign), HalfTwist(sign)]
    del out.crossings[cid]
    return out


def _apply_I1_inv(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    sign = b.events[k].sign
    cid = out.fresh_id("c")
    out.crossings[cid] = RCrossing(cid, sign)
    b.events[k:k + 2] = [Cross(cid, OVER), Cross(cid, UNDER)]
    return out


def _apply_finger_cancel(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    del b.events[k:k + 2]
    del b.labels[k + 1:k + 3]
    return out


def _make_finger_insert(first, second):
    def apply(f, site):
        bid, gap, did = site.refs
        out = f.copy()
        b = out.bands[bid]
        mu = out.disks[did].label
        s1 = out.next_pass_slot(did)
        mid = conjugate(b.labels[gap], mu)
        b.events[gap:gap] = [Pass(did, first, s1), Pass(did, second, s1 + 1)]
        b.labels[gap + 1:gap + 1] = [mid, b.labels[gap]]
        return out
    return apply


def _apply_I4(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    ht, pa = b.events[k], b.events[k + 1]
    b.events[k:k + 2] = [pa, ht]
    b.labels[k + 1] = b.labels[k + 2]
    return out


def _apply_I4_inv(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    pa, ht = b.events[k], b.events[k + 1]
    b.events[k:k + 2] = [ht, pa]
    b.labels[k + 1] = b.labels[k]
    return out


def _r1_state(b: Band, k: int) -> int:
    """0: bare pass; 1: [twist+, pass, twist-]; 2: [twist-, pass, twist+]."""
    if 0 < k < len(b.events) - 1:
        a, c = b.events[k - 1], b.events[k + 1]
        if isinstance(a, HalfTwist) and isinstance(c, HalfTwist) and a.sign == -c.sign:
            return 1 if a.sign == 1 else 2
    return 0


def _apply_R1(f, site, direction=1):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    state = _r1_state(b, k)
    target = (state + direction) % 3
    if state == target:
        return out
    # strip the existing padding, then install the target state's padding
    if state != 0:
        del b.events[k + 1]
        del b.events[k - 1]
        del b.labels[k + 1]
        del b.labels[k - 1]
        k -= 1
    if target != 0:
        s = 1 if target == 1 else -1
        b.events[k:k + 1] = [HalfTwist(s), b.events[k], HalfTwist(-s)]
        b.labels[k:k + 2] = [b.labels[k], b.labels[k], b.labels[k + 1], b.labels[k + 1]]
    return out


def _apply_R2(f, site):
    (cid,) = site.refs
    out = f.copy()
    over, under = _crossing_pair(out, cid)
    ob, p = over
    ub, q = under
    o = out.bands[ob]
    nid = out.fresh_id("d")
    sign = out.crossings[cid].sign
    out.disks[nid] = Disk(nid, o.labels[p], role=f"r2s{sign:+d}")
    tail_events = o.events[p + 1:]
    tail_labels = o.labels[p + 1:]
    old_end1 = o.ends[1]
    o.events = o.events[:p]
    o.labels = o.labels[:p + 1]
    o.ends = (o.ends[0], (nid, 1))
    b2id = out.fresh_id("b")
    out.bands[b2id] = Band(b2id, ((nid, 0), old_end1), tail_events, tail_labels)
    # locate the under event after the split
    if ub == ob:
        if q < p:
            wb, wq = ob, q
        else:
            wb, wq = b2id, q - p - 1
    else:
        wb, wq = ub, q
    out.bands[wb].events[wq] = Pass(nid, FRONT, 0)
    del out.crossings[cid]
    return out


def _fuse_at_disk(out: RibbonDiagram, did: str, insert_event=None):
    """Fuse the two bands attached at disk did; returns (kept id, removed id,
    index offset of the second band's events inside the fused one)."""
    att = out.attachments(did)
    (xid, _), (yid, _) = att
    x, y = out.bands[xid], out.bands[yid]
    if x.ends[1][0] != did:
        _reverse_band(x)
    if y.ends[0][0] != did:
        _reverse_band(y)
    offset = len(x.events) + (1 if insert_event is not None else 0)
    if insert_event is not None:
        x.events = x.events + [insert_event] + y.events
        x.labels = x.labels + y.labels
    else:
        x.events = x.events + y.events
        x.labels = x.labels + y.labels[1:]
    x.ends = (x.ends[0], y.ends[1])
    del out.bands[yid]
    del out.disks[did]
    return xid, yid, offset


def _apply_R2_inv(f, site):
    (did,) = site.refs
    out = f.copy()
    disk = out.disks[did]
    sign = 1
    if disk.role.startswith("r2s"):
        sign = int(disk.role[3:])
    (w, _q) = out.passes_through(did)[0]
    cid = out.fresh_id("c")
    xid, yid, _offset = _fuse_at_disk(out, did, insert_event=Cross(cid, OVER))
    out.crossings[cid] = RCrossing(cid, sign)
    if w == yid:
        w = xid
    wb = out.bands[w]
    for i, e in enumerate(wb.events):
        if isinstance(e, Pass) and e.disk == did:
            wb.events[i] = Cross(cid, UNDER)
            break
    else:
        raise MoveError("pass through the fused disk vanished")
    return out


def _apply_R3(f, site):
    t1id, t2id = site.refs
    out = f.copy()
    t1, t2 = out.disks[t1id], out.disks[t2id]
    b1id = out.attachments(t1id)[0][0]
    b2id = out.attachments(t2id)[0][0]
    b1, b2 = out.bands[b1id], out.bands[b2id]
    if b1.ends[1][0] != t1id:
        _reverse_band(b1)
    if b2.ends[0][0] != t2id:
        _reverse_band(b2)
    nu = third(t1.label, t2.label)
    nid = out.fresh_id("d")
    out.disks[nid] = Disk(nid, nu, role="r3")
    slot = out.next_pass_slot(nid)
    b1.events = b1.events + [Pass(nid, FRONT, slot)] + b2.events
    b1.labels = b1.labels + b2.labels
    b1.ends = (b1.ends[0], b2.ends[1])
    del out.bands[b2id]
    del out.disks[t1id]
    del out.disks[t2id]
    return out


def _apply_R3_inv(f, site):
    (did,) = site.refs
    out = f.copy()
    w, q = out.passes_through(did)[0]
    b = out.bands[w]
    tau1, tau2 = b.labels[q], b.labels[q + 1]
    t1 = out.fresh_id("d")
    out.disks[t1] = Disk(t1, tau1, role="tip")
    t2 = out.fresh_id("d")
    out.disks[t2] = Disk(t2, tau2, role="tip")
    tail_events = b.events[q + 1:]
    tail_labels = b.labels[q + 1:]
    old_end1 = b.ends[1]
    b.events = b.events[:q]
    b.labels = b.labels[:q + 1]
    b.ends = (b.ends[0], (t1, 0))
    b2id = out.fresh_id("b")
    out.bands[b2id] = Band(b2id, ((t2, 0), old_end1), tail_events, tail_labels)
    del out.disks[did]
    return out


def _apply_R4(f, site):
    (cid,) = site.refs
    out = f.copy()
    over, under = _crossing_pair(out, cid)
    ob, p = over
    ub, q = under
    out.bands[ob].events[p] = Cross(cid, UNDER)
    out.bands[ub].events[q] = Cross(cid, OVER)
    out.crossings[cid] = RCrossing(cid, -out.crossings[cid].sign)
    return out


def _apply_R5(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    nid = out.fresh_id("d")
    out.disks[nid] = Disk(nid, b.labels[k + 1], role="r5")
    tail_events = b.events[k + 1:]
    tail_labels = b.labels[k + 1:]
    old_end1 = b.ends[1]
    b.events = b.events[:k + 1]
    b.labels = b.labels[:k + 2]
    b.ends = (b.ends[0], (nid, 0))
    b2id = out.fresh_id("b")
    out.bands[b2id] = Band(b2id, ((nid, 1), old_end1), tail_events, tail_labels)
    return out


def _apply_R5_inv(f, site):
    (did,) = site.refs
    out = f.copy()
    _fuse_at_disk(out, did, insert_event=None)
    return out


def _apply_R6(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    sign = b.events[k].sign
    pa = b.events[k + 2]
    cid = out.fresh_id("c")
    out.crossings[cid] = RCrossing(cid, sign)
    after = b.labels[k + 3]
    b.events[k:k + 3] = [pa, Cross(cid, OVER), Cross(cid, UNDER)]
    b.labels[k + 1:k + 4] = [after, after, after]
    return out


def _apply_R6_inv(f, site):
    bid, k = site.refs
    out = f.copy()
    b = out.bands[bid]
    pa = b.events[k]
    cid = b.events[k + 1].crossing
    sign = out.crossings[cid].sign
    before = b.labels[k]
    after = b.labels[k + 1]
    b.events[k:k + 3] = [HalfTwist(sign), HalfTwist(sign), pa]
    b.labels[k + 1:k + 4] = [before, before, after]
    del out.crossings[cid]
    return out


def _make_blowup(sign):
    def apply(f, site):
        (did,) = site.refs
        out = f.copy()
        lab = out.disks[did].label
        tid = out.fresh_id("d")
        out.disks[tid] = Disk(tid, lab, role="blowup")
        ring = out.fresh_id("b")
        out.bands[ring] = Band(ring, ((tid, 0), (tid, 1)), [HalfTwist(sign)], [lab, lab])
        alpha = out.fresh_id("b")
        out.bands[alpha] = Band(alpha, ((did, out.next_end_slot(did)), (tid, 2)), [], [lab])
        return out
    return apply


def _apply_T(f, site):
    did, pid = site.refs
    out = f.copy()
    lab = out.disks[did].label
    ring = out.fresh_id("b")
    out.bands[ring] = Band(ring, ((did, 0), (did, 1)), [], [lab])
    alpha = out.fresh_id("b")
    out.bands[alpha] = Band(alpha, ((pid, out.next_end_slot(pid)), (did, 2)), [], [lab])
    return out


_FINDERS: Dict[str, Callable] = {
    "I1": _sites_I1,
    "I1_inv": _sites_I1_inv,
    "I2": _sites_fingers("I2", FRONT, BACK),
    "I2_inv": _sites_finger_inv("I2_inv"),
    "I3": _sites_fingers("I3", BACK, FRONT),
    "I3_inv": _sites_finger_inv("I3_inv"),
    "I4": _sites_I4,
    "I4_inv": _sites_I4_inv,
    "R1": _share_one_pass_sites("R1"),
    "R1_inv": _share_one_pass_sites("R1_inv"),
    "R2": _disjoint_crossing_sites("R2"),
    "R2_inv": _sites_R2_inv,
    "R3": _sites_R3,
    "R3_inv": _sites_R3_inv,
    "R4": _disjoint_crossing_sites("R4"),
    "R5": _share_one_pass_sites("R5"),
    "R5_inv": _sites_R5_inv,
    "R6": _sites_R6,
    "R6_inv": _sites_R6_inv,
    "P+": _sites_blowup("P+"),
    "P-": _sites_blowup("P-"),
    "T": _sites_T,
}

_APPLIERS: Dict[str, Callable] = {
    "I1": _apply_I1,
    "I1_inv": _apply_I1_inv,
    "I2": _apply_finger_cancel,
    "I2_inv": _make_finger_insert(FRONT, BACK),
    "I3": _apply_finger_cancel,
    "I3_inv": _make_finger_insert(BACK, FRONT),
    "I4": _apply_I4,
    "I4_inv": _apply_I4_inv,
    "R1": lambda f, s: _apply_R1(f, s, 1),
    "R1_inv": lambda f, s: _apply_R1(f, s, -1),
    "R2": _apply_R2,
    "R2_inv": _apply_R2_inv,
    "R3": _apply_R3,
    "R3_inv": _apply_R3_inv,
    "R4": _apply_R4,
    "R5": _apply_R5,
    "R5_inv": _apply_R5_inv,
    "R6": _apply_R6,
    "R6_inv": _apply_R6_inv,
    "P+": _make_blowup(1),
    "P-": _make_blowup(-1),
    "T": _apply_T,
}


def move_kinds() -> List[str]:
    return list(_FINDERS)


def list_move_sites(f: RibbonDiagram, kind: str) -> List[MoveSite]:
    """All sites where the kind's left-hand pattern matches, ascending order."""
    if kind not in _FINDERS:
        raise MoveError(f"unknown move kind {kind!r}")
    rep = f.validate()
    if not rep.ok:
        raise MoveError(f"diagram invalid: {rep.errors[0].message}")
    return list(_FINDERS[kind](f))


def apply_move(f: RibbonDiagram, kind: str, site: MoveSite) -> RibbonDiagram:
    """Apply kind at site; the site must come from list_move_sites on f."""
    if kind not in _APPLIERS:
        raise MoveError(f"unknown move kind {kind!r}")
    if site.kind != kind:
        raise MoveError(f"site kind {site.kind!r} does not match {kind!r}")
    if site not in list_move_sites(f, kind):
        raise MoveError(f"stale or mismatched site {site.refs} for {kind}")
    out = _APPLIERS[kind](f, site)
    rep = out.validate()
    if not rep.ok:
        raise MoveError(f"move {kind} produced an invalid diagram: {rep.errors[0].message}")
    return out
