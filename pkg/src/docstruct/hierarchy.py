"""Hierarchy of repeating patterns in a template number series.

Starting from the detail templates, runs of the current pattern are
collapsed into a single reference symbol and the parent pattern is grown
around that reference: the header is what precedes every occurrence, the
footer what follows it. Templates that break this regularity are removed as
noise and the whole procedure restarts. The removed templates are then
analysed the same way and reported as additional structures.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

__all__ = [
    "PatternRef",
    "Pattern",
    "Disagreement",
    "Growth",
    "HierarchyResult",
    "WILDCARD",
    "EXHAUSTED",
    "collapse_runs",
    "grow_parent",
    "pick_noise",
    "find_seed",
    "most_frequent_motif",
    "build_hierarchy",
    "render_dss",
]

_ref_ids = itertools.count()


@dataclass(frozen=True)
class PatternRef:
    """Opaque symbol standing for a collapsed run of a pattern."""

    level: int
    uid: int = field(default_factory=lambda: next(_ref_ids))

    def __repr__(self):
        return f"P{self.level}"


class _Marker:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


WILDCARD = _Marker("*")  # past the start/end of the series: satisfies anything
EXHAUSTED = _Marker("|")  # the neighbouring occurrence's context begins here


@dataclass
class Pattern:
    header: list[int]
    child: Pattern | None = None
    footer: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.child is None and not self.header:
            raise ValueError("a detailed pattern needs at least one template")

    @property
    def is_detailed(self) -> bool:
        return self.child is None

    def render(self) -> str:
        parts = [str(t) for t in self.header]
        if self.child is not None:
            parts.append(self.child.render())
        parts.extend(str(t) for t in self.footer)
        return "[" + ", ".join(parts) + "]"

    def levels(self) -> list[Pattern]:
        """Patterns from the detailed one (level 0) up to this one."""
        chain = []
        p = self
        while p is not None:
            chain.append(p)
            p = p.child
        return chain[::-1]

    def template_ids(self) -> list[int]:
        ids = list(self.header) + list(self.footer)
        if self.child is not None:
            ids.extend(self.child.template_ids())
        return ids

    def to_dict(self) -> dict:
        return {
            "header": list(self.header),
            "child": None if self.child is None else self.child.to_dict(),
            "footer": list(self.footer),
            "dss": self.render(),
        }

    def __str__(self):
        return self.render()


@dataclass
class Disagreement:
    side: str  # "header" or "footer"
    offset: int  # distance from the reference symbol, >= 1
    counts: dict  # real symbol -> number of occurrences showing it
    exhausted: int = 0  # occurrences whose context ran into a neighbour

    def describe(self) -> str:
        sign = "-" if self.side == "header" else "+"
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.counts.items(), key=repr))
        extra = f", |: {self.exhausted}" if self.exhausted else ""
        return f"{self.side}{sign}{self.offset} {{{items}{extra}}}"


@dataclass
class Growth:
    header: list[int]
    footer: list[int]
    disagreements: list[Disagreement]

    @property
    def disagreement(self) -> Disagreement | None:
        return self.disagreements[0] if self.disagreements else None


@dataclass
class HierarchyResult:
    structures: list[Pattern]
    noise_log: list[tuple[int, str]] = field(default_factory=list)
    residue: list[int] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)  # growth steps of the final pass

    def dss(self) -> str:
        return render_dss(self)

    def to_dict(self) -> dict:
        return {
            "dss": self.dss(),
            "structures": [
                {
                    "pattern": s.to_dict(),
                    "levels": [lvl.render() for lvl in s.levels()],
                }
                for s in self.structures
            ],
            "noise_log": [{"template_id": t, "reason": r} for t, r in self.noise_log],
            "residue": list(self.residue),
            "trace": list(self.trace),
        }


def collapse_runs(
    series: Sequence[Hashable],
    pattern: Sequence[Hashable],
    ref: Hashable,
    partial_edges: bool = False,
) -> list:
    """Replace each maximal run of consecutive ``pattern`` occurrences by ``ref``.

    Matching is leftmost-first and non-overlapping. With ``partial_edges`` a
    truncated occurrence at the very start (a proper suffix of the pattern)
    or very end (a proper prefix) also counts.
    """
    seq = list(pattern)
    k = len(seq)
    if k == 0:
        raise ValueError("empty pattern")
    s = list(series)
    n = len(s)
    out: list = []
    i = 0
    in_run = False
    if partial_edges:
        for cut in range(1, k):
            tail = seq[cut:]
            if s[: len(tail)] == tail and s[:k] != seq:
                out.append(ref)
                i = len(tail)
                in_run = True
                break
    while i < n:
        if s[i : i + k] == seq:
            if not in_run:
                out.append(ref)
            in_run = True
            i += k
            continue
        rest = s[i:]
        if partial_edges and 0 < len(rest) < k and rest == seq[: len(rest)]:
            if not in_run:
                out.append(ref)
            break
        out.append(s[i])
        in_run = False
        i += 1
    return out


def _context(series, occ, t, pos, lo, hi):
    """Symbol at ``pos`` for occurrence ``t`` given the allowed window [lo, hi)."""
    if pos < 0 or pos >= len(series):
        return WILDCARD
    if pos < lo or pos >= hi:
        return EXHAUSTED
    sym = series[pos]
    if isinstance(sym, PatternRef):
        return EXHAUSTED
    return sym


def _footer_contexts(series, occ, h, f):
    d = f + 1
    out = []
    for t, o in enumerate(occ):
        hi = occ[t + 1] - h if t + 1 < len(occ) else len(series)
        out.append(_context(series, occ, t, o + d, o + 1, hi))
    return out


def _header_contexts(series, occ, h, f):
    d = h + 1
    out = []
    for t, o in enumerate(occ):
        lo = occ[t - 1] + 1 + f if t > 0 else 0
        out.append(_context(series, occ, t, o - d, lo, o))
    return out


def _decide(ctx, side, offset):
    """('extend', symbol) or ('stop', Disagreement | None)."""
    informative = [c for c in ctx if c is not WILDCARD]
    if not informative:
        return "stop", None
    real = Counter(c for c in informative if c is not EXHAUSTED)
    exhausted = len(informative) - sum(real.values())
    if not exhausted and len(real) == 1:
        return "extend", next(iter(real))
    if len(real) >= 2 or (real and exhausted):
        return "stop", Disagreement(side, offset, dict(real), exhausted)
    return "stop", None


def grow_parent(series: Sequence[Hashable], ref: Hashable) -> Growth:
    """Grow header and footer around every occurrence of ``ref``.

    Both sides extend one symbol per step while all informative contexts
    agree. Symbols between two occurrences are shared: the footer of the
    earlier one and the header of the later one may not overlap. At each
    step, if only one side has a real symbol at the series edge (before the
    first or after the last occurrence), only that side grows; otherwise
    both grow, footer first.
    """
    s = list(series)
    occ = [i for i, x in enumerate(s) if x == ref]
    if not occ:
        raise ValueError("reference symbol does not occur in the series")
    header: list = []
    footer: list = []
    reports: list[Disagreement] = []
    open_side = {"header": True, "footer": True}

    def evaluate(side):
        h, f = len(header), len(footer)
        if side == "footer":
            return _decide(_footer_contexts(s, occ, h, f), side, f + 1)
        return _decide(_header_contexts(s, occ, h, f), side, h + 1)

    def edge_evidence(side):
        h, f = len(header), len(footer)
        if side == "footer":
            return _footer_contexts(s, occ, h, f)[-1] is not WILDCARD
        return _header_contexts(s, occ, h, f)[0] is not WILDCARD

    while open_side["footer"] or open_side["header"]:
        sides = [x for x in ("footer", "header") if open_side[x]]
        backed = [x for x in sides if edge_evidence(x)]
        # a side with a real symbol at the series edge has evidence of its
        # own; the other one only sees the shared gaps and has to wait
        if len(sides) == 2 and len(backed) == 1:
            sides = backed
        verdicts = {x: evaluate(x) for x in sides}
        growing = [x for x in sides if verdicts[x][0] == "extend"]
        if not growing:
            for x in sides:
                open_side[x] = False
                if verdicts[x][1] is not None:
                    reports.append(verdicts[x][1])
            continue
        # extend only the agreeing sides; a disagreeing side is looked at
        # again once the shared gaps have shrunk
        for x in growing:
            verdict, value = evaluate(x)
            if verdict != "extend":
                continue
            if x == "footer":
                footer.append(value)
            else:
                header.insert(0, value)
    reports.sort(key=lambda r: (r.offset, r.side != "footer"))
    return Growth(header, footer, reports)


def pick_noise(
    disagreements: Iterable[Disagreement],
    series: Sequence[Hashable] = (),
    protected: Iterable[int] = (),
) -> int | None:
    """Template to remove as noise, or None when the pattern simply ends.

    A side is noisy when one real symbol holds at least 2/3 of the
    informative contexts; the minority symbols are then candidates and the
    rarest one in ``series`` is chosen (ties: higher template id).
    """
    freq = Counter(x for x in series if not isinstance(x, PatternRef))
    protected = set(protected)
    for rep in sorted(disagreements, key=lambda r: r.offset):
        if not rep.counts:
            continue
        total = sum(rep.counts.values()) + rep.exhausted
        top, top_n = max(rep.counts.items(), key=lambda kv: (kv[1], repr(kv[0])))
        if 3 * top_n < 2 * total:
            continue
        cands = [k for k in rep.counts if k != top and k not in protected]
        if cands:
            return min(cands, key=lambda k: (freq.get(k, 0), -k))
    return None


def find_seed(series: Sequence[int], detail_ids: Iterable[int]) -> list[int]:
    """Primitive period of the first run of detail templates holding all of them."""
    ids = set(detail_ids)
    if not ids:
        raise ValueError("no detail templates given")
    s = list(series)
    i = 0
    n = len(s)
    while i < n:
        if s[i] not in ids:
            i += 1
            continue
        j = i
        while j < n and s[j] in ids:
            j += 1
        run = s[i:j]
        if ids <= set(run):
            for p in range(1, len(run) + 1):
                if ids <= set(run[:p]) and all(run[k] == run[k - p] for k in range(p, len(run))):
                    return run[:p]
        i = j
    missing = ids - set(s)
    if missing:
        raise ValueError(f"detail templates {sorted(missing)} absent from series")
    raise ValueError("detail templates never occur next to each other")


def most_frequent_motif(series: Sequence[int]) -> list[int] | None:
    """Motif with the longest run of adjacent repeats (earliest, then shortest).

    Falls back to the whole series when it is a single block of distinct
    templates; returns None when nothing repeats.
    """
    s = list(series)
    n = len(s)
    best = None  # (run length, -start, -period)
    for p in range(1, n // 2 + 1):
        for i in range(0, n - 2 * p + 1):
            motif = s[i : i + p]
            if any(p % q == 0 and motif == motif[:q] * (p // q) for q in range(1, p)):
                continue
            k = 1
            while s[i + k * p : i + (k + 1) * p] == motif:
                k += 1
            if k >= 2:
                key = (k, -i, -p)
                if best is None or key > best[0]:
                    best = (key, motif)
    if best is not None:
        return best[1]
    if s and len(set(s)) == len(s):
        return s
    return None


def _build_from_seed(series: list[int], seed: list[int], protected=()):
    """Grow one structure from ``seed``.

    Returns (pattern, noise_log, leftover, trace).
    """
    base = list(series)
    noise_log: list[tuple[int, str]] = []
    keep = set(seed) | set(protected)
    # each restart removes one template, so this loop is bounded
    while True:
        pattern = Pattern(list(seed))
        flat: list = list(seed)
        ws: list = list(base)
        restarted = False
        trace = []
        for level in range(len(base) + 1):
            ref = PatternRef(level)
            ws = collapse_runs(ws, flat, ref, partial_edges=True)
            if len(ws) <= 1:
                break
            growth = grow_parent(ws, ref)
            reports = "; ".join(d.describe() for d in growth.disagreements) or "-"
            trace.append(f"level {level}: header {growth.header} footer {growth.footer}; {reports}")
            noise = pick_noise(growth.disagreements, ws, keep | set(pattern.template_ids()))
            if noise is not None:
                noise_log.append((noise, f"level {level}: {reports}"))
                base = [x for x in base if x != noise]
                restarted = True
                break
            if not growth.header and not growth.footer:
                break
            pattern = Pattern(growth.header, pattern, growth.footer)
            flat = list(growth.header) + [ref] + list(growth.footer)
        if not restarted:
            break
    used = set(pattern.template_ids())
    leftover = [x for x in dict.fromkeys(base) if x not in used]
    return pattern, noise_log, leftover, trace


def build_hierarchy(series: Sequence[int], detail_ids: Iterable[int]) -> HierarchyResult:
    """Detect all repeating-pattern structures in a template series."""
    series = [int(x) for x in series]
    detail_ids = set(detail_ids)
    seed = find_seed(series, detail_ids)
    top, noise_log, leftover, trace = _build_from_seed(series, seed, detail_ids)
    structures = [top]
    residue = list(leftover)

    pending = [t for t, _ in noise_log]
    while pending:
        pool = set(pending)
        sub = [x for x in series if x in pool]
        motif = most_frequent_motif(sub)
        if motif is None:
            residue.extend(dict.fromkeys(sub))
            break
        pattern, sub_noise, sub_left, _ = _build_from_seed(sub, motif)
        structures.append(pattern)
        noise_log.extend(sub_noise)
        residue.extend(sub_left)
        pending = [t for t, _ in sub_noise]
    return HierarchyResult(structures, noise_log, residue, trace)


def render_dss(result: HierarchyResult | Pattern | Sequence[Pattern]) -> str:
    if isinstance(result, HierarchyResult):
        patterns = result.structures
    elif isinstance(result, Pattern):
        patterns = [result]
    else:
        patterns = list(result)
    return " / ".join(p.render() for p in patterns)
