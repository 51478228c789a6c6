"""Synthetic fixed-column documents with known structure.

A :class:`StructureSpec` describes line templates (fields at fixed columns),
a nested repeating pattern over those templates and an optional noise block
(think page header) injected every few lines. :func:`gen_document` renders
it and returns the ground truth alongside: the template id of every line,
the expected structure string and one record per detail occurrence.

Template ids in the truth are relabelled by first appearance, which is the
order in which template detection discovers them.
"""

from __future__ import annotations

import random
import string
from dataclasses import asdict, dataclass, field

from .layout import place
from .oracles import oracle_score

__all__ = [
    "FieldSpec",
    "TemplateSpec",
    "PatternSpec",
    "NoiseSpec",
    "StructureSpec",
    "GroundTruth",
    "gen_document",
    "random_spec",
    "single_line_spec",
]

_KINDS = ("lit", "num", "alpha", "amount")
_DEFAULT_MAP = [[3, 3, 5, 5, 1], [3, 5, 7, 5, 1], [8, 6, 9, 5, 1]]
MAX_SIMILARITY = 30.0


@dataclass
class FieldSpec:
    col: int  # 1-based start column
    kind: str  # lit | num | alpha | amount
    width: int
    text: str = ""  # literal text for kind "lit"

    def render(self, rng: random.Random) -> str:
        if self.kind == "lit":
            return self.text
        if self.kind == "num":
            return "".join(rng.choice(string.digits) for _ in range(self.width))
        if self.kind == "alpha":
            return "".join(rng.choice(string.ascii_uppercase) for _ in range(self.width))
        if self.kind == "amount":
            digits = "".join(rng.choice(string.digits) for _ in range(self.width - 3))
            return f"{digits}.{rng.randrange(100):02d}"
        raise ValueError(f"unknown field kind {self.kind!r}")


@dataclass
class TemplateSpec:
    fields: list[FieldSpec]

    def render(self, rng: random.Random) -> tuple[str, list[str]]:
        vals = [f.render(rng) for f in self.fields]
        return place([(f.col, v) for f, v in zip(self.fields, vals)]), vals


@dataclass
class PatternSpec:
    header: list[int]
    child: PatternSpec | None = None
    footer: list[int] = field(default_factory=list)
    repeat: tuple[int, int] = (1, 3)  # run length range inside the parent

    def depth(self) -> int:
        return 1 if self.child is None else 1 + self.child.depth()

    def template_ids(self) -> list[int]:
        ids = list(self.header) + list(self.footer)
        if self.child is not None:
            ids += self.child.template_ids()
        return ids

    def render(self, relabel=None) -> str:
        f = relabel or (lambda t: t)
        parts = [str(f(t)) for t in self.header]
        if self.child is not None:
            parts.append(self.child.render(relabel))
        parts += [str(f(t)) for t in self.footer]
        return "[" + ", ".join(parts) + "]"


@dataclass
class NoiseSpec:
    templates: list[int]
    period: int  # lines between injections (at the next unit boundary)


@dataclass
class StructureSpec:
    templates: list[TemplateSpec]
    hierarchy: PatternSpec
    noise: NoiseSpec | None = None
    seed: int = 0

    def validate(self):
        n = len(self.templates)
        used = self.hierarchy.template_ids() + (self.noise.templates if self.noise else [])
        if not used:
            raise ValueError("spec uses no templates")
        if any(not 0 <= t < n for t in used):
            raise ValueError("spec references an undefined template")
        if len(set(used)) != len(used):
            raise ValueError("a template may appear only once in a structure spec")
        p = self.hierarchy
        while p is not None:
            lo, hi = p.repeat
            if not 1 <= lo <= hi:
                raise ValueError("repeat counts must satisfy 1 <= lo <= hi")
            if p.child is None and not p.header:
                raise ValueError("detail pattern needs at least one template")
            if p.child is not None and not (p.header or p.footer):
                raise ValueError("every enclosing level needs a header or footer")
            p = p.child
        if self.noise is not None and (not self.noise.templates or self.noise.period < 1):
            raise ValueError("noise block needs templates and a positive period")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> StructureSpec:
        def pattern(pd):
            if pd is None:
                return None
            return PatternSpec(
                list(pd["header"]), pattern(pd.get("child")), list(pd.get("footer", [])),
                tuple(pd.get("repeat", (1, 3))),
            )

        templates = [TemplateSpec([FieldSpec(**f) for f in t["fields"]]) for t in d["templates"]]
        noise = NoiseSpec(**d["noise"]) if d.get("noise") else None
        spec = cls(templates, pattern(d["hierarchy"]), noise, int(d.get("seed", 0)))
        spec.validate()
        return spec


@dataclass
class GroundTruth:
    series: list[int]  # template id per line, relabelled
    dss: str
    records: list[dict]  # {"detail": [...], "context": [...], "lines": [...]}
    detail_ids: list[int]
    noise_blocks: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


# -- document rendering ------------------------------------------------------


@dataclass
class _Instance:
    pattern: PatternSpec
    children: list[_Instance]


def _instances(p: PatternSpec, rng: random.Random) -> _Instance:
    if p.child is None:
        return _Instance(p, [])
    n = rng.randint(*p.child.repeat)
    return _Instance(p, [_instances(p.child, rng) for _ in range(n)])


def _by_level(roots: list[_Instance]):
    out: dict[int, list[_Instance]] = {}
    todo = [(r, 0) for r in roots]
    while todo:
        inst, d = todo.pop()
        out.setdefault(d, []).append(inst)
        todo.extend((c, d + 1) for c in inst.children)
    return out


def _force_repeats(roots: list[_Instance], rng: random.Random):
    """Make sure every enclosing level repeats its child at least once.

    Without a run of >= 2 somewhere, a level cannot be told apart from the
    one below it.
    """
    levels = _by_level(roots)
    for d in sorted(levels):
        insts = [i for i in levels[d] if i.pattern.child is not None]
        if insts and all(len(i.children) < 2 for i in insts):
            target = insts[0]
            target.children.append(_instances(target.pattern.child, rng))


def _units(inst: _Instance, spec: StructureSpec, rng: random.Random, ctx: list[str]):
    """Yield (lines, template ids, record or None) units in document order."""
    p = inst.pattern
    head = [(t,) + spec.templates[t].render(rng) for t in p.header]
    foot = [(t,) + spec.templates[t].render(rng) for t in p.footer]
    if p.child is None:
        detail = [v for _, _, vals in head for v in vals]
        yield [ln for _, ln, _ in head], [t for t, _, _ in head], {
            "detail": detail, "context": list(ctx),
        }
        return
    inner = ctx + [v for _, _, vals in head + foot for v in vals if v]
    for t, ln, _ in head:
        yield [ln], [t], None
    for child in inst.children:
        yield from _units(child, spec, rng, inner)
    for t, ln, _ in foot:
        yield [ln], [t], None


def _render(spec: StructureSpec, rng: random.Random, min_lines: int | None):
    top = spec.hierarchy
    roots = [_instances(top, rng) for _ in range(rng.randint(*top.repeat))]
    _force_repeats(roots, rng)

    def units_of(rs):
        for r in rs:
            yield from _units(r, spec, rng, [])

    units = list(units_of(roots))
    if spec.noise is not None:
        # a block seen only once or twice cannot be told apart from structure
        min_lines = max(min_lines or 0, 3 * spec.noise.period + 1)
    while min_lines is not None and sum(len(u[0]) for u in units) < min_lines:
        more = [_instances(top, rng)]
        roots.extend(more)
        units.extend(units_of(more))

    lines: list[str] = []
    series: list[int] = []
    records: list[dict] = []
    noise = spec.noise
    since = None
    blocks = 0
    for u_lines, u_ids, rec in units:
        if noise is not None and (since is None or since >= noise.period):
            for t in noise.templates:
                lines.append(spec.templates[t].render(rng)[0])
                series.append(t)
            blocks += 1
            since = 0
        if rec is not None:
            rec = dict(rec, lines=list(range(len(lines) + 1, len(lines) + len(u_lines) + 1)))
            records.append(rec)
        lines.extend(u_lines)
        series.extend(u_ids)
        since = (since or 0) + len(u_lines)
    return lines, series, records, blocks


def gen_document(spec: StructureSpec, lines: int | None = None):
    """Render ``spec`` and return ``(lines, GroundTruth)``.

    ``lines`` is a minimum length: whole top-level instances are added
    until the document reaches it.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    text, series, records, blocks = _render(spec, rng, lines)

    order: dict[int, int] = {}
    for t in series:
        order.setdefault(t, len(order))
    relabel = order.__getitem__
    dss = spec.hierarchy.render(relabel)
    if blocks:
        dss += " / [" + ", ".join(str(relabel(t)) for t in spec.noise.templates) + "]"
    truth = GroundTruth(
        series=[relabel(t) for t in series],
        dss=dss,
        records=records,
        detail_ids=sorted(relabel(t) for t in _detail(spec.hierarchy).header),
        noise_blocks=blocks,
    )
    return text, truth


def _detail(p: PatternSpec) -> PatternSpec:
    while p.child is not None:
        p = p.child
    return p


# -- random specs --------------------------------------------------------------


def _random_template(rng: random.Random) -> TemplateSpec:
    nf = rng.randint(2, 4)
    col = rng.randint(1, 50)
    fields = []
    for k in range(nf):
        kind = rng.choice(_KINDS)
        if k == nf - 1 and all(f.kind == "lit" for f in fields) and kind == "lit":
            kind = rng.choice(_KINDS[1:])
        if kind == "lit":
            text = "".join(rng.choice(string.ascii_uppercase) for _ in range(rng.randint(3, 8)))
            if rng.random() < 0.4:
                text += rng.choice(":#")
            fields.append(FieldSpec(col, kind, len(text), text))
        else:
            width = rng.randint(4 if kind == "amount" else 3, 10)
            fields.append(FieldSpec(col, kind, width))
        col += fields[-1].width + rng.randint(2, 8)
    return TemplateSpec(fields)


def _max_cross_score(a: TemplateSpec, b: TemplateSpec, rng: random.Random) -> float:
    la = [a.render(rng)[0] for _ in range(3)]
    lb = [b.render(rng)[0] for _ in range(3)]
    return max(oracle_score(x, y, _DEFAULT_MAP) for x in la for y in lb)


def _dissimilar_templates(n: int, rng: random.Random, attempts: int = 500) -> list[TemplateSpec]:
    out: list[TemplateSpec] = []
    for _ in range(attempts):
        if len(out) == n:
            break
        cand = _random_template(rng)
        if all(_max_cross_score(cand, t, rng) < MAX_SIMILARITY for t in out):
            out.append(cand)
    if len(out) < n:
        raise RuntimeError(f"could not draw {n} mutually dissimilar templates")
    return out


def random_spec(
    seed: int,
    depth: int | None = None,
    noise: bool | None = None,
    max_templates: int = 12,
) -> StructureSpec:
    """Random valid spec: ``depth`` levels (1..4), optional noise block.

    Noise needs at least two levels; with a bare detail run there is no
    structure for the noise to interrupt.
    """
    rng = random.Random(seed)
    depth = depth if depth is not None else rng.randint(1, 4)
    if not 1 <= depth <= 4:
        raise ValueError("depth must be within 1..4")
    noise = (rng.random() < 0.5) if noise is None else noise
    noise = noise and depth >= 2

    ids = iter(range(max_templates))
    pattern = PatternSpec([next(ids) for _ in range(rng.randint(1, 2))], repeat=(1, 4))
    for _ in range(depth - 1):
        sides = rng.choice([(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (1, 1)])
        header = [next(ids) for _ in range(sides[0])]
        footer = [next(ids) for _ in range(sides[1])]
        pattern = PatternSpec(header, pattern, footer, repeat=(1, 3))
    pattern.repeat = (2, 4) if depth > 1 else (4, 12)
    used = len(pattern.template_ids())
    noise_spec = None
    if noise:
        k = min(rng.randint(2, 3), max_templates - used)
        if k >= 1:
            noise_spec = NoiseSpec(list(range(used, used + k)), rng.randint(20, 40))
            used += k
    templates = _dissimilar_templates(used, rng)
    spec = StructureSpec(templates, pattern, noise_spec, seed)
    spec.validate()
    return spec


def single_line_spec(seed: int = 0) -> StructureSpec:
    rng = random.Random(seed)
    return StructureSpec(_dissimilar_templates(1, rng), PatternSpec([0], repeat=(1, 1)), None, seed)
