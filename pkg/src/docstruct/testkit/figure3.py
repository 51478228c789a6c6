"""A 400-line invoice-variance financial report with known structure:
page headers (templates 0-4), group header (5), two-line
detail items (6, 7), invoice total (8) and division total (9).

Lines 1-16 and 49-65 are fixed text; everything else is generated from a
fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .layout import place

__all__ = [
    "FIGURE3_DSS",
    "FIGURE3_ROLES",
    "FIGURE3_COUNTS_200",
    "Item",
    "Group",
    "figure3_document",
    "figure3_line",
    "page_header",
]

FIGURE3_DSS = "[[5, [6, 7], 8], 9] / [0, 1, 2, 3, 4]"
FIGURE3_ROLES = (
    "body", "body", "heading", "heading", "decor",
    "body", "detail", "detail", "body", "body",
)
FIGURE3_COUNTS_200 = (6, 6, 6, 6, 6, 16, 68, 68, 15, 3)

FIRST_PAGE_LINES = 54
PAGE_LINES = 33

_DASH_SPANS = [
    (1, 3), (5, 12), (14, 19), (21, 31), (42, 47), (53, 66), (68, 71), (74, 75),
    (77, 81), (83, 89), (91, 99), (101, 109), (112, 119), (123, 124), (126, 132),
]


def page_header(page: int) -> list[str]:
    return [
        place([(2, "REPORT:"), (10, "MCDRA03"), (44, "INVOICE"), (52, "VARIANCE"),
               (61, "REPORT"), (120, "PAGE:"), (128, str(page))]),
        place([(1, "PROGRAM:"), (10, "ED89510"), (45, "WALGREENVA"), (57, "INV"),
               (61, "SW"), (96, "DATE:"), (102, "09-20-17"), (115, "TIME:"),
               (121, "11:46:33")]),
        place([(53, "UPC/"), (68, "INV"), (91, "CUSTOMER"), (101, "MCLANE")]),
        place([(1, "DIV"), (5, "CUST-NUM"), (14, "STORE"), (21, "INV-VAR-ID"),
               (42, "PO-NUM"), (53, "DESC"), (68, "QTY"), (74, "UM"), (77, "PACK"),
               (83, "PRICE"), (92, "VALUE"), (101, "VALUE"), (112, "VARIANCE"),
               (123, "UM"), (126, "ADJ"), (130, "TYP")]),
        place([(a, "-" * (b - a + 1)) for a, b in _DASH_SPANS]),
    ]


@dataclass
class Item:
    upc: str
    qty: str
    um: str
    pack: str
    price: str
    value1: str
    value2: str
    variance: str
    adj: str
    code: str
    desc: str

    def lines(self) -> tuple[str, str]:
        first = place([
            (53, self.upc), (71, self.qty, "right"), (74, self.um),
            (81, self.pack, "right"), (89, self.price, "right"),
            (100, self.value1, "right"), (108, self.value2, "right"),
            (119, self.variance, "right"), (123, self.um), (126, self.adj),
        ])
        second = place([(53, self.code), (60, self.desc)])
        return first, second

    def values(self) -> list[str]:
        return [self.upc, self.qty, self.um, self.pack, self.price, self.value1,
                self.value2, self.variance, self.um, self.adj, self.code, self.desc]


@dataclass
class Group:
    header: tuple[str, str, str, str, str]
    items: list[Item] = field(default_factory=list)
    total: str = ""

    def header_line(self) -> str:
        div, cust, store, inv, po = self.header
        return place([(1, div), (5, cust), (14, store), (21, inv), (42, po)])

    def total_line(self) -> str:
        return place([(24, "TOTAL"), (30, "INVOICE"), (38, "ADJUSTMENT"),
                      (62, self.total, "right")])


def division_total_line(total: str) -> str:
    return place([(22, "DIVISION"), (31, "TOTAL"), (37, "ADJUSTMENTS"),
                  (62, total, "right")])


_FIXED_ITEMS = {
    7: Item("02610080575", "8", "CT", "10", "63.04", "2.0000", "8.0000", "-6.0000",
            "SHORT", "292235", "NEWPORT MTL BX FSC"),
    9: Item("02720001865", "4", "CT", "10", "54.74", "2.0000", "4.0000", "-2.0000",
            "SHORT", "358416", "PALL MALL MTHL 100 BX FSC"),
    11: Item("02820019830", "1", "CT", "10", "62.44", "1.0000", "", "-1.0000",
             "SHORT", "738708", "VIRG SL SS GOLD MTL BX FS"),
    15: Item("04902264490", "15", "EA", "15", "17.68", "15.0000", "", "-15.0000",
             "SHORT", "065136", "NICE LRG GRADE A EGGS"),
    49: Item("04902295576", "2", "EA", "1", "1.13", "1.1300", "", "0.1200",
             "PRICE", "936484", "NICE RST N SLT MX NUTS SS"),
    53: Item("02590020748", "30", "EA", "15", "10.96", "0.7306", "", "0.0004",
             "PRICE", "542100", "WLGRNS SS GRAPE CGRLO PCH"),
    62: Item("02590020748", "30", "EA", "15", "10.96", "0.7306", "", "0.0004",
             "PRICE", "542100", "WLGRNS SS GRAPE CGRLO PCH"),
}

_WORDS = (
    "NEWPORT MTL BX FSC PALL MALL MTHL VIRG SL SS GOLD NICE LRG GRADE EGGS RST "
    "SLT MX NUTS WLGRNS GRAPE CGRLO PCH CAMEL KING SOFT PACK MARLB LT SNICKERS "
    "BAR KIT KAT MILK CHOC DORITO NACHO CHS LAYS CLASSIC CHIPS PEPSI COLA DIET "
    "REDBULL ENERGY TRIDENT GUM MINT ALTOIDS TIC TAC ORANGE COKE ZERO BTL CAN"
).split()

# Items per invoice group, per division. The first division holds the fixed
# first page (groups at lines 6, 14, ..., 52, 61); the rest are chosen so
# the first 200 lines hold 6 pages, 16 groups, 68 items, 15 invoice totals
# and 3 division totals, and the document ends on a division total at 400.
_DIVISIONS = [
    [3, 2, 3, 1, 4, 4, 1, 1],
    [4, 3, 5, 2],
    [6, 4, 8],
    [19, 3, 5, 2],
    [4, 5, 3, 6, 2],
    [3, 1, 4, 1],
    [6, 5, 2],
    [8, 3],
]


def _amount(rng: random.Random, lo=0.01, hi=999.0) -> str:
    return f"(-{rng.uniform(lo, hi):.2f})"


def _random_item(rng: random.Random) -> Item:
    qty = rng.randint(1, 30)
    pack = rng.choice([1, 10, 12, 15, 24])
    price = rng.uniform(0.5, 70.0)
    adj = rng.choice(["SHORT", "SHORT", "PRICE"])
    v1 = f"{qty * rng.choice([0.5, 1.0]):.4f}"
    v2 = f"{rng.uniform(0, qty):.4f}" if rng.random() < 0.6 else ""
    var = f"-{rng.uniform(0.0001, qty):.4f}" if adj == "SHORT" else f"{rng.uniform(0, 2):.4f}"
    words = []
    while True:
        w = rng.choice(_WORDS)
        if len(" ".join(words + [w])) > 25:
            break
        words.append(w)
        if len(words) >= 3 and rng.random() < 0.3:
            break
    return Item(
        upc=f"{rng.randrange(10**10, 10**11):011d}",
        qty=str(qty),
        um=rng.choice(["CT", "EA"]),
        pack=str(pack),
        price=f"{price:.2f}",
        value1=v1,
        value2=v2,
        variance=var,
        adj=adj,
        code=f"{rng.randrange(10**5, 10**6):06d}",
        desc=" ".join(words),
    )


def _random_header(rng: random.Random) -> tuple[str, str, str, str, str]:
    return (
        "SW",
        f"{rng.randrange(1660000, 1680000):08d}",
        f"{rng.randrange(1000, 10000):06d}",
        f"0130{rng.randrange(600000, 800000)}I",
        f"{rng.randrange(200000, 400000)}",
    )


def _build_divisions(rng: random.Random) -> list[tuple[list[Group], str]]:
    fixed_headers = {
        (0, 0): ("SW", "01667949", "004513", "0130687732I", "337261"),
        (0, 1): ("SW", "01667949", "004513", "0130687734I", "337259"),
        (0, 6): ("SW", "01670224", "007671", "0130712795I", "219546"),
        (0, 7): ("SW", "01670943", "009697", "0130715273I", "215694"),
    }
    fixed_items = {
        (0, 0): [_FIXED_ITEMS[7], _FIXED_ITEMS[9], _FIXED_ITEMS[11]],
        (0, 1): [_FIXED_ITEMS[15]],
        (0, 6): [_FIXED_ITEMS[53]],
        (0, 7): [_FIXED_ITEMS[62]],
    }
    fixed_totals = {(0, 0): "(-550.16)", (0, 5): "(-16.76)", (0, 6): "(-0.01)", (0, 7): "(-0.01)"}
    out = []
    for d, sizes in enumerate(_DIVISIONS):
        groups = []
        for g, n in enumerate(sizes):
            key = (d, g)
            header = fixed_headers.get(key) or _random_header(rng)
            items = list(fixed_items.get(key, []))
            while len(items) < n:
                items.append(_random_item(rng))
            if key == (0, 5):
                items[-1] = _FIXED_ITEMS[49]
            total = fixed_totals.get(key) or _amount(rng)
            groups.append(Group(header, items, total))
        div_total = "(-891.68)" if d == 0 else _amount(rng, 50, 5000)
        out.append((groups, div_total))
    return out


def figure3_document(seed: int = 3):
    """Return ``(lines, truth)`` for the 400-line bundled report.

    ``truth`` is a dict with ``series`` (template id per line), ``dss``,
    ``records`` (one per item, in document order, with its two line
    numbers) and ``page_starts``.
    """
    rng = random.Random(seed)
    divisions = _build_divisions(rng)

    # units: (lines, template ids, record-or-None); a unit never splits
    # across a page break
    units = []
    for groups, div_total in divisions:
        for grp in groups:
            units.append(([grp.header_line()], [5], None))
            for it in grp.items:
                units.append((list(it.lines()), [6, 7], {
                    "group": list(grp.header),
                    "item": it.values(),
                    "invoice_total": grp.total,
                    "division_total": div_total,
                }))
            units.append(([grp.total_line()], [8], None))
        units.append(([division_total_line(div_total)], [9], None))

    lines: list[str] = []
    series: list[int] = []
    page_starts = []
    page = 0
    used = 0
    limit = 0
    records = []
    for unit_lines, ids, rec in units:
        if page == 0 or used + len(unit_lines) > limit:
            page += 1
            page_starts.append(len(lines) + 1)
            lines.extend(page_header(page))
            series.extend([0, 1, 2, 3, 4])
            used = 5
            limit = FIRST_PAGE_LINES if page == 1 else PAGE_LINES
        if rec is not None:
            n = len(lines)
            records.append(dict(rec, lines=[n + 1, n + 2]))
        lines.extend(unit_lines)
        series.extend(ids)
        used += len(unit_lines)

    truth = {
        "series": series,
        "dss": FIGURE3_DSS,
        "records": records,
        "page_starts": page_starts,
    }
    return lines, truth


def figure3_line(number: int) -> str:
    """Line ``number`` (1-based) of the bundled report."""
    lines, _ = figure3_document()
    return lines[number - 1]
