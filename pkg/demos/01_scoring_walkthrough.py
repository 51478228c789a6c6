# %% [markdown]
# # Line similarity, one column at a time
#
# Two detail lines from the sample report share most of their layout;
# a detail line and a group total share almost nothing. The 3x5 weight
# map decides how much each kind of match counts.

# %%
import numpy as np

from docstruct.scoring import (
    COLUMN_NAMES,
    DEFAULT_MAP,
    ROW_NAMES,
    adapt_map,
    compare_lines,
    event_counts,
    influential_elements,
    vary_element,
)
from docstruct.testkit import figure3_line

item_a, item_b, total = figure3_line(7), figure3_line(9), figure3_line(8)
print(item_a)
print(item_b)
print(total)

# %%
print("similar pair   ", round(compare_lines(item_a, item_b), 2))
print("dissimilar pair", round(compare_lines(item_a, total), 2))

# %% [markdown]
# Where do the points come from? Count events per (class, kind).

# %%
counts, active = event_counts(item_a, item_b)
print(f"{active} active columns")
for r, row in enumerate(ROW_NAMES):
    print(f"{row:<8}", " ".join(f"{int(v):>4}" for v in counts[r]))
print(" " * 8, " ".join(c[:4] for c in COLUMN_NAMES))

# %% [markdown]
# Sweep every map element through 1..9. The widest swing marks the
# element that matters most for this pair.

# %%
swing = np.array([[np.ptp(vary_element(item_a, item_b, DEFAULT_MAP, r, c)) for c in range(5)]
                  for r in range(3)])
r, c = np.unravel_index(swing.argmax(), swing.shape)
print(f"most influential: {ROW_NAMES[r]} / {COLUMN_NAMES[c]} (swing {swing[r, c]:.1f})")

# %% [markdown]
# Two page headers: elements whose event never happens are zeroed by
# adapt_map, which sharpens the contrast with unrelated lines.

# %%
head1, head2 = figure3_line(1), figure3_line(55)
print((~influential_elements(head1, head2)).sum(), "elements have no effect")
print(adapt_map(head1, head2).astype(int))
