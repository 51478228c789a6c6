# %% [markdown]
# # From raw report text to records
#
# The bundled 400-line invoice-variance report goes through template
# detection, the structure search and field extraction.

# %%
from collections import Counter

from docstruct import analyze, run_extraction
from docstruct.testkit import figure3_document

lines, truth = figure3_document()
print("\n".join(lines[:16]))

# %%
result = analyze(lines)
for t in result.templates:
    print(f"T{t.id:<2} {t.role:<8} lines={t.line_count:<3} key={t.key_name}")

# %% [markdown]
# The template number series is what the structure search works on.

# %%
ids = [t for _, t in result.series]
print(ids[:65])
print(Counter(ids).most_common(3))

# %%
print(result.dss)
for tid, why in result.hierarchy.noise_log:
    print(f"removed {tid} as noise ({why})")

# %% [markdown]
# One record per detail item; group headers and totals are copied onto
# every record of their group.

# %%
plan, ex = run_extraction(result)
print(len(ex), "records,", ex.skipped, "unmatched lines")
first = ex[0]
for col in ("P_T0_C128", "L1_H_T5_C21", "D_T6_C53", "D_T7_C60", "L1_F_T8_C54", "L2_F_T9_C53"):
    print(f"{col:<12} {first.values[col]}")
