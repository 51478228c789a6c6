# %% [markdown]
# # Round trip on generated documents
#
# A random spec fixes nested header/footer levels and, optionally, a
# stray block inserted every few dozen lines. The generator keeps the
# structure string it planted; the analysis should find it again.

# %%
import time

from docstruct import analyze
from docstruct.testkit import gen_document, random_spec

spec = random_spec(42, depth=3, noise=True)
lines, truth = gen_document(spec)
print(len(lines), "lines; planted", truth.dss)
print("\n".join(lines[:12]))

# %%
found = analyze(lines)
print("found  ", found.dss)
for step in found.hierarchy.trace:
    print("  ", step)

# %% [markdown]
# The same check over many seeds.

# %%
t0 = time.perf_counter()
score = {False: [0, 0], True: [0, 0]}
for seed in range(60):
    s = random_spec(seed)
    doc, t = gen_document(s)
    hit = analyze(doc).dss == t.dss
    score[s.noise is not None][0] += hit
    score[s.noise is not None][1] += 1
print("clean", score[False], "noisy", score[True], f"{time.perf_counter() - t0:.1f}s")
