"""Topic extraction on a synthetic bag-of-words corpus, end to end.

Equivalent CLI: disjoint-spca compare synthetic:200,50,0 --k 2 --s 4 --eps 0.9 --format csv
Run: python demos/topics_synthetic.py
"""

from disjoint_spca.runner import RunSpec, compare, execute, resolve_dataset, topics
from disjoint_spca.sketch import SketchSpec

ds = resolve_dataset("synthetic:200,50,0")
print(f"{ds.name}: {ds.matrix.shape[0]} documents, {ds.dim} words")

specs = [RunSpec(ds, alg, k=2, s=4, eps=0.9, sketch=SketchSpec("svd", 4)) for alg in
         ("Joint", "DeflateTPower", "DeflateExact")]
for row in compare(specs):
    print(f"{row['algorithm']:14s} variance {row['objective']:.3f}  {row['elapsed_ms']:.0f} ms")

rep = execute(specs[0])
for j, words in enumerate(topics(rep, ds.vocabulary), start=1):
    print(f"topic {j}: " + ", ".join(f"{w} ({v:+.2f})" for w, v in words))
