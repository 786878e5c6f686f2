"""Count OPCA structures on every 3-element poset with both search routes."""

import time

from opcalab.finite_models import sweep
from opcalab.poset import all_posets

for p in all_posets(3):
    covers = ",".join(f"{p.elements[i]}<{p.elements[j]}" for i, j in p.covers()) or "antichain"
    start = time.perf_counter()
    brute = sweep(p)
    mid = time.perf_counter()
    pruned = sweep(p, prune=True)
    end = time.perf_counter()
    assert brute.count == pruned.count
    print(f"{covers:10s} structures={brute.count:4d} least element={brute.has_least_element} "
          f"brute {mid - start:.1f}s pruned {end - mid:.1f}s")
