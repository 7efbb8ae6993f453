"""The spectrum enumerator as a ground-truth oracle.

Two contrasting instances.  The first fails at p=3 and misses whole
congruence classes forever; the second passes every local test and every
clause except the last one, and its misses march along a quadratic
progression in q, exactly the spinor-exceptional pattern.
"""

from auternary.classify import evaluate
from auternary.coset import normalize_lattice
from auternary.spectrum import predicted_misses, represents_h, spectrum

# --- an odd-local failure -------------------------------------------------
bad = normalize_lattice((2, 0, 0, 2, 0, 18), (1, 1, 0))
v = evaluate(bad)
print("diag(2,2,18), w=(1,1,0):", v.status, "/", v.clause)

spec = spectrum(bad, 2_000)
print("first exceptions:", list(spec.exceptions[:12]))
print("count up to 2000:", len(spec.exceptions))
# the gaps never close: density of misses stays bounded away from zero
half = sum(1 for t in spec.exceptions if t > 1_000)
print("of which in (1000, 2000]:", half)

# --- a spinor-exceptional instance ----------------------------------------
sp = normalize_lattice((10, 8, 0, 10, 2, 10), (1, 1, 0))
v = evaluate(sp)
print()
print("spinor fixture:", v.status, "/", v.clause)

cands = predicted_misses(sp, 15)
print("progression candidates (q <= 15):", cands)
spec = spectrum(sp, 2_500)
for t in cands:
    hit = spec.is_represented(t) if t <= 2_500 else represents_h(sp, t)
    print(f"  t={t}: {'represented' if hit else 'MISS'}")

# only some candidates are genuine misses (q must avoid the determinant),
# but almost universality already fails once infinitely many remain, and
# squares of the surviving q supply them
