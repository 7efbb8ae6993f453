"""Classifier vs enumeration on a random corpus.

The dichotomy is falsifiable on any single instance: classify it by local
data alone, then enumerate the spectrum and look at the top half of the
window.  AlmostUniversal means the exceptions must dry up; NotAlmostUniversal
means they keep coming.  Disagreement would be a bug (or a very large
determinant needing a bigger window, see the verify subcommand's --bound).
"""

from collections import Counter

from auternary.classify import ALMOST_UNIVERSAL, evaluate
from auternary.generate import generate_instances
from auternary.spectrum import spectrum

BOUND = 4_000

corpus = generate_instances(15, seed=11, entry_bound=6)
tally = Counter()
for inst in corpus:
    verdict = evaluate(inst)
    exc = spectrum(inst, BOUND).exceptions
    top = [t for t in exc if t > BOUND // 2]
    au = verdict.status == ALMOST_UNIVERSAL
    ok = (not top) if au else bool(top)
    tally[verdict.status, bool(ok)] += 1
    mark = "ok " if ok else "?? "
    print(
        f"{mark}{verdict.status:20s} clause={verdict.clause or '-':10s}"
        f" exceptions={len(exc):4d} top-half={len(top):4d}"
        f"  gram={inst.gram.entries} w={inst.w}"
    )

print()
for (status, ok), n in sorted(tally.items()):
    print(f"{status:22s} {'consistent' if ok else 'MISMATCH'}: {n}")
