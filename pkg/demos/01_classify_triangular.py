"""Walk one instance end to end: the sum of three triangular numbers.

T(x) = x(x+1)/2, and H(x,y,z) = T(x) + T(y) + T(z).  Doubling the variables
turns H into a coset problem for the lattice with Gram matrix diag(4,4,4),
which is exactly what normalize_polynomial does under the hood.
"""

from auternary.classify import evaluate
from auternary.coset import h_value, normalize_polynomial
from auternary.spectrum import spectrum

# 2*H = x^2+x + y^2+y + z^2+z, so as an integer-matrix problem we feed in
# the doubled form: quadratic part diag(4,4,4) on the upper triangle,
# linear coefficients (4,4,4).
inst = normalize_polynomial((4, 0, 0, 4, 0, 4), (4, 4, 4))

print("gram      ", inst.gram.entries)
print("w         ", inst.w, "(so nu = w/2 lives in the half-integer coset)")
print("alpha     ", inst.alpha, "  norm of the coset complement is 2^alpha")
print("beta, eps ", inst.beta, inst.epsilon)
print("lambda    ", inst.lam)
print("det, rad' ", inst.det_n, inst.rad_odd)

# sanity: the first few H-values really are triangular number sums
print("H at small points:", [h_value(inst, (x, 0, 0)) for x in range(5)])

verdict = evaluate(inst)
print()
print("status:", verdict.status, "via clause", verdict.clause)
for entry in verdict.trace:
    print(f"  {entry.predicate} [{entry.inputs}] -> {entry.value}")

# Gauss: every nonnegative integer is a sum of three triangular numbers,
# so the exception list must come back empty.
spec = spectrum(inst, 10_000)
print()
print("exceptions up to 10^4:", list(spec.exceptions) or "none")
