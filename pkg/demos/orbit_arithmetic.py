# Torus arithmetic behind prequantizable U(2) orbits.
from contactred.orbit_arith import OrbitSpec, compute_t0, integrality, prequant_report, u2_lens

for text in ["(2,1)/sqrt(5)", "(3,4)/5", "(1,0)", "(1,sqrt(2))"]:
    spec = OrbitSpec.parse(text)
    ok, n = integrality(spec)
    if not ok:
        print(text, "-> ray misses the lattice, no period")
        continue
    t0, T, count = compute_t0(spec)
    print(f"{text:>14}  n={n}  |xi|={spec.norm}  T={T}  t0={t0}  count={count}")

# integer points d = n * primitive; F = -1/sqrt(sum n_i^2) does not see the multiple
for d in [(2, 1), (4, 2), (3, 1), (1, 0, 0)]:
    r = prequant_report(d)
    print(d, r.to_json())

# diag(m, n) reduces to the lens space L(|m-n|, 1)
for m, n in [(2, 1), (3, 1), (5, 2), (1, 0)]:
    print(f"U(2) at diag({m},{n}): L({u2_lens(m, n)},1)")
