# Circle action on S^3 seen through its sphere-bundle groupoid, then the l.c.s. reduction to S^2.
# Uses the built-in corpus entry, which writes the rotation law in stereographic coordinates.
import time

from contactred.action import reduce_lcs, verify_contact_action, verify_groupoid_action
from contactred.corpus import build_manifest, corpus_manifest
from contactred.geometry import check_equal
from contactred.jacobi import verify_lcs, LcsData

m = build_manifest(corpus_manifest("hopf_circle"))
A = m.get("actions", "Hopf")
print("groupoid:", A.groupoid.gamma.coords, "over a point base", A.groupoid.base.coords)
print("theta_M / |phi| =", A.theta)

t = time.time()
print("action axioms:", verify_groupoid_action(A).status.value)
print("contact action law:", verify_contact_action(A).status.value, f"({time.time() - t:.1f}s)")

kind, A, R = m.get("reductions", "red")
red = reduce_lcs(A, R)
print("Omega on the (p,q) chart of the y = 0 hemisphere:", red.Omega)
print("omega:", red.omega)
print("matches the pulled-back d(x dy - y dx + u dv - v du):",
      check_equal(red.Omega, m.get("forms", "Omega_expected")).status.value)
print("l.c.s. conditions:", verify_lcs(LcsData(red.slice.source, red.Omega, red.omega)).status.value)
