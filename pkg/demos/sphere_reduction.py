# Reduce (R^3, x dy - y dx + dz) along J = z to the circle, by hand with the library.
from contactred.action import ActionChart, ReductionInput, check_locally_free, reduce_contact
from contactred.action import verify_contact_action, verify_f_multiplicative, verify_groupoid_action
from contactred.geometry import Chart, DiffForm, SmoothMap
from contactred.groupoid import FiberProduct, GroupoidChart, verify_contact_groupoid
from contactred.jacobi import contact_to_jacobi, hamiltonian_vf
from contactred.symexpr import parse

# the groupoid: (p,q,s) with s = q, t = p and (p,q,s)(q,q2,s2) = (p,q2,s+s2)
G = Chart.make("G", "p q s")
B = Chart.make("B", "t")
GG = Chart.make("GG", "p q s q2 s2")
gpd = GroupoidChart(
    "R3", G, B,
    source=SmoothMap(G, B, ("q",)), target=SmoothMap(G, B, ("p",)),
    unit=SmoothMap(B, G, ("t", "t", "0")), inverse=SmoothMap(G, G, ("q", "p", "-s")),
    fp=FiberProduct(GG, SmoothMap(GG, G, ("p", "q", "s")), SmoothMap(GG, G, ("q", "q2", "s2")),
                    ((1, "p"), (1, "q"), (1, "s"), (2, "q"), (2, "s"))),
    mult=SmoothMap(GG, G, ("p", "q2", "s+s2")),
    theta=DiffForm(G, 1, {("p",): "-exp(-s)", ("q",): 1}), f="exp(-s)")
print("contact groupoid:", verify_contact_groupoid(gpd).status.value)

M = Chart.make("M", "x y z")
theta = DiffForm(M, 1, {("x",): "-y", ("y",): "x", ("z",): 1})
S = contact_to_jacobi(theta).jacobi
print("Reeb field:", S.vector)
print("Lambda:", S.bivector)
print("X_{J*u}:", hamiltonian_vf(S, "u(z)"))     # u(z)d/dz + u'(z)/2 (x d/dx + y d/dy)

# the action scales x,y by exp(-s/2) and moves z to q
MG = Chart.make("MG", "x y z q s")
act = ActionChart(
    "scale", gpd, M, theta, SmoothMap(M, B, ("z",)),
    FiberProduct(MG, SmoothMap(MG, M, ("x", "y", "z")), SmoothMap(MG, G, ("z", "q", "s")),
                 ((1, "x"), (1, "y"), (1, "z"), (2, "q"), (2, "s"))),
    SmoothMap(MG, M, ("exp(-s/2)*x", "exp(-s/2)*y", "q")))
print("groupoid action:", verify_groupoid_action(act).status.value)
print("contact action:", verify_contact_action(act).status.value)

for m in ([1, 0, 0], [0, 0, 0], [0, 0, 4]):
    lf = check_locally_free(act, m)
    print("locally free at", m, lf.free, lf.reasons)

F = "x^2+y^2"
print("F f-multiplicative:", verify_f_multiplicative(act, F).status.value)

# rational circle in the level set z = 0
C = Chart.make("C", "a")
circle = SmoothMap(C, M, ("2*a/(1+a^2)", "(1-a^2)/(1+a^2)", "0"))
red = reduce_contact(act, ReductionInput((0,), parse(F), circle))
print("reduced form:", red.alpha)                 # 2/(1+a^2) da, the circle's -(x dy - y dx)
for name, v in red.certifications.parts:
    print("  ", name, v.status.value)
