"""Moments of the Delta measure on edges, its L-values, and harmonicity."""

from drinfeld_measures import GF
from drinfeld_measures.measures import build_mu_delta, harmonicity_defect, l_delta, moment
from drinfeld_measures.tree import fundamental_edge, lam

F = GF(3)
mu = build_mu_delta(F, 12)
e0 = fundamental_edge(F, 0)

for j in range(mu.weight - 1):
    m = moment(mu, e0, j)
    print(f"int_(U(e_0)) x^{j} dmu = {m.value}")

# only j = q-1 + lq and q + lq survive, and L(j) = -L(q^2-1-j)
for j in range(1, F.order ** 2 - 1):
    print(f"L(Delta, {j}) = {l_delta(F, j).value}")

print("harmonic at Lambda_0:", all(harmonicity_defect(mu, lam(F, 0), j).is_zero() for j in range(7)))
