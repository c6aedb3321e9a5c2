"""Expand the discriminant on the first annulus and read off its residues."""

from drinfeld_measures import GF
from drinfeld_measures.expansion import expand_delta, residue, upsilon_closed, xi_closed
from drinfeld_measures.oracle import direct_delta_expand

for q in (2, 3, 4):
    F = GF(q)
    ups = upsilon_closed(F, 0, 12)
    print(f"q={q}  Upsilon_0 = {ups}")
    print(f"      Xi_1      = {xi_closed(F, 1, 12)}")

# the closed form is the residue of z^(q-2) Delta on annulus 0
F = GF(2)
s = expand_delta(F, 0, (-8, 0), 8)
print("residue(z^0 Delta) =", residue(s, 0))

# and the slow double sum over coprime pairs agrees once deg_bound is large enough
slow = direct_delta_expand(F, 0, (-8, 0), 11, 8)
print("oracle coefficient of z^-1 =", slow.coeffs[-1])
