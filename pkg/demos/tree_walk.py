"""Walk the Bruhat-Tits tree over F_3((pi)): neighbours, actions and reduction to a fundamental edge."""

import random

from drinfeld_measures import GF
from drinfeld_measures.tree import (act, boundary_ball, fundamental_edge, lam, neighbors, random_gl2a,
                                    reduce_to_fundamental)

F = GF(3)
rng = random.Random(0)

# q + 1 neighbours
v = lam(F, 0)
print("neighbours of", v)
for w in neighbors(v):
    print("   ", w)

e0 = fundamental_edge(F, 0)
print("e_0 =", e0, " boundary ball:", boundary_ball(e0))

# move e_1 by a random element of GL2(F_3[T]) and bring it back
g = random_gl2a(F, rng, 2)
e = act(g, fundamental_edge(F, 1), "star")
r = reduce_to_fundamental(e)
print("edge", e, "reduces to e_%d" % r.n, "flipped" if r.flip else "")
print("gamma =", r.gamma)
base = fundamental_edge(F, r.n)
print("round trip ok:", act(r.gamma, base.reversed() if r.flip else base, "star") == e)
