"""Two integrals: zeta special values by direct sum and by measure, and Delta rebuilt from its measure."""

from drinfeld_measures import GF, LaurentSeries
from drinfeld_measures.carlitz import pi_poly_to_series
from drinfeld_measures.integration import delta_at, reconstruct_cusp_form
from drinfeld_measures.measures import build_mu_delta
from drinfeld_measures.zeta import zeta_special

F = GF(3)
for j in range(6):
    res = zeta_special(F, j)
    # coefficient of x^-d, a polynomial in pi
    coeffs = [str(pi_poly_to_series(c)) for c in res.direct]
    print(f"zeta(x, {-j}): {coeffs}  sides agree: {res.agree}")

# z = xi in F_4 is far from every element of F_2((pi)), which is what the Riemann sums need
F2 = GF(2)
z = LaurentSeries(GF(4), 0, [2])
mu = build_mu_delta(F2, 20)
rec = reconstruct_cusp_form(mu, z, 8, 6)
print("from the measure: ", rec.value)
print("direct summation: ", delta_at(z, 2, 8, 6))
