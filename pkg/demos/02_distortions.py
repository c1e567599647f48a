"""Every measure here is a Choquet integral under some distortion h."""
from tailrisk import Normal, StudentT, choquet
from tailrisk import measures as M
from tailrisk.errors import NonIntegrableError

loss = Normal(0.0, 1.0)
for label, h in [("mean", M.identity()), ("VaR 99%", M.var_indicator(0.99)),
                 ("ES 99%", M.es_ramp(0.99)), ("MS 99%", M.ms_indicator(0.99)),
                 ("MINMAXVAR(0.5)", M.minmaxvar(0.5))]:
    print(f"{label:15s} auto={choquet(loss, h):9.5f}  quad={choquet(loss, h, method='quad'):9.5f}")

# heavy tails: ES needs a finite mean, MS does not
cauchy = StudentT(1.0)
print(f"\nCauchy MS 99% = {M.ms(cauchy, 0.99):.3f}")
try:
    M.es(cauchy, 0.99)
except NonIntegrableError as exc:
    print(f"Cauchy ES 99%: {exc}")
