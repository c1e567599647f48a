"""Kupiec, traffic light and Christoffersen tests on a simulated VaR series."""
import numpy as np

from tailrisk import backtest as bt
from tailrisk import Normal, var

rng = np.random.default_rng(3)
losses = rng.standard_t(4, 250)
good = np.full(250, var(Normal(0, np.sqrt(2.0)), 0.99))
weak = np.full(250, var(Normal(0, 1.0), 0.99))
for name, f in (("well-sized", good), ("too small", weak)):
    e = bt.exceedances(losses, f, 0.99)
    print(f"{name}: {e.N} exceedances in {e.T} days")
    for rep in (bt.kupiec_pof(e), bt.traffic_light(e), bt.christoffersen_cc(e)):
        print("   ", rep.to_line())

# score comparison: positive mean difference means the model scores worse
d_model = rng.normal(1.0, 1.0, 500)
d_bench = rng.normal(0.9, 1.0, 500)
print(bt.comparative_score_backtest(d_model, d_bench, bt.MODEL_BETTER).to_line())
