"""Basel charges written as scenario aggregation over two priors."""
import numpy as np

from tailrisk import scenario as S

rng = np.random.default_rng(0)
history = rng.lognormal(np.log(1e5), 0.2, 60)
direct = S.basel2_charge(history[0], history, 3.0)
agg = S.aggregate(S.basel2_scenarios(history), S.basel2_priors(3.0), 3.0)
print(f"Basel II charge {direct:,.2f}; as a 61-scenario, 2-prior aggregate {agg:,.2f}")

stressed = 1.8 * history
print(f"Basel 2.5 charge {S.basel25_charge(history[0], history, stressed[0], stressed):,.2f}")

cfg = S.parse_scenario_text("""
scale 1.0
scenario calm   es@0.975  dist=normal:mu=0,sigma=1
scenario crisis es@0.975  dist=t:nu=3,loc=0,scale=2
prior 0.7 0.3
prior 0.3 0.7
""")
x = cfg.risk_input()
print("scenario ES values:", np.round(x.values, 4), "charge:", round(cfg.charge(), 4))
