"""A bank that understates ES still wins under the joint (VaR, ES) score."""
import numpy as np

from tailrisk import elicit as E

xs = E.score_grid(46)
for k in (1.0, 15.0):
    t = E.counterexample_curves(k=k, x_grid=xs, preset="logistic")
    wins = int(np.sum(t.bank < t.benchmark))
    print(f"k={k:4.0f}: VaR={t.var:.3f} ES={t.es:.3f}; bank beats benchmark at {wins}/46 points; "
          f"bank spread over x {t.spread():.5f}")
    for x, b, m in t.rows()[::9]:
        print(f"   x={x:.3f}  bank={b:.6f}  benchmark={m:.6f}")
print("crossover (logistic):", E.crossover_point())
print("crossover (exp):     ", E.crossover_point(preset="exp"))
