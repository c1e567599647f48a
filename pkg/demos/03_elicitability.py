"""Scores pick out VaR and the mean; ES fails the level-set test."""
from tailrisk import DiscreteDistribution, parse_measure
from tailrisk import elicit as E

law = DiscreteDistribution([0.0, 1.0, 4.0], [0.5, 0.3, 0.2])
res = E.minimize_expected_score(E.QuantileScore(0.5), law)
print(f"pinball 50%: minimising set [{res.lo:.6f}, {res.hi:.6f}]  (flat between atoms 0 and 1)")
res = E.minimize_expected_score(E.QuantileScore(0.8, "cbrt"), law)
print(f"cbrt pinball 80%: minimiser {res.rho:.6f}")
print(f"squared error: minimiser {E.minimize_expected_score(E.SquaredError(), law).rho:.6f} "
      f"vs mean {law.mean():.6f}")

for text in ("var@0.9", "ms@0.9", "es@0.9"):
    bad, w = E.count_cls_violations(parse_measure(text), pairs=200, seed=1)
    print(f"{text:8s} level-set violations in 200 matched pairs: {bad}")
w = E.search_cls_violation(parse_measure("es@0.5"), seed=7)
print(f"ES 50% witness: rho(F1)=rho(F2)={w.rho1:.6f}, mixture at lambda={w.lam} gives {w.rho_mix:.6f}")
