"""VaR, ES and MS of a normal loss, and how each reacts to a far-out atom."""
from tailrisk import Normal, TranslatedExpMixture, es, ms, var

loss = Normal(-1.5, 1.0)
print("Normal(-1.5, 1) at 97.5%")
print(f"  VaR = {var(loss, 0.975):.4f}")
print(f"  ES  = {es(loss, 0.975):.4f}")
print(f"  MS  = {ms(loss, 0.975):.4f}  (= VaR at 98.75%: {var(loss, 0.98750):.4f})")

# Exp(1) with a small atom at n; the atom weight keeps the mean at 2
print("\nExp(1) plus an atom at n, mean held at 2")
print("        n      ES(mean)    MS(median)")
for n in (10, 100, 1000, 10000):
    d = TranslatedExpMixture(0.0, 1.0, 1.0, n)
    print(f"{n:9d}  {es(d, 0.0):12.6f}  {ms(d, 0.0):12.6f}")
print("ES cannot tell where the large loss sits; MS settles at ln 2.")
