"""Dirichlet characters, generalized Bernoulli numbers and L-values.

Run: python3 demos/characters_and_l_values.py
"""
import numpy as np

from mzeta import characters_mod, gen_bernoulli, l_at_neg_int, l_line

for chi in characters_mod(5):
    vals = " ".join(f"{complex(np.round(v, 12)):>7}" for v in chi.values)
    print(f"chi_{chi.index} mod 5 {'(principal)' if chi.principal else '           '}: {vals}")

# L(-n, chi) has a closed form through B_{n+1, chi}; the continued L-function agrees.
print("\nn   L(-n) closed form          L(-n) continued")
chi = characters_mod(5)[2]
for n in range(4):
    print(f"{n}   {l_at_neg_int(n, chi):.12f}   {l_line(-n, chi):.12f}")
print(f"\nB_(1,chi) = {gen_bernoulli(1, chi):.12f}")
