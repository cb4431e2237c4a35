"""How many subspaces does GF(2)^t have?

Tables are indexed by pairs of subspaces, so this number bounds their size.

Run: python demos/subspaces.py
"""

from rwsat.gf2 import enumerate_subspace_bases, galois_number

for t in range(5):
    bases = list(enumerate_subspace_bases(t))
    print(f"t={t}: {galois_number(t):3d} subspaces, e.g. {[tuple(format(b, f'0{t}b')[::-1] for b in s) for s in bases[:3]]}")

print()
print(" t   S(t)              2^(t(t+1)/4)      within bound")
for t in range(8, 21, 2):
    s = galois_number(t)
    print(f"{t:2d}  {s:<17d} {2 ** (t * (t + 1) / 4):<17.4g} {s ** 4 <= 2 ** (t * (t + 1))}")
