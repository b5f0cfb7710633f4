"""Print the trace polynomials of low powers of D for a few signatures, and
evaluate one of them on random data next to the dense matrix it came from."""

from fuzzyspec.clifford import Signature
from fuzzyspec.ncpoly import generate_trace_functionals, render_text
from fuzzyspec.action import generated_trace, oracle_trace
from fuzzyspec.dirac import random_dirac_data

# d=4 quartics run to hundreds of terms, so only Tr D^2 is printed there
for sig, powers in ((Signature(2, 0), (1, 2)), (Signature(1, 1), (1, 2, 3)), (Signature(1, 3), (1,))):
    for t in powers:
        print(f"--- {sig}, Tr D^{2 * t} / dimV")
        print(render_text(generate_trace_functionals(sig, t)))
        print()

data = random_dirac_data(Signature(1, 3), 2, seed=0)
print("Tr D^4 on random (1,3) data, N=2")
print("  from the polynomial:", generated_trace(data, 4))
print("  from the dense D:   ", oracle_trace(data, 4))
