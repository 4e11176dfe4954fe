"""Liouville-space machinery: vec-ing, superoperators, and why the free
propagator is unitary in Liouville space.

Operators become vectors by column stacking; the map X -> A X B becomes the
matrix kron(B.T, A).  The commutator superoperator of a Hermitian H is then
itself Hermitian, so exp(i [H, .] t) is unitary on vec'd operators.
"""

import numpy as np

from covlind import commutator_super, matrix_exp, qubit_ops, sandwich_super, unvec, vec

Q = qubit_ops()
rng = np.random.default_rng(1)

print("vec of [[a, c], [b, d]] stacks columns:")
m = np.array([[1.0, 3.0], [2.0, 4.0]])
print(f"  {m.tolist()}  ->  {vec(m).real.tolist()}")

a, x, b = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
lhs = vec(a @ x @ b)
rhs = sandwich_super(a, b).data @ vec(x)
print(f"\nvec(A X B) == kron(B.T, A) vec(X):  max error {np.max(np.abs(lhs - rhs)):.2e}")

h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
h = 0.5 * (h + h.conj().T)
comm = commutator_super(h).data
print(f"\ncommutator superoperator of Hermitian H is Hermitian: "
      f"max |C - C^dag| = {np.max(np.abs(comm - comm.conj().T)):.2e}")

for t in (0.5, 3.0, 20.0):
    u = matrix_exp(1j * t * comm)
    drift = np.max(np.abs(u.conj().T @ u - np.eye(16)))
    print(f"  exp(i [H,.] t) at t = {t:>4}: unitarity drift {drift:.2e}")

print("\nround trip through vec/unvec is exact:")
y = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
print(f"  max |unvec(vec(Y)) - Y| = {np.max(np.abs(unvec(vec(y), 5) - y)):.2e}")
