"""The downset monad T, a right adjoint built from a cd morphism, and the no-products witness."""

from opcalab import A2, A3, C2, V3, build_T, identity
from opcalab import certify
from opcalab import downsets as ds

T = build_T(V3)
print(f"T(V3) has {len(T.opca)} elements: {list(T.opca.elements)}")

laws = ds.monad_law_check(V3)
print("monad laws up to ≃:", {name: v is not None for name, v in laws.laws.items()})

ra = ds.right_adjoint_construct(identity(C2))
print("right adjoint of id(C2):", ra.g.named(), "tracked by", C2.element(ra.q))

w = ds.noprod_witness(A2, A3)
print(f"A2 × A3: {len(w.alphas)} downsets α, intersection empty: {w.holds}")
cert = certify.noprod(A2, A3)
print(f"certificate {cert.claim}: {cert.verdict}, {len(cert.obligations)} obligation(s)")
