"""Products are coordinatewise; cotuples use the pairing combinator p."""

from opcalab import C2, V3, identity, product
from opcalab import certify
from opcalab.certificates import replay
from opcalab.morphisms import hom_set
from opcalab.products import cotuple_morphism

P = product(C2, V3)
print(f"{P.opca.name} has {len(P.opca)} elements, k={P.opca.element(P.opca.k)}")

c = cotuple_morphism(identity(C2), identity(C2))
print("cotuple [id, id] on C2×C2:", c.morphism.named())

sweep = certify.coproduct_sweep(C2, C2, V3)
print(f"{sweep.witness['summary']['cotuples']} cotuples into V3 certified, "
      f"{len(hom_set(product(C2, C2).opca, V3))} maps C2×C2 -> V3 in the couniqueness sweep")
print("replay:", replay(sweep).verdict)
