"""Finite ordered partial combinatory algebras: construction, search and certificates."""

from .certificates import Certificate, load_certificates, replay
from .downsets import ApplicativeMorphism, applicative, build_T, delta, projective
from .errors import OpcaError
from .finite_models import enumerate_opcas, sweep
from .fixtures import A2, A3, C2, C3, ONE, V3
from .morphisms import OpcaMorphism, compose, identity, leq, morphism
from .opas import Opas, Opca, find_ks, opca
from .poset import FinPoset
from .products import product
from .terms import bracket_abstract, evaluate, parse_term
from .workspace import Workspace, load_workspace

__all__ = [
    "A2", "A3", "C2", "C3", "ONE", "V3",
    "ApplicativeMorphism", "Certificate", "FinPoset", "Opas", "Opca", "OpcaError", "OpcaMorphism",
    "Workspace", "applicative", "bracket_abstract", "build_T", "compose", "delta", "enumerate_opcas",
    "evaluate", "find_ks", "identity", "leq", "load_certificates", "load_workspace", "morphism", "opca",
    "parse_term", "product", "projective", "replay", "sweep",
]
