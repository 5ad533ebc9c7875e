"""polyvec: exact graded polyvector calculus.

A sparse rational engine for the graded-commutative algebra of formal
polyvector fields and vertical forms, the Schouten and vertical brackets
with an exact contracting homotopy, the curvature-driven flattening
recursion, the operad of graphs with its complex, the evaluation of
graphs as polydifferential operators, and finite-arity homotopy-Lie
machinery up to the globalization of graph-backed automorphisms.
"""

from .algebra import (ETA, PSI, X, Y, GradedElement, TruncationPolicy,
                      derive, multiply, parse, serialize,
                      substitute_linear)
from .complexes import (de_rham, delta, delta_star, homotopy_defect,
                        jacobi_defect, schouten_bracket, sigma,
                        taylor_lift, vertical_bracket)
from .fedosov import (ConnectionJet, FedosovData, NotCocycleError,
                      check_lemma4, constant_connection, curvature,
                      differential_D, flat_connection, flatness_residual,
                      invert_exact, nabla, parse_connection,
                      random_connection_jet, serialize_connection, solve_A,
                      tau)
from .graphs import (Graph, GraphSum, canonical, compose, differential,
                     gc2_basis, lie_bracket, mc_graph, parse_graph,
                     symmetrize, tetrahedron, text_form, unit_graph)
from .action import (ConditionReport, check_conditions,
                     operad_morphism_check, phi, phi_directed_expansion)
from .linfty import (CECochain, DgLieContext, LInftyMorphism,
                     MaurerCartanElement, TerminationError, ce_differential,
                     check_morphism, compose_morphisms, exponential,
                     graph_cochain, identity_morphism, nr_bracket, push_mc,
                     schouten_cochain, twist, vertical_cochain)
from .globalize import (ConditionGateError, condition_gate, extend_vertical,
                        globalize, step2_invariance_report,
                        verify_globalized)
from .scalars import QQ, T_PARAM, TScalar

__version__ = "0.1.0"
