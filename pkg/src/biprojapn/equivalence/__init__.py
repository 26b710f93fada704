"""EL-maps, graph transport and equivalence decisions for biprojective pairs."""

from .elmap import (ELMap, ELMatrix, apply_el, graph_set, is_graph_equiv, is_graph_equiv_setwise, mono,
                    z_element, z_subgroup_member)
from .restricted import (PLUS, MINUS, XY, Verdict, decide_equivalence, monomial_witness, preconditions,
                         restricted_equiv, solve_monomial)
from .centralizer import CentralizerReport, centralizer_search, condition_c
from .gaction import (GGroupElement, bfs_orbit, bluher_formula, carlet_orbits, carlet_to_zp, g_action,
                      group_order, orbit_and_stabilizer, rootless_count)
