"""Exact-arithmetic experiments on solution-set cones of linear combinatorial problems."""

from .census import HalfSpaceStream, conjecture_probe, restricted_solution_sets, splinter_census
from .classify import Query, QueryClassification, check_prop1, classify_algebraic, classify_geometric
from .encodings import AP, TSP, Instance, RilcopSpec, brute_force_optima, difference_query, get_problem
from .lp import ConeMembershipResult, cone_member, solve_feasibility
from .polyhedra import ConePolyhedron, FaceStructure, facet_normals, intersect, solution_set
from .trees import ExplicitTree, TournamentTree, build_tournament_tree, run_tree, verify_solves

__version__ = "0.1.0"
