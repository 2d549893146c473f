"""Classification and solving of locally checkable labeling problems on Δ-regular trees."""
from .core import (Coloring, HalfEdgeGraph, Lcl, Verdict, build_path, build_star, make_graph, neighborhood,
                   verify_coloring)
from .classify import (BadPathWitness, BadStarWitness, FullnessCertificate, GreedyCertificate, LengthSet,
                       decide_fullness, decide_greediness, find_bad_path_witness, find_bad_star_witness,
                       good_lengths, is_greedy_set, is_l_full, minimal_full_length)
from .treesolve import CompletionQuery, complete, is_extendable
from .toast import Piece, Toast, build_toast, verify_toast
from .solve import greedy_color, toast_color
from .adversary import (AdversaryTranscript, OnlineSolver, builtin_solver, check_invariants, graph_at,
                        run_comp_adversary, run_hc_adversary)
from .homproblems import (SimpleGraph, build_h_delta, has_clique, hom_solve_h_delta, is_homomorphism,
                          lcl_from_graph)
from .formats import (parse_coloring, parse_graph, parse_lcl, serialize_coloring, serialize_graph,
                      serialize_lcl)

__version__ = "0.1.0"
