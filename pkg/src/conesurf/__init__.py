"""Piecewise-flat surfaces with conical singularities.

Developing maps, SE(2) holonomy, scalar group cohomology, and the
classification of marked flat surfaces by points of
``T^{2g} x CP^{2g+n-3}``.
"""

from .builders import (BuiltModel, ModelSpec, build_model, cube, double_polygon, flat_torus,
                       pillowcase, reference_models, regular_polygon, sphere_marking, tetrahedron)
from .cohomology import (Presentation, coboundary_vector, eval_word, free_group, h1_dimension,
                         h1_representative, is_cocycle, lambda_form, z1_dimension)
from .development import (DevelopedChain, Placement, attach_basepath, develop_path,
                          holonomy_of_loop, loop_concat, loop_inverse, unfold_hinge,
                          vertex_star_loop)
from .errors import *  # noqa: F401,F403
from .geom import (IDENTITY, SE2Element, Sim2Element, isometry_from_edge_pair, se2_compose,
                   se2_fixed_point, se2_inverse, sim2_conjugate_se2)
from .loops import DualLoop, DualStep
from .repvariety import (BetaVector, Marking, Representation, XiPoint, classify_xi,
                         common_fixed_point, conjugate_representation, dm_condition,
                         extract_representation, parse_marking, remap_marking,
                         rescale_representation, serialize_marking, validate_marking,
                         xi_distance, xi_from_representation)
from .surface import (EdgeRef, SurfaceComplex, TriangleChart, cone_angle, euler_characteristic,
                      gauss_bonnet_residual, genus, hinge_subdivide, parse_surface, remap_loop,
                      serialize, singularity_order, total_area)

__version__ = "0.1.0"
