"""Analysis of pentapods with a linear platform: kinematic mapping, direct
kinematics, architectural-singularity and type classification, bond theory,
and self-motion synthesis."""

from .archsing import (ArchVerdict, AssumptionViolationError, PlanarD,
                       classify_arch, nonplanar_D, planar_D,
                       validate_assumptions)
from .bonds import (Bond, NecessityVerdict, find_bonds, necessity_verdict,
                    tangency_rank)
from .dirkin import DKResult, DKSolution, max_real_solutions, solve_dk
from .geom import (INF, ConcyclicResult, MobiusTransform, ProjPoint,
                   concyclic, cross_ratio, mobius_equivalent,
                   mobius_from_pairs)
from .kinmap import (ConstraintHyperplane, Leg, MotionParams, Pentapod,
                     StudyParams, angle_condition, constraint_hyperplane,
                     darboux_condition, displacement, gamma_residuals,
                     lift_study, mannheim_condition, phi_residuals,
                     sphere_condition)
from .polyalg import (GaussRat, exactify, numeric_rank, real_roots, resultant)
from .rearrange import (CubicCorrespondence, PentapodClass, classify_type,
                        planar_vertex, replacement_cubic, sigma)
from .selfmotion import (Duporcq, Reality, SelfMotionDesign, TraceResult,
                         canonical_pentapod, circular_translation_check,
                         duporcq_check, real_legs_from_design, reality,
                         synth_leg_params, trace)

__version__ = "0.1.0"
