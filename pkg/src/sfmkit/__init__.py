"""Sesquilinear form measures on finite atomic spaces: compression to trace
class, Jordan splitting, four-part positive decompositions and spectral
W-dilations."""

from .decomposition import (DkFamily, PositiveDecomposition, decompose, dk_vectors,
                            split_symmetric_sfm, strictify, uniform_semispectral,
                            verify_decomposition)
from .dilation import (Dilation, apply_F, apply_J, apply_W, associated_decomposition,
                       build_dilation, equivalent, verify_dilation)
from .linalg import (DimensionError, EigenSystem, SignedFrame, SymmetryError,
                     deflate_diagonalize, entrywise_l1, jordan_split, max_modulus_eigenpair,
                     signed_frame, trace_norm)
from .measure import (AtomicSFM, DensityFamily, DiagonalScaling, TraceMeasure, compress,
                      density, entry_total_variation, evaluate, form_density, hd_extension,
                      random_sfm, scaling_weights, symmetric_split)
from .phase import (ArcPartition, arc_moment, c_matrix, coherent_vector,
                    find_negative_probability, phase_sfm, probabilities)

__version__ = "0.1.0"
