from ._core import (
    CubeFunction,
    FormatError,
    ProductDistribution,
    check_folklore_lemma,
    check_stability_bound,
    degree_for_accuracy,
    fourier,
    is_submodular,
    release_degree,
    stability,
    stability_definitional,
)

__version__ = "0.1.0"
