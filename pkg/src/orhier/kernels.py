"""Select the compiled word kernels when built, else the pure-Python ones."""

try:
    from ._kernels import (  # noqa: F401
        cyclic_core,
        free_reduce,
        prefix_function,
        substitute,
        whitehead_graph,
    )

    COMPILED = True
except ImportError:
    from ._kernels_py import (  # noqa: F401
        cyclic_core,
        free_reduce,
        prefix_function,
        substitute,
        whitehead_graph,
    )

    COMPILED = False
