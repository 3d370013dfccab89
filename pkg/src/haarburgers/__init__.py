"""Haar wavelet quasilinearization solver for the generalized Burgers equation.

    w_t + w**mu w_x = nu w**delta w_xx,   a <= x <= b

Typical use::

    from haarburgers import make_test_problem, SolverConfig, run
    spec = make_test_problem(3, 0.01, sigma=100.0)
    result = run(spec, SolverConfig(J=3, dt=0.01, T=1.0))
"""

from .errors import (
    CannotCertifyError,
    ConfigError,
    DivergenceError,
    HaarBurgersError,
    NoExactSolutionError,
    NumericalError,
    SingularSystemError,
)
from .fd_oracle import FdGrid, fd_reference, fd_reference_at, fd_solve
from .haar_basis import (
    HaarBasis,
    WaveletIndex,
    build_basis,
    expand,
    haar_eval,
    index_from_ordinal,
    p_eval,
    reconstruct,
)
from .metrics import (
    ConvergenceRow,
    ErrorReport,
    convergence_study,
    error_norms,
    theoretical_bound,
)
from .problems import ProblemSpec, evaluate_exact, make_test_problem, sample_initial
from .stepper import (
    LinearSystem,
    RunResult,
    SolutionState,
    SolverConfig,
    advance,
    assemble_system,
    run,
    solve_dense,
)

__version__ = "0.1.0"
