"""Exact decompositions of matrices into sums of potent and finite-order matrices."""

from .scalars import CyclotomicField, CycloNum, FloatComplexField, cyclotomic_field
from .matrix import (
    DimensionError,
    KernelBlockForm,
    Matrix,
    SingularMatrixError,
    is_kpotent,
    kernel_block_form,
    matmul,
    matpow,
    order_of,
)
from .certificates import (
    InfeasibleError,
    MultiRootCertificate,
    NonIntegralError,
    NotPotentError,
    RootPart,
    SignedCertificate,
    TraceCertificate,
    extract_certificate_from_potent,
    find_certificate,
    verify_multiroot,
)
from .finite import (
    Decomposition,
    HypothesisError,
    PostconditionError,
    Summand,
    decompose_counted_general,
    decompose_finite_order,
    decompose_linear_combination,
    decompose_rank1,
    decompose_theorem1,
    decompose_theorem4,
    fillmore_diagonalize,
    identity_decomposition,
    lemma1_pair,
    lemma2_split,
    lemma3_split,
    lemma4_block,
    order_from_lemma4,
    order_from_potent,
    potent_from_order,
)
from .colfinite import LazyMatrix, decompose14, truncate

__version__ = "0.1.0"
