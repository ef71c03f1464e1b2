"""Unitriangular groups over F_p: root adjunction and wreath-product embeddings."""

from .embeddings import (
    GeneratorImages,
    IndexScheme,
    VerificationReport,
    extend_hom,
    phi_closed_form,
    phi_fr,
    psi_closed_form,
    psi_lc,
    simple_embedding,
    theta,
    verify_embedding,
)
from .nilpotency import (
    SizeLimit,
    kp_series,
    lower_central_series,
    shield_class,
    subgroup_closure,
    wreath_class_check,
)
from .prime_field import FpElement, InversionOfZero, fp_inv, fp_pow
from .roots import qth_root, qth_root_fr, qth_root_lc, transvection_root, verify_root
from .unitriangular import (
    UTMatrix,
    commutator,
    decompose_transvections,
    element_order,
    format_matrix,
    fr_a_decompose,
    lc_b_decompose,
    parse_matrix,
    transvection,
    ut_inv,
    ut_mul,
    ut_pow,
)
from .wreath import (
    WreathElement,
    build_wreath_embedding,
    equiv_check,
    lemma42,
    tau,
    verify_wreath_conditions,
)

__version__ = "0.1.0"
