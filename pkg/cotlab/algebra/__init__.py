"""
Algebra package for cotlab.
This package provides exact module theory over Z/nZ: matrices, modules, cube diagrams,
bifunctors and adjunctions, cotorsion pairs, complexes and pushout products.
"""

from cotlab.algebra.ring import (
    Ring,
    Matrix,
    howell_form,
    smith_form,
    solve_linear,
    left_kernel,
)

from cotlab.algebra.modules import (
    FPModule,
    ModuleMorphism,
    ShortExactSequence,
    kernel,
    cokernel,
    image,
    direct_sum,
    pushout,
    pullback,
    is_monic,
    is_epic,
    is_exact_at,
    is_isomorphic,
    realize_extension,
    extension_class,
    homology_at,
)

from cotlab.algebra.diagrams import (
    CubeDiagram,
    cube_colimit,
    cube_limit,
)

from cotlab.algebra.bifunctors import (
    tensor,
    hom_space,
    hom_module,
    ext,
    ext_order,
    ext1_classes,
    MultiAdjunction,
    TensorAdjunction,
    IdentityAdjunction,
    adjunction_from_spec,
    fixed_tensor,
)

from cotlab.algebra.cotorsion import (
    Universe,
    ClassSpec,
    ClassPair,
    enumerate_universe,
    parse_class_spec,
    check_cotorsion_pair,
    check_completeness,
    check_hereditary,
    check_thm_assumptions,
)

from cotlab.algebra.complexes import (
    ChainComplex,
    ChainMap,
    sphere,
    disc,
    homology,
    classify,
    null_homotopy,
    is_contractible,
    lift_functor,
    lift_right_adjoint,
    total_complex,
    sample_complexes,
)

from cotlab.algebra.products import (
    pushout_product,
    pullback_product,
    verify_coker_formula,
    check_split_1var,
    check_nsplit_duality,
    check_hovey_gen,
    check_quillen_1var,
    check_cot_main,
)

from cotlab.algebra.lemmas import LEMMAS, run_lemma
