//! Operators on the Weil complex, given as finite lists of locally finite
//! mode sums and applied exactly to Fock vectors.

mod builders;
mod kahler;
mod operator;

pub use builders::{
    build_differential_d, build_hh_full, build_koszul_h, build_n2_family, build_s2alpha_family, build_sl2_ehf,
    build_theta_adjoint, build_witt_rep, witt_operator, Differential, GeneratorOp, N2Realization,
};
pub use kahler::{
    adjoint_on_piece, build_dc, curly_form, gram_matrix, paren_form, project_bidegree, split_d1_d2, star, BidegreePart, Dc,
};
pub use operator::{
    super_commutator, Affine, CoeffFn, Composite, FieldOperator, LinearOp, OperatorAlgebraElement, Slot,
    SuperCommutator, TermShape,
};
