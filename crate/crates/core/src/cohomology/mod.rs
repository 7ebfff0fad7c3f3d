//! Exact finite-piece linear algebra on the Weil complex: sparse matrices,
//! graded pieces, relative invariants and cohomology tables.

mod kahler;
mod piece;
mod sparse;
mod table;

pub use kahler::{
    check_kahler_package, harmonic_lefschetz_report, realize_sca, relative_basis, HarmonicReport, HhEigen, LefschetzRow,
};
pub use piece::{
    absolute_pieces, assemble_matrix, relative_pieces, relative_projection, relative_total_pieces, slice_monomials,
    GradedPiece, PieceKey,
};
pub use sparse::{exact_rank_kernel, reduce, Reduction, SparseMatrix};
pub use table::{
    cohomology_csv, cohomology_table, koszul_box, single_pair_box, slice_complex, slice_pieces, CohomologyReport,
    CohomologyRow, KoszulBox, MatrixAudit, SliceComplex, TableRanges, CSV_HEADER,
};
