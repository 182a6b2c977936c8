//! Gram matrices of exponential systems on segment unions and the
//! finite-section machinery used to certify their Riesz bounds.
//!
//! For a finite family `{e^{2πiλₙx}}` on a domain `D`, the extreme
//! eigenvalues of the Gram matrix `G[m][n] = ⟨e_{λₘ}, e_{λₙ}⟩_{L²(D)}` are
//! the optimal Riesz constants of that family. Growing the index window
//! yields nested principal submatrices, so the smallest eigenvalue can only
//! decrease and the largest only increase.

mod bounds;
mod eigen;
mod gram;
mod inner_product;
mod transport;

pub use bounds::{frame_bounds, FrameBoundEstimate, FrameBoundPoint};
pub use eigen::{hermitian_eigenvalues, hermitian_eigenvalues_dense};
pub use gram::{gram, read_matrix_dump, GramMatrix};
pub use inner_product::{pair_inner_product, segment_integral};
pub use transport::{
    complement_frequencies, dilation_check, modulation_defect, transport_phases, transported_gram,
    transported_gram_check, DilationReport, TransportReport,
};

/// Default windows `N` for frame-bound series.
pub const DEFAULT_SCHEDULE: [usize; 4] = [16, 32, 64, 128];
