//! Degree-2 Siegel cusp forms as tables of Fourier coefficients.

mod hecke;
mod index;
mod maass;
mod table;

pub use hecke::{
    coset_decomposition_tp, coset_decomposition_tp2, hecke_eigenvalue, hecke_operator, hecke_tp,
    hecke_tp2, right_cosets, HeckeDoubleCoset, Mat4,
};
pub use index::SiegelIndex;
pub use maass::{
    check_maass_p_space, check_maass_space, maass_lift, required_discriminant, MaassReport,
    Violation,
};
pub use table::{SiegelFourierTable, SCHEMA_VERSION};
