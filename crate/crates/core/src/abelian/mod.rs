//! Exact linear algebra over `Z` and `Z/m`, finitely generated abelian groups and L0(Ab).

mod fg;
mod l0;
mod snf;
pub mod zmod;

pub use fg::{
    canonicalize, in_column_span, kernel_of_presented_hom, pontryagin_dual, AbelianError,
    FGAbelian, PresentedAbelian,
};
pub use l0::{l0_class_of, L0AbElement, L0Label, L0ParseError};
pub use snf::{integer_kernel, smith_normal_form, IntMatrix, Smith};
