//! Exact computations around Ekedahl invariants of finite groups: Bogomolov
//! multipliers, the group L0(Ab), Kontsevich classes with filtration precision,
//! the cohomological map `H^k`, and the invariants `e_i(G)`.

pub mod abelian;
pub mod cache;
pub mod cli;
pub mod cohomology;
pub mod ekedahl;
pub mod formats;
pub mod group;
pub mod hcoh;
pub mod kring;
