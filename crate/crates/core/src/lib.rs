//! Weight modules over rank-one generalized Weyl algebras with involution.

pub mod expr;
pub mod scalars;
pub mod linalg;
pub mod gwa;
pub mod words;
pub mod skewpoly;
pub mod wmodule;
pub mod presets;
pub mod forms;
pub mod classify;
pub mod suite;
