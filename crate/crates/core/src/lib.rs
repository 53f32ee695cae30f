//! Modular reductions of crystallographic string Coxeter groups.
//!
//! A [`Diagram`] describes a basic system of roots; reducing its reflection
//! representation modulo `d` gives a finite matrix group whose polytopality
//! is decided by [`polytopality::verify`] and whose toroidal sections are
//! classified by [`toroids`].

pub mod cli;
pub mod diagram;
pub mod error;
pub mod group;
pub mod matrep;
pub mod matrix;
pub mod patterns;
pub mod polytopality;
pub mod toroids;

pub use diagram::{Branch, CartanMatrix, Diagram, NodeParity, Period};
pub use error::{Error, Result};
pub use matrep::{GramForm, IntMatrixRep, ModMatrixRep, RadicalVector};
pub use matrix::{IntMatrix, ModMatrix};
