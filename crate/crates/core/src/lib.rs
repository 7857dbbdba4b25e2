//! Computational toolkit for real quadratic fields: class groups from
//! indefinite binary quadratic forms, fundamental units, cyclic extensions
//! of prime conductor built from Gaussian periods, local norm tests for
//! units, relative norms in the compositum, and transfer maps of finite
//! groups.

pub mod abelian;
pub mod arith;
pub mod compose;
pub mod cyclicext;
pub mod error;
pub mod formclass;
pub mod normtest;
pub mod poly;
pub mod quadfield;
pub mod transfer;

pub use error::{Error, Result};
pub use quadfield::{
    make_field, BasisKind, FundamentalUnit, PrimeAbove, QuadInteger, QuadraticField,
    ResidueFieldElement, SplittingType,
};
