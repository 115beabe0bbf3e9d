//! Numerical toolkit for composition operators on Hilbert spaces of
//! Dirichlet series: symbol-class certification, preimage counting via the
//! argument principle, Littlewood-Paley norm identities, and truncated
//! operator matrices with singular-value diagnostics.
//!
//! The whole crate is generic over the floating-point scalar through
//! [`scalar::Real`]; the `*64` aliases below pin `f64`, which is what the
//! command-line tool and the test suites use.

pub mod character;
pub mod counting;
pub mod error;
pub mod factor;
pub mod measure;
pub mod norms;
pub mod preimages;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod space;
pub mod symbol;

pub use character::Character;
pub use error::{Error, Result};
pub use preimages::{Rectangle, Root, RootSet};
pub use scalar::{Real, C};
pub use series::DirichletPolynomial;
pub use space::Space;
pub use symbol::{certify_class, CertificationReport, CertifyParams, ClassTag, Symbol, Verdict};

/// Concrete double-precision aliases.
pub type Complex64 = C<f64>;
pub type Poly64 = DirichletPolynomial<f64>;
pub type Character64 = Character<f64>;
pub type Space64 = Space<f64>;
