//! Exact q-hypergeometric polynomial families, certified real zeros, and
//! checks of interlacing, logarithmic mesh and coefficient identities.
//!
//! Polynomial construction is generic over [`Scalar`]; root isolation and
//! every relation decision run on exact rationals.
//!
//! ```
//! use qzeros::{families, roots, scalar::ratio, QValue};
//!
//! let q = QValue::new(ratio(1, 2)).unwrap();
//! let p = families::little_q_jacobi(1, &ratio(1, 2), &ratio(1, 2), &q).unwrap();
//! assert_eq!(p.coeffs(), &[ratio(1, 1), ratio(-5, 4)]);
//! let rs = roots::isolate_real_roots(&p, &roots::default_eps()).unwrap();
//! assert_eq!(rs.roots[0].exact, Some(ratio(4, 5)));
//! ```

pub mod analysis;
pub mod error;
pub mod families;
pub mod poly;
pub mod qcalc;
pub mod qcore;
pub mod qhyper;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use poly::Poly;
pub use qcore::QValue;
pub use scalar::{ExactScalar, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Exact-coefficient polynomial.
pub type PolyExact = Poly<Rational>;
/// Double precision polynomial, for quick numerics.
pub type PolyF64 = Poly<f64>;
/// Single precision polynomial.
pub type PolyF32 = Poly<f32>;
