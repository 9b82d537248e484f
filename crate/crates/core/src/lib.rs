//! Exact enumeration of hydrogen transitions that emit photons of identical
//! energy.
//!
//! Two jumps `n1 -> n2` and `n3 -> n4` are equifrequent when
//! `1/n2^2 - 1/n1^2 = 1/n4^2 - 1/n3^2`. Every such pair comes from two
//! solutions of one conic `x^2 - y^2 = s z^2`:
//!
//! - [`conic`] generates those solutions from rational chord slopes,
//! - [`pairs`] combines two solutions into a pair and splits any valid pair
//!   back into a canonical witness,
//! - [`chains`] extends this to n-way chains,
//! - [`oracle`] enumerates all groups by brute force for cross-checking,
//! - [`physics`] turns exact differences into eV, Hz and nm.
//!
//! All arithmetic is arbitrary precision ([`exact`]).
//!
//! ```
//! use equifreq_core::conic::{integer_solution, Slope};
//! use equifreq_core::pairs::combine;
//! use num_bigint::{BigInt, BigUint};
//!
//! let s = BigUint::from(6u32);
//! let a = integer_solution(&s, &Slope::new(5, 7).unwrap(), &BigInt::from(5)).unwrap();
//! let b = integer_solution(&s, &Slope::new(1, 1).unwrap(), &BigInt::from(7)).unwrap();
//! let (quad, _) = combine(&a, &b, &BigUint::from(4u32)).unwrap();
//! assert_eq!(quad.to_string(), "(6825700 -> 3464300, 3939404 -> 2813860)");
//! ```

pub mod chains;
pub mod conic;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod pairs;
pub mod physics;

pub use error::{Error, Result};
pub use exact::{ExactRational, Nat};
