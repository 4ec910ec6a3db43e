//! Reconstruction of eigenfunctions of the q-ary Hamming graph `H(n, q)`
//! from their values on a Hamming sphere.
//!
//! An eigenfunction with eigenvalue `lambda_h = (q-1) n - q h` is determined
//! on the ball `B_d` by its values on the sphere `W_d` (`d <= h`), and
//! everywhere by its values on `W_h`, whenever a finite set of exact
//! nondegeneracy sums is nonzero. The crate provides:
//!
//! * [`scheme`]: words, distances, spheres, faces and full-support sets;
//! * [`krawtchouk`]: exact Krawtchouk values and hypercube eigenvalues;
//! * [`spectral`]: vertex functions, characters, the Fourier transform on
//!   `Z_q^n`, distance operators and eigenspace projection;
//! * [`local_dist`]: local distributions in faces and their transfer between
//!   orthogonal faces;
//! * [`coeffs`]: exact transfer coefficients and the condition checker;
//! * [`recon`]: the sphere-to-ball and sphere-to-everything algorithms;
//! * [`format`]: the JSON form of vertex functions and sphere data.
//!
//! ```
//! use hamrecon::recon::{reconstruct_full, SphereData};
//! use hamrecon::scheme::SchemeParams;
//! use hamrecon::spectral::random_eigenfunction;
//!
//! let params = SchemeParams::new(3, 4).unwrap();
//! let f = random_eigenfunction(&params, 2, 7).unwrap();
//! let sphere = SphereData::from_function(&f, 2).unwrap();
//! let g = reconstruct_full(&sphere).unwrap();
//! let err = f.values().iter().zip(g.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
//! assert!(err < 1e-8);
//! ```

pub mod coeffs;
pub mod error;
pub mod format;
pub mod krawtchouk;
pub mod local_dist;
pub mod recon;
pub mod scheme;
pub mod spectral;

pub use error::{Error, Result};
pub use scheme::{IndexSet, SchemeParams, Word};
pub use spectral::VertexFunction;
