//! A numerical laboratory for Gabor frames with hyperbolic-secant-type
//! windows.
//!
//! The crate verifies, at desk scale, the chain of equivalences behind
//! density criteria for Gabor frames `G(g, Λ×αZ)` when the window is of
//! secant type `g(x) = 1/(e^{ax} + e^{-bx})` (`Re a, Re b > 0`):
//!
//! * [`windows`] — window families, Fourier transforms, amalgam norms, and
//!   the stability constants `C1, C2` of the generator symbol;
//! * [`sequences`] — separated point sets, Beurling densities (line and
//!   plane), shears, and the `λ_n = n + δ_n` enumeration;
//! * [`sis`] — the shift-invariant space `V²(g)`: sampling inequalities for
//!   `Λ + x`, finite-section bound ladders, interpolation, reconstruction;
//! * [`cauchyfock`] — the analytic model space: the canonical product `A`,
//!   generator `G`, Cauchy-transform space with reproducing kernels, the
//!   small Fock space `F_{β,γ}` with exact monomial norms, and the norm
//!   equivalence between the two;
//! * [`cis`] — complete-interpolating-sequence criteria by averaged
//!   deviations, with a finite-section condition-number oracle;
//! * [`gabor`] — frame-bound estimation (direct time-frequency
//!   discretization and the sampling route through `V²(g)`), the density
//!   dichotomy experiment, and the Gaussian-window cross-check;
//! * [`numerics`] — log-domain scalars, adaptive line quadrature, Laurent
//!   coefficient extraction on circles, extremal singular values;
//! * [`acceptance`] — the runnable acceptance suite tying it all together.
//!
//! Everything is deterministic: randomized checks draw from seeded ChaCha
//! streams, and parallel sweeps merge results by key, independent of
//! scheduling.

pub mod acceptance;
pub mod cauchyfock;
pub mod cis;
pub mod gabor;
pub mod numerics;
pub mod parallel;
pub mod sequences;
pub mod sis;
pub mod windows;

pub use num_complex::Complex64;
