//! Hives, Gelfand–Tsetlin patterns and the tropical octahedron recurrence,
//! together with the GUE minor-process machinery used to study random
//! augmented hives numerically.
//!
//! Module map:
//!
//! * [`spectra`]: ordered eigenvalue tuples and the scalar identities they obey.
//! * [`hive_gt`]: hives on the triangle `T`, GT patterns, and the GT → hive embedding.
//! * [`octahedron`]: excavation of the tetrahedron and the max-over-lozenge-tilings form.
//! * [`rmt`]: GUE sampling, the Jacobi eigensolver, the minor process, Haar conjugation.
//! * [`determinantal`]: exact gap moments of minor eigenvalues for a fixed spectrum.
//! * [`harness`]: the seeded experiment driver and the oracle-equivalence battery.
//! * [`textfmt`]: the plain-text file formats read and written by the CLI.

pub mod determinantal;
pub mod error;
pub mod harness;
pub mod hive_gt;
pub mod octahedron;
pub mod quadrature;
pub mod rmt;
pub mod spectra;
pub mod textfmt;

pub use error::{Error, Result};
