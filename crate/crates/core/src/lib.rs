//! Toric fans, primitive relations and Landau–Ginzburg mirror potentials.
//!
//! The pipeline runs fan → primitive relations and positivity → the bundle
//! `P(K_Y ⊕ O_Y)` → Kähler data → corrected superpotential → critical points.

pub mod bundle;
pub mod critical;
pub mod error;
pub mod fan;
pub mod gw;
pub mod io;
pub mod kahler;
pub mod lattice;
pub mod laurent;
mod par;
pub mod superpotential;

pub use error::{Error, Result};
pub use fan::{Fan, HomologyClass, Positivity, PrimitiveRelation};
pub use kahler::{KahlerData, LinearForm, RelativeClass};
pub use laurent::{Coefficient, LaurentPoly};

/// Whether the crate was built with the rayon back end.
pub fn parallel_available() -> bool {
    par::available()
}
