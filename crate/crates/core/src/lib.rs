pub mod cells;
pub mod error;
pub mod grassmann;
pub mod loci;
pub mod orbit;
pub mod partition;
pub mod raising;
pub mod poly;
pub mod ring;
pub mod series;
pub mod strata;

pub use error::Error;
pub use poly::{Poly, PolyRing};
pub use ring::{Rational, YPoly};
