pub mod body;
pub mod circumradius;
pub mod diameter;
pub mod linalg;
pub mod lp;
pub mod norm;
pub mod polytope;
pub mod real;
pub mod symmetry;
pub mod vector;

pub use body::Body;
pub use norm::{Exponent, GaugeBody, Norm};
pub use polytope::{Arithmetic, BarycentricPoint, Halfspace, Homothet, Simplex, VPolytope};
pub use real::{Real, Q};
pub use vector::Vector;
