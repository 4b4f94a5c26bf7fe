//! Growth, zeros and phase portraits of sections of Dirichlet, power,
//! Neumann and Kapteyn series.

pub mod bessel;
pub mod family;
pub mod growth;
pub mod height;
pub mod logcomplex;
pub mod par;
pub mod phase;
pub mod series;
pub mod summation;
pub mod window;
pub mod zeros;

pub use family::Family;
pub use logcomplex::LogComplex;
pub use window::WindowBox;
pub use series::{Holomorphic, Section, SeriesSpec};
