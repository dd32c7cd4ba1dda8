pub mod classify;
pub mod cli;
pub mod counting;
pub mod error;
pub mod germfile;
pub mod gq;
pub mod hypersurface;
pub mod linalg;
pub mod normalform;
pub mod par;
pub mod roots;
pub mod series;

pub use classify::{classify_aut, jet_order, AutStructure, AutVerdict};
pub use counting::{count_table, linearized_contact_check, threshold, CountRow};
pub use error::{Error, Result};
pub use germfile::{parse_germ, to_germ_file, ParseError};
pub use gq::{GaussianRational, Rational};
pub use hypersurface::{Germ, ModelClass, ModelPoly};
pub use normalform::{transform, FormalMap};
pub use series::{HoloSeries2, RealSeries3, Weighting};
