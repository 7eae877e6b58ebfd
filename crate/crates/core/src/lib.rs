pub mod algnum;
pub mod corpus;
pub mod count;
pub mod flow;
pub mod format;
pub mod geom;
pub mod gl2;
pub mod moves;
pub mod scalar;
pub mod surface;
pub mod svg;
pub mod unfold;
pub mod windtree;

pub use algnum::AlgNum;
pub use scalar::{PlanarVec, Scalar, Vec2};
pub use surface::{build_surface, EdgeRef, Polygon, TranslationSurface};
