//! Construction and certification of conic bundle fourfolds over P^3 with
//! graded-free matrices, computed exactly over prime fields.

pub mod brauer;
pub mod cayley;
pub mod conic;
pub mod construct;
pub mod elim;
pub mod gf;
pub mod hpt;
pub mod linalg;
pub mod localforms;
pub mod pipeline;
pub mod points;
pub mod poly;
pub mod report;
pub mod univariate;

pub use gf::{FieldElement, Fp, GfError};
pub use poly::{Monomial, MultiPoly, PolyError, ProjPoint, Vars};
