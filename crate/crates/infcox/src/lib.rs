//! Exact computations on compactifications of the affine plane described by
//! semidegrees at infinity.
//!
//! A [`semidegree::Semidegree`] is given by a degree-wise Puiseux series `phi`
//! and an exponent `r`. It evaluates `f(x, y)` through `y = phi(x) + xi x^r`.
//! A [`surface::Surface`] collects the semidegrees together with a curvette
//! family. That family generates the Cox ring, and [`cox`] enumerates its
//! sections. [`zariski`] tests base-point-freeness at infinity.
//!
//! ```
//! use infcox::field::{FieldConfig, FieldElem};
//! use infcox::semidegree::Semidegree;
//! use infcox::series::{exp, Dwps};
//! use infcox::surface::Surface;
//!
//! let cusp = Semidegree::new(Dwps::monomial(FieldElem::one(), exp(3, 2)), exp(1, 2)).unwrap();
//! let s = Surface::build(vec![cusp], None, FieldConfig::default()).unwrap();
//! assert_eq!(infcox::cox::dimension(&s, &[4]).unwrap(), 5);
//! ```

pub mod branch;
pub mod cox;
pub mod error;
pub mod field;
pub mod io;
pub mod keyforms;
pub mod laurent;
pub mod lp;
pub mod roots;
pub mod semidegree;
pub mod series;
pub mod surface;
pub mod zariski;

pub use error::{Error, Result};

#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    pub mod series {}
    #[doc = include_str!("../../../book/src/semidegrees.md")]
    pub mod semidegrees {}
    #[doc = include_str!("../../../book/src/key_forms.md")]
    pub mod key_forms {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    pub mod surfaces {}
    #[doc = include_str!("../../../book/src/sections.md")]
    pub mod sections {}
    #[doc = include_str!("../../../book/src/zariski.md")]
    pub mod zariski {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
