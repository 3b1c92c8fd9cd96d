//! Direct sampling imaging of small dielectric inhomogeneities in two
//! dimensions from far-field data.
//!
//! The crate covers the whole pipeline:
//!
//! * [`scene`]: media, inhomogeneities, direction sets and sampling grids.
//! * [`forward`]: the small-inclusion far-field model, a method-of-moments
//!   solver of the full scattering problem, and additive noise.
//! * [`imaging`]: the classical and modified direct sampling indicators and
//!   the Bessel structure maps they approximate.
//! * [`metrics`]: thresholding, Jaccard scores and peak extraction.
//! * [`config`] and [`runner`]: JSON experiments and the file-producing
//!   pipeline behind the `dsm` command-line tool.
//!
//! ```
//! use dsm_core::prelude::*;
//!
//! let medium = Medium::with_wavelength(0.4)?;
//! let roi = Roi { center: Vec2::ZERO, side: 1.6 };
//! let disk = Inhomogeneity::with_relative_permittivity(Vec2::new(0.3, -0.3), 0.03, 5.0, &medium)?;
//! let scene = Scene::new(medium, vec![disk], roi)?;
//!
//! let dirs = DirectionSet::full_circle(36, true)?;
//! let data = forward::monostatic_sweep(&scene, &dirs)?;
//! let grid = SamplingGrid::square(Vec2::ZERO, 1.6, 50)?;
//! let map = imaging::mdsm_mono(&data, &dirs, &grid, &medium)?;
//! assert!(map.argmax_point().distance(Vec2::new(0.3, -0.3)) < 0.05);
//! # Ok::<(), dsm_core::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod forward;
pub mod imaging;
pub mod io;
pub mod metrics;
pub mod runner;
pub mod scene;
pub mod specialfn;

pub use error::{Error, ErrorClass, Result};

/// The types and modules most programs need.
pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::forward::{self, AcquisitionMode, FarFieldData};
    pub use crate::imaging::{self, IndicatorKind, IndicatorMap};
    pub use crate::metrics;
    pub use crate::scene::{DirectionSet, Inhomogeneity, Medium, Roi, SamplingGrid, Scene, Vec2};
    pub use crate::specialfn::Complex;
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scenes.md")]
    mod scenes {}
    #[doc = include_str!("../../../book/src/forward.md")]
    mod forward {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/monostatic.md")]
    mod monostatic {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
