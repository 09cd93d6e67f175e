//! Lyapunov functionals, coarse Lyapunov classes, Weyl chambers and
//! complementary splittings.

pub mod chambers;
pub mod classes;
pub mod functional;
pub mod lp;
pub mod lyapunov;
mod planar;
pub mod splitting;

pub use functional::{proportionality, FunctionalOrigin, LogValue, LyapunovFunctional, Proportionality};
pub use lyapunov::{lyapunov_data, LyapunovData};
pub use chambers::{anosov_in_every_chamber, weyl_chambers, Chamber, ChamberDecomposition};
pub use classes::{coarse_classes, is_tns, lyapunov_hyperplanes, CoarseClass, Hyperplane, SignOracle, TnsReport};
pub use splitting::{complementary_splitting, fast_stable_element, stable_set, FastStable, Side, Splitting};
