//! Pointing-gesture localisation on a planar workspace.
//!
//! Keypoint frames give an arm ray per hand; the ray is intersected with a
//! calibrated plane, expressed in a workplane frame, smoothed, and finally
//! snapped to a registered target or placement area.

pub mod eval;
pub mod geometry;
pub mod pipeline;
pub mod snap;
pub mod stabilizer;
pub mod stream;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/streams.md")]
    mod streams {}
    #[doc = include_str!("../../../book/src/stabilizer.md")]
    mod stabilizer {}
    #[doc = include_str!("../../../book/src/snapping.md")]
    mod snapping {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
}
