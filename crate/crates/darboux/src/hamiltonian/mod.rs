//! The two explicit Hamiltonian constructions: a compactly supported
//! translation of a box, and the shear that displaces half of a
//! squares-and-corridor model.

mod cover;
mod displacement;
mod flow;

pub use cover::{displaceable_cover_scenario, DisplaceableCover, RegionCheck};
pub use displacement::{build_displacement, DisplacementGadget, DisplacementReport, Ridge, Shear};
pub use flow::{area_distortion_check, translate_flow, BumpProfile, TranslationField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HamError {
    #[error("bump profile needs 0 < inner < outer, got {0} and {1}")]
    BadProfile(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("U disconnected risk: ν = {0} is not below δ/2 for δ = {1}")]
    NuTooLarge(String, String),
    #[error("invalid gadget: {0}")]
    BadGadget(String),
    #[error(transparent)]
    Transport(#[from] crate::transport::TransportError),
}
