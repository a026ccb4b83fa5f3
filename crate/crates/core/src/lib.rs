pub mod error;
pub mod ordinal;
pub mod provenance;
pub mod radical;
pub mod spaces;
pub mod spectral;
pub mod prufer;
pub mod correspondences;
pub mod document;
pub mod oracle;
pub mod sample;
pub mod verify;
