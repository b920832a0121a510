//! Exact computation of persistence canonical forms.
//!
//! Given a filtered chain complex (built from a simplicial filtration file, a
//! point cloud via the Vietoris-Rips construction, or a matrix file), this
//! crate factors its boundary matrix as `D = B D̲ B⁻¹` with `D̲` an
//! almost-Jordan differential and `B` triangular, entirely in exact
//! arithmetic. From the factorization it extracts creator/destroyer pairs,
//! barcodes, Betti numbers, and the full decomposition into basic filtered
//! complexes, and cross-checks everything against independent brute-force
//! oracles.

pub mod barcode;
pub mod cli;
pub mod complex;
pub mod field;
pub mod ingest;
pub mod matrix;
pub mod oracle;
