//! Exact matrix checks over GF(p): Jordan types by ranks of powers, random
//! elements of U_B, Monte-Carlo Q(P), weighted scaling and locus sampling.

pub mod gfp;
pub mod loci;
pub mod sample;

pub use gfp::{jordan_matrix, jordan_type, rank_sequence, MatrixGFp, DEFAULT_PRIME};
pub use loci::{locus_sample_check, locus_spec, LocusReport, LocusSpec, LocusStatus, Quadric};
pub use sample::{
    free_coordinate_count, mc_image, sample_ub, scaling_invariance_check, verify_mc_oblak, McImage,
    UBLayout, UBSample, Var,
};
