//! Decoders that stop at special nodes of a [`DecodePlan`](crate::DecodePlan).

mod list;
mod sc;

pub use list::{
    grep_offset, scl_extend_gpc, scl_extend_grep, scl_extend_plan, scl_extend_rate0,
    scl_extend_rate1, scl_extend_rep, scl_extend_spc, FastListDecoder, NodeChoice, NodeHead,
};
pub use sc::{
    decode_gpc_sc, decode_grep_sc, decode_rgpc_sc, grep_fold, wagner_decode, FastScDecoder,
};
