//! Polar codes with generalized fast SC and SCL decoding.
//!
//! Besides plain SC and SCL over the full decoding tree, the decoders in
//! [`fast`] stop at special nodes found by [`classify`]: Rate-0, Rate-1,
//! repetition, single parity check, generalized repetition (G-Rep),
//! generalized parity check (G-PC) and its relaxed variant (RG-PC).
//! [`latency`] counts decoding time steps and [`sim`] estimates BLER over
//! BPSK/AWGN.
//!
//! Decoders are generic over the LLR type; `f64` and `f32` aliases are
//! provided at the crate root.
//!
//! ```
//! use polar_gfd::{classify, construct_code, encode, place_message, FKernel, FastListDecoderF64, NodeSet};
//!
//! # fn main() -> polar_gfd::Result<()> {
//! let code = construct_code(8, 128, 0.7)?;
//! let plan = classify(&code, &NodeSet::RgPc(2).options());
//! let decoder = FastListDecoderF64::new(&code, plan, 8, None, FKernel::MinSum);
//!
//! let u = place_message(&vec![1u8; 128], &code)?;
//! let x = encode(&u, &code)?;
//! let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
//! assert_eq!(decoder.decode(&llrs).u_hat, u);
//! # Ok(())
//! # }
//! ```

pub mod classify;
pub mod codec;
pub mod construction;
pub mod crc;
mod error;
pub mod fast;
pub mod latency;
pub mod list;
mod scalar;
pub mod sc;
pub mod sim;
mod tree;

pub use classify::{
    classify, classify_flags, plan_stats, ClassifyOptions, DecodePlan, NodeKind, NodeLabel,
    NodeSet, PlanStats,
};
pub use codec::{
    combine, encode, extract_message, f_step, g_step, place_message, polar_transform, FKernel,
};
pub use construction::{construct_code, CodeDescriptor, PolarCode};
pub use crc::{crc_attach, crc_check, CrcSpec};
pub use error::{Error, Result};
pub use fast::{FastListDecoder, FastScDecoder};
pub use latency::{cost_sc, cost_scl, latency_table, CostReport, DecoderKind, LatencyTable};
pub use list::{pm_update, scl_decode, ListDecoder, ListOutput, Survivor};
pub use scalar::{hard_decision, Llr};
pub use sc::{sc_decode, ScDecoder, ScOutput};
pub use sim::{run_bler, Algorithm, SimConfig, SimResult, SnrPoint};

pub type ScDecoderF64 = ScDecoder<f64>;
pub type ScDecoderF32 = ScDecoder<f32>;
pub type ListDecoderF64 = ListDecoder<f64>;
pub type ListDecoderF32 = ListDecoder<f32>;
pub type FastScDecoderF64 = FastScDecoder<f64>;
pub type FastScDecoderF32 = FastScDecoder<f32>;
pub type FastListDecoderF64 = FastListDecoder<f64>;
pub type FastListDecoderF32 = FastListDecoder<f32>;
