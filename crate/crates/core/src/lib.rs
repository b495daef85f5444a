//! Construction, verification, optimization and HDL emission of memory
//! error-correction codes that repair single errors and adjacent bursts of
//! two or three bits (SEC-DAEC and SEC-DAEC-TAEC).
//!
//! The crate ships a verified built-in (23,16) triple-adjacent code and a
//! constraint-driven search that builds codes for other sizes, such as
//! (40,32) and (74,64). Around a code it provides:
//!
//! * [`codec`] — a table-driven encoder/decoder with provably unambiguous
//!   correction,
//! * [`constraints`] — the column-uniqueness checks a matrix must satisfy
//!   per capability level,
//! * [`verify`] — exhaustive fault injection demonstrating zero
//!   miscorrection over the correctable classes,
//! * [`xor`] — extraction and common-subexpression elimination of the
//!   underlying XOR networks, with gate-count and depth metrics,
//! * [`hdl`] / [`netlist`] — emission of combinational Verilog and a tiny
//!   interpreter used to prove the emitted text equivalent to the codec.
//!
//! All value types are immutable once constructed and freely shareable
//! across threads.

pub mod bits;
pub mod code;
pub mod codec;
pub mod constraints;
pub mod error;
pub mod hdl;
pub mod matrix;
pub mod netlist;
pub mod search;
pub mod span;
pub mod verify;
pub mod xor;

pub use bits::BitVec;
pub use code::{BitRole, Capability, CodeFile, CodeSpec};
pub use codec::{Codec, DecodeKind, DecodeOutcome, SyndromeTable};
pub use constraints::{analyze, check_daec, check_sec, check_taec, ConstraintReport};
pub use error::{
    CodeSpecError, CodecError, Gf2Error, HdlError, NetlistError, ParseError, SearchError,
    VerifyError, WrapError, XorError,
};
pub use hdl::{emit_decoder, emit_encoder, HdlArtifact};
pub use matrix::CheckMatrix;
pub use netlist::Netlist;
pub use search::{search, verify_and_wrap, ColumnOrder, SearchConfig, SearchOutcome};
pub use span::ErrorSpan;
pub use verify::{probe_uncorrectable, verify_exhaustive, VerificationReport};
pub use xor::{cost, extract_program, optimize_cse, CostReport, CsePolicy, Side, XorProgram};

#[cfg(test)]
mod thread_safety {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_shareable() {
        assert_send_sync::<crate::BitVec>();
        assert_send_sync::<crate::CheckMatrix>();
        assert_send_sync::<crate::CodeSpec>();
        assert_send_sync::<crate::Codec>();
        assert_send_sync::<crate::ConstraintReport>();
        assert_send_sync::<crate::VerificationReport>();
        assert_send_sync::<crate::XorProgram>();
    }
}
