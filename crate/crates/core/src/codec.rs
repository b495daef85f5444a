//! Encoding and syndrome decoding for any [`CodeSpec`].
//!
//! The decoder is table driven: every correctable pattern (single bits and
//! adjacent bursts up to the code's capability) is mapped to its syndrome
//! once, and decoding is a lookup plus a span flip. Table construction
//! fails if two patterns share a syndrome, so a code that slipped past the
//! constraint checker cannot decode ambiguously.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::code::CodeSpec;
use crate::error::{CodecError, Gf2Error};
use crate::span::ErrorSpan;

/// How a decode attempt ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeKind {
    /// Zero syndrome; the word was accepted as stored.
    Clean,
    /// The syndrome matched a correctable pattern, which was flipped.
    Corrected,
    /// Non-zero syndrome with no matching pattern; nothing was flipped.
    DetectedUncorrectable,
}

/// Result of decoding one received word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub kind: DecodeKind,
    /// The extracted message: corrected when `kind` is `Corrected`, taken
    /// as received otherwise.
    pub message: BitVec,
    /// The flipped span; present exactly when `kind` is `Corrected`.
    pub error_span: Option<ErrorSpan>,
    pub syndrome: BitVec,
}

/// Syndrome-to-pattern map for one code, with entries kept in the
/// (width, start) scan order used everywhere else.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    entries: Vec<(ErrorSpan, BitVec)>,
    map: HashMap<u128, ErrorSpan>,
}

impl SyndromeTable {
    /// Enumerates all correctable patterns of `spec` and maps each to its
    /// syndrome. Errors on a zero syndrome or any collision.
    pub fn build(spec: &CodeSpec) -> Result<Self, CodecError> {
        Self::build_inner(spec, true)
    }

    /// Like [`SyndromeTable::build`] but collisions are resolved instead of
    /// rejected: the first pattern in (width, start) order keeps the
    /// syndrome. For a sound code this is identical to the strict table;
    /// the fault verifier uses it to demonstrate what an unsound code would
    /// actually do in hardware.
    pub fn build_permissive(spec: &CodeSpec) -> Self {
        Self::build_inner(spec, false).expect("permissive build cannot fail")
    }

    fn build_inner(spec: &CodeSpec, strict: bool) -> Result<Self, CodecError> {
        let n = spec.n();
        let h = spec.matrix();
        let mut entries = Vec::new();
        let mut map = HashMap::new();
        for span in ErrorSpan::enumerate(n, spec.capability().max_burst()) {
            let syndrome = h.mul_vec(&span.to_bitvec(n)).expect("pattern has length n");
            if syndrome.is_zero() {
                if strict {
                    return Err(CodecError::ZeroSyndromePattern { span });
                }
                continue;
            }
            if let Some(&earlier) = map.get(&syndrome.word()) {
                if strict {
                    return Err(CodecError::SyndromeCollision { a: earlier, b: span, syndrome });
                }
                continue;
            }
            map.insert(syndrome.word(), span);
            entries.push((span, syndrome));
        }
        Ok(SyndromeTable { entries, map })
    }

    /// Patterns and their syndromes in (width, start) order.
    pub fn entries(&self) -> &[(ErrorSpan, BitVec)] {
        &self.entries
    }

    pub fn lookup(&self, syndrome: &BitVec) -> Option<ErrorSpan> {
        self.map.get(&syndrome.word()).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An encoder/decoder pair bound to one code. Immutable once built; safe to
/// share across threads.
#[derive(Clone, Debug)]
pub struct Codec {
    spec: CodeSpec,
    table: SyndromeTable,
}

impl Codec {
    pub fn new(spec: CodeSpec) -> Result<Self, CodecError> {
        let table = SyndromeTable::build(&spec)?;
        Ok(Codec { spec, table })
    }

    /// Builds a codec even for codes whose pattern syndromes collide, using
    /// the permissive table. Intended for fault verification of claimed
    /// capabilities; real deployments should use [`Codec::new`].
    pub fn new_permissive(spec: CodeSpec) -> Self {
        let table = SyndromeTable::build_permissive(&spec);
        Codec { spec, table }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn table(&self) -> &SyndromeTable {
        &self.table
    }

    /// Encodes a k-bit message into an n-bit codeword. Uses the shared-form
    /// parity plan when the code carries one, otherwise the solved
    /// equations; both give the same codeword.
    pub fn encode(&self, message: &BitVec) -> Result<BitVec, CodecError> {
        let parity = match self.spec.shared_plan() {
            Some(plan) => self.parity_via_plan(plan, message)?,
            None => self.spec.parity_for(message)?,
        };
        Ok(self.spec.assemble(message, &parity)?)
    }

    /// Encodes strictly through the solved check equations, ignoring any
    /// shared plan. Exists so the two routes can be compared bit for bit.
    pub fn encode_direct(&self, message: &BitVec) -> Result<BitVec, CodecError> {
        let parity = self.spec.parity_for(message)?;
        Ok(self.spec.assemble(message, &parity)?)
    }

    fn parity_via_plan(
        &self,
        plan: &[crate::code::ParityEquation],
        message: &BitVec,
    ) -> Result<BitVec, Gf2Error> {
        if message.len() != self.spec.k() {
            return Err(Gf2Error::LengthMismatch { expected: self.spec.k(), got: message.len() });
        }
        let mut parity = BitVec::zeros(self.spec.r()).expect("r within range");
        for eq in plan {
            let mut bit = false;
            for &t in &eq.info_terms {
                bit ^= message.get(t);
            }
            for &t in &eq.parity_terms {
                bit ^= parity.get(t);
            }
            parity.set(eq.parity, bit);
        }
        Ok(parity)
    }

    /// Syndrome of a received n-bit word.
    pub fn syndrome(&self, received: &BitVec) -> Result<BitVec, CodecError> {
        Ok(self.spec.matrix().mul_vec(received)?)
    }

    /// Decodes a received word: zero syndrome is accepted as clean, a table
    /// hit flips the matched span, anything else is reported uncorrectable
    /// with the received message bits untouched.
    pub fn decode(&self, received: &BitVec) -> Result<DecodeOutcome, CodecError> {
        let syndrome = self.syndrome(received)?;
        if syndrome.is_zero() {
            let (message, _) = self.spec.disassemble(received)?;
            return Ok(DecodeOutcome {
                kind: DecodeKind::Clean,
                message,
                error_span: None,
                syndrome,
            });
        }
        match self.table.lookup(&syndrome) {
            Some(span) => {
                let repaired = received.xor(&span.to_bitvec(self.spec.n()))?;
                let (message, _) = self.spec.disassemble(&repaired)?;
                Ok(DecodeOutcome {
                    kind: DecodeKind::Corrected,
                    message,
                    error_span: Some(span),
                    syndrome,
                })
            }
            None => {
                let (message, _) = self.spec.disassemble(received)?;
                Ok(DecodeOutcome {
                    kind: DecodeKind::DetectedUncorrectable,
                    message,
                    error_span: None,
                    syndrome,
                })
            }
        }
    }

    /// Convenience constructor for the built-in (23,16) code.
    pub fn builtin_2316() -> Codec {
        Codec::new(CodeSpec::builtin_2316()).expect("built-in code builds a valid table")
    }
}
