//! Fault injection: exhaustive proof of zero miscorrection over the
//! correctable pattern classes, and sampling of behavior outside them.
//!
//! The exhaustive run injects every single, double-adjacent and
//! triple-adjacent pattern (up to the code's capability) into real encoded
//! messages — the zero message plus seeded random ones — and demands that
//! each decode returns exactly the injected span and the original message.
//! Going through full codewords instead of bare syndromes also exercises
//! the layout plumbing, which pure syndrome arithmetic would miss.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::codec::{Codec, DecodeKind};
use crate::error::VerifyError;
use crate::span::ErrorSpan;

/// Number of random messages an exhaustive run adds to the zero message.
pub const RANDOM_MESSAGES: usize = 100;

/// Injected-pattern classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternClass {
    Single,
    DoubleAdjacent,
    TripleAdjacent,
    /// Random non-adjacent doubles and bursts of width >= 4.
    SampledOther,
}

impl PatternClass {
    pub fn label(self) -> &'static str {
        match self {
            PatternClass::Single => "single",
            PatternClass::DoubleAdjacent => "double-adjacent",
            PatternClass::TripleAdjacent => "triple-adjacent",
            PatternClass::SampledOther => "sampled-other",
        }
    }
}

/// A replayable miscorrection: what was sent, what was injected, what came
/// back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Miscorrection {
    pub message: BitVec,
    /// The injected error as a full pattern word.
    pub pattern: BitVec,
    /// The injected span when the pattern was a contiguous burst.
    pub injected_span: Option<ErrorSpan>,
    pub kind: DecodeKind,
    pub decoded_message: BitVec,
    pub decoded_span: Option<ErrorSpan>,
}

/// Outcome counts for one pattern class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStats {
    pub class: PatternClass,
    pub tested: u64,
    pub corrected: u64,
    pub detected: u64,
    pub miscorrected: u64,
    pub witnesses: Vec<Miscorrection>,
}

impl ClassStats {
    fn new(class: PatternClass) -> Self {
        ClassStats { class, tested: 0, corrected: 0, detected: 0, miscorrected: 0, witnesses: Vec::new() }
    }

    fn merge(&mut self, other: &ClassStats) {
        assert_eq!(self.class, other.class);
        self.tested += other.tested;
        self.corrected += other.corrected;
        self.detected += other.detected;
        self.miscorrected += other.miscorrected;
        self.witnesses.extend(other.witnesses.iter().cloned());
        self.witnesses.truncate(MAX_WITNESSES);
    }
}

/// Witness list cap per class; counts are always complete.
const MAX_WITNESSES: usize = 32;

/// Result of a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub capability: crate::code::Capability,
    pub seed: u64,
    /// Number of distinct messages injected into.
    pub messages: u64,
    pub classes: Vec<ClassStats>,
    /// True when no exhaustive class saw a miscorrection.
    pub pass: bool,
    #[serde(with = "duration_millis")]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn total_miscorrected(&self) -> u64 {
        self.classes.iter().map(|c| c.miscorrected).sum()
    }
}

mod duration_millis {
    use super::Duration;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Exhaustive class stats for one message: every correctable span is
/// injected into `encode(message)` and the decode is classified.
///
/// For a linear code these counts are the same for every message; the
/// verifier asserts that by comparing against the zero-message counts.
pub fn classify_message(codec: &Codec, message: &BitVec) -> Vec<ClassStats> {
    let spec = codec.spec();
    let n = spec.n();
    let codeword = codec.encode(message).expect("message length was validated");
    let mut stats: Vec<ClassStats> = class_list(spec.capability().max_burst());

    for span in ErrorSpan::enumerate(n, spec.capability().max_burst()) {
        let class_index = span.width - 1;
        let pattern = span.to_bitvec(n);
        let received = codeword.xor(&pattern).expect("same length");
        let outcome = codec.decode(&received).expect("received word has length n");
        let stat = &mut stats[class_index];
        stat.tested += 1;
        let exact = outcome.kind == DecodeKind::Corrected
            && outcome.message == *message
            && outcome.error_span == Some(span);
        if exact {
            stat.corrected += 1;
        } else if outcome.kind == DecodeKind::DetectedUncorrectable {
            stat.detected += 1;
        } else {
            stat.miscorrected += 1;
            stat.witnesses.push(Miscorrection {
                message: *message,
                pattern,
                injected_span: Some(span),
                kind: outcome.kind,
                decoded_message: outcome.message,
                decoded_span: outcome.error_span,
            });
        }
    }
    stats
}

fn class_list(max_burst: usize) -> Vec<ClassStats> {
    [PatternClass::Single, PatternClass::DoubleAdjacent, PatternClass::TripleAdjacent]
        .into_iter()
        .take(max_burst)
        .map(ClassStats::new)
        .collect()
}

/// Injects every correctable pattern into the zero message and
/// `RANDOM_MESSAGES` seeded random messages. Passes iff no injection is
/// miscorrected; for the built-in (23,16) code that is 66 patterns across
/// 101 messages.
pub fn verify_exhaustive(codec: &Codec, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let spec = codec.spec();
    let k = spec.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let zero = BitVec::zeros(k).expect("k within range");
    let mut totals = classify_message(codec, &zero);
    let zero_counts: Vec<(u64, u64, u64)> =
        totals.iter().map(|c| (c.corrected, c.detected, c.miscorrected)).collect();

    for _ in 0..RANDOM_MESSAGES {
        let message = BitVec::from_word(k, rng.random::<u128>());
        let stats = classify_message(codec, &message);
        // Linearity: per-class outcome counts are message independent.
        let counts: Vec<(u64, u64, u64)> =
            stats.iter().map(|c| (c.corrected, c.detected, c.miscorrected)).collect();
        debug_assert_eq!(counts, zero_counts, "outcome counts should not depend on the message");
        for (total, s) in totals.iter_mut().zip(&stats) {
            total.merge(s);
        }
    }

    let pass = totals.iter().all(|c| c.miscorrected == 0);
    VerificationReport {
        code: spec.name().to_string(),
        n: spec.n(),
        k,
        capability: spec.capability(),
        seed,
        messages: RANDOM_MESSAGES as u64 + 1,
        classes: totals,
        pass,
        elapsed: start.elapsed(),
    }
}

/// Samples patterns outside the correctable classes — non-adjacent doubles
/// and contiguous bursts of width >= 4 — and classifies the outcomes. Codes
/// make no promise here, so miscorrections are reported, not failed.
pub fn probe_uncorrectable(
    codec: &Codec,
    samples: u64,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if samples == 0 {
        return Err(VerifyError::NoSamples);
    }
    let start = Instant::now();
    let spec = codec.spec();
    let n = spec.n();
    let k = spec.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = ClassStats::new(PatternClass::SampledOther);

    let can_double = n >= 3;
    let can_burst = n >= 4;
    for i in 0..samples {
        if !can_double && !can_burst {
            break; // degenerate code too short for either shape
        }
        let message = BitVec::from_word(k, rng.random::<u128>());
        let codeword = codec.encode(&message).expect("message length is k");

        // Alternate between the two uncorrectable shapes. Both are non-zero
        // by construction.
        let use_double = can_double && (i % 2 == 0 || !can_burst);
        let (pattern, span) = if use_double {
            // Non-adjacent double: j2 >= j1 + 2.
            let j1 = rng.random_range(1..=n - 2);
            let j2 = rng.random_range(j1 + 2..=n);
            let mut p = BitVec::zeros(n).expect("n within range");
            p.set(j1, true);
            p.set(j2, true);
            (p, None)
        } else {
            // Burst of width 4..=n.
            let width = rng.random_range(4..=n);
            let start_pos = rng.random_range(1..=n - width + 1);
            let span = ErrorSpan::new(start_pos, width);
            (span.to_bitvec(n), Some(span))
        };

        let received = codeword.xor(&pattern).expect("same length");
        let outcome = codec.decode(&received).expect("received word has length n");
        stats.tested += 1;
        if outcome.message == message && outcome.kind != DecodeKind::DetectedUncorrectable {
            // The decoder happened to restore the message (e.g. the damage
            // cancelled inside parity positions).
            stats.corrected += 1;
        } else if outcome.kind == DecodeKind::DetectedUncorrectable {
            stats.detected += 1;
        } else {
            stats.miscorrected += 1;
            if stats.witnesses.len() < 16 {
                stats.witnesses.push(Miscorrection {
                    message,
                    pattern,
                    injected_span: span,
                    kind: outcome.kind,
                    decoded_message: outcome.message,
                    decoded_span: outcome.error_span,
                });
            }
        }
    }

    Ok(VerificationReport {
        code: spec.name().to_string(),
        n,
        k,
        capability: spec.capability(),
        seed,
        messages: samples,
        classes: vec![stats],
        pass: true,
        elapsed: start.elapsed(),
    })
}
