//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `--nocapture` to see them all).

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secdaec::*;

fn bits_of(v: &BitVec) -> Vec<bool> {
    (1..=v.len()).map(|p| v.get(p)).collect()
}

/// 1. The worked (23,16) example: all-ones message, parity 0100010,
///    codeword 01111111011110111010111, exact string match.
#[test]
fn acceptance_1_worked_example_encoding() {
    let codec = Codec::builtin_2316();
    let msg: BitVec = "1111111111111111".parse().unwrap();
    let codeword = codec.encode(&msg).unwrap();
    assert_eq!(codeword.to_string(), "01111111011110111010111");
    let (info, parity) = codec.spec().disassemble(&codeword).unwrap();
    assert_eq!(parity.to_string(), "0100010");
    assert_eq!(info, msg);
    println!("acceptance 1 (worked-example encoding): PASS");
}

/// 2. Flipping codeword positions 4,5,6 yields syndrome 1011101 and the
///    decoder returns Corrected, span (4,3), all-ones message.
#[test]
fn acceptance_2_worked_example_syndrome_and_decode() {
    let codec = Codec::builtin_2316();
    let mut received: BitVec = "01111111011110111010111".parse().unwrap();
    for pos in [4, 5, 6] {
        received.flip(pos);
    }
    assert_eq!(received.to_string(), "01100011011110111010111");
    assert_eq!(codec.syndrome(&received).unwrap().to_string(), "1011101");
    let out = codec.decode(&received).unwrap();
    assert_eq!(out.kind, DecodeKind::Corrected);
    assert_eq!(out.error_span, Some(ErrorSpan::new(4, 3)));
    assert_eq!(out.message.to_string(), "1111111111111111");
    println!("acceptance 2 (worked-example syndrome and decode): PASS");
}

/// 3. Zero miscorrection, reproduced exactly: 66 patterns x 101 messages,
///    miscorrected = 0, in under a second.
#[test]
fn acceptance_3_zero_miscorrection() {
    let codec = Codec::builtin_2316();
    let report = verify_exhaustive(&codec, 0);
    assert!(report.pass);
    assert_eq!(report.messages, 101);
    let tested: u64 = report.classes.iter().map(|c| c.tested).sum();
    assert_eq!(tested, 66 * 101);
    assert_eq!(report.total_miscorrected(), 0);
    assert!(report.elapsed < Duration::from_secs(1), "took {:?}", report.elapsed);
    println!("acceptance 3 (zero miscorrection, 66 patterns x 101 messages): PASS");
}

/// 4. Constraint fidelity: the built-in matrix passes every check, its 66
///    pattern syndromes are pairwise distinct by direct enumeration, and
///    the checker agrees with a brute-force oracle over 1000 random small
///    matrices.
#[test]
fn acceptance_4_constraint_fidelity() {
    let spec = CodeSpec::builtin_2316();
    let h = spec.matrix();
    assert!(check_sec(h).ok);
    assert!(check_daec(h).ok);
    assert!(check_taec(h).ok);

    let mut seen = HashSet::new();
    for span in ErrorSpan::enumerate(23, 3) {
        let syndrome = h.mul_vec(&span.to_bitvec(23)).unwrap();
        assert!(!syndrome.is_zero(), "{span} has zero syndrome");
        assert!(seen.insert(syndrome), "{span} collides");
    }
    assert_eq!(seen.len(), 66);

    let oracle_ok = |h: &CheckMatrix, width: usize| -> bool {
        let mut seen = HashSet::new();
        ErrorSpan::enumerate(h.cols(), width)
            .map(|s| h.mul_vec(&s.to_bitvec(h.cols())).unwrap())
            .all(|s| !s.is_zero() && seen.insert(s))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for trial in 0..1000 {
        let n = rng.random_range(2..=12usize);
        let r = rng.random_range(1..n.min(7));
        let cols: Vec<BitVec> =
            (0..n).map(|_| BitVec::from_word(r, rng.random::<u128>())).collect();
        let h = CheckMatrix::from_columns(&cols).unwrap();
        let report = analyze(&h);
        assert_eq!(report.sec_ok, oracle_ok(&h, 1), "trial {trial}");
        assert_eq!(report.daec_ok, oracle_ok(&h, 2), "trial {trial}");
        assert_eq!(report.taec_ok, oracle_ok(&h, 3), "trial {trial}");
    }
    println!("acceptance 4 (constraint fidelity vs brute-force oracle): PASS");
}

/// 5. Search feasibility at the published parameters: DAEC and TAEC codes
///    at (23,16), (40,32), (74,64), each within the backtrack budget and
///    five minutes, each re-checked independently.
#[test]
fn acceptance_5_search_feasibility() {
    for (n, k) in [(23usize, 16usize), (40, 32), (74, 64)] {
        for capability in [Capability::SecDaec, Capability::SecDaecTaec] {
            let started = Instant::now();
            let config = SearchConfig::new(n, k, capability).unwrap();
            assert_eq!(config.max_backtracks, 10_000_000);
            let outcome = search(&config);
            let elapsed = started.elapsed();
            let SearchOutcome::Found { spec, backtracks } = outcome else {
                panic!("({n},{k}) {capability}: search failed: {outcome:?}");
            };
            assert!(backtracks <= 10_000_000);
            assert!(elapsed < Duration::from_secs(300), "({n},{k}) took {elapsed:?}");
            let report = analyze(spec.matrix());
            assert!(report.satisfies(capability), "({n},{k}) {capability}");
            assert_eq!(spec.n(), n);
            assert_eq!(spec.k(), k);
        }
    }
    println!("acceptance 5 (search feasibility at (23,16), (40,32), (74,64)): PASS");
}

/// 6. The common-subexpression claim at testable granularity: naive
///    flattened encoder = 45 two-input XORs, the published shared form =
///    35, greedy never exceeds naive, all three semantically identical
///    over every 16-bit message.
#[test]
fn acceptance_6_cse_gate_counts() {
    let spec = CodeSpec::builtin_2316();
    let naive = extract_program(&spec, Side::Encoder);
    assert_eq!(cost(&naive).xor2_count, 45);

    let shared = optimize_cse(&naive, CsePolicy::PaperShared).unwrap();
    assert_eq!(cost(&shared).xor2_count, 35);

    let greedy = optimize_cse(&naive, CsePolicy::GreedyPair).unwrap();
    assert!(cost(&greedy).xor2_count <= 45);

    let order = |prog: &XorProgram| -> Vec<usize> {
        (1..=7)
            .map(|t| prog.outputs.iter().position(|o| o.name == format!("p{t}")).unwrap())
            .collect()
    };
    let (no, so, go) = (order(&naive), order(&shared), order(&greedy));
    for m in 0..=u16::MAX {
        let inputs: Vec<bool> = (0..16).map(|b| (m >> b) & 1 == 1).collect();
        let a = naive.eval(&inputs);
        let b = shared.eval(&inputs);
        let c = greedy.eval(&inputs);
        for t in 0..7 {
            assert_eq!(a[no[t]], b[so[t]], "p{} at {m:#06x}", t + 1);
            assert_eq!(a[no[t]], c[go[t]], "p{} at {m:#06x}", t + 1);
        }
    }
    println!("acceptance 6 (CSE gate counts 45 -> 35, semantics preserved): PASS");
}

/// 7. Round trip: decode(encode(m)) = m for all 65536 built-in messages
///    and 100000 random messages on searched 32- and 64-bit codes.
#[test]
fn acceptance_7_round_trip() {
    let codec = Codec::builtin_2316();
    for m in 0..=u16::MAX {
        let msg = BitVec::from_word(16, m as u128);
        let out = codec.decode(&codec.encode(&msg).unwrap()).unwrap();
        assert_eq!(out.kind, DecodeKind::Clean, "{m:#06x}");
        assert_eq!(out.message, msg, "{m:#06x}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (n, k) in [(40usize, 32usize), (74, 64)] {
        let config = SearchConfig::new(n, k, Capability::SecDaecTaec).unwrap();
        let spec = search(&config).spec().expect("feasible").clone();
        let codec = Codec::new(spec).unwrap();
        for _ in 0..100_000 {
            let msg = BitVec::from_word(k, rng.random::<u128>());
            let out = codec.decode(&codec.encode(&msg).unwrap()).unwrap();
            assert_eq!(out.kind, DecodeKind::Clean);
            assert_eq!(out.message, msg);
        }
    }
    println!("acceptance 7 (round trip, exhaustive k=16 and 1e5 random k=32/64): PASS");
}

/// 8. HDL equivalence: emission is byte-stable against the golden corpus;
///    interpreting the emitted text matches the codec exhaustively for the
///    built-in code and on 10000 random injected-error cases for the
///    searched 32- and 64-bit codes.
#[test]
fn acceptance_8_hdl_equivalence() {
    let golden = |name: &str| {
        let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("golden file {path}: {e}"))
    };
    let spec = CodeSpec::builtin_2316();
    let naive = extract_program(&spec, Side::Encoder);
    let shared = optimize_cse(&naive, CsePolicy::PaperShared).unwrap();
    assert_eq!(emit_encoder(&spec, &naive).unwrap().text, golden("builtin2316_encoder_naive.v"));
    assert_eq!(
        emit_encoder(&spec, &shared).unwrap().text,
        golden("builtin2316_encoder_shared.v")
    );
    assert_eq!(emit_decoder(&spec).unwrap().text, golden("builtin2316_decoder.v"));

    // Exhaustive equivalence for the built-in code.
    let codec = Codec::builtin_2316();
    let enc_net = Netlist::parse(&emit_encoder(&spec, &shared).unwrap().text).unwrap();
    let dec_net = Netlist::parse(&emit_decoder(&spec).unwrap().text).unwrap();
    let spans: Vec<ErrorSpan> = ErrorSpan::enumerate(23, 3).collect();
    for m in 0..=u16::MAX {
        let msg = BitVec::from_word(16, m as u128);
        let codeword = codec.encode(&msg).unwrap();
        let enc_out = enc_net.eval(&HashMap::from([("i".to_string(), bits_of(&msg))])).unwrap();
        assert_eq!(enc_out["c"], bits_of(&codeword), "{m:#06x}");

        // Each message also decodes one injected correctable pattern.
        let span = spans[m as usize % spans.len()];
        let received = codeword.xor(&span.to_bitvec(23)).unwrap();
        let expected = codec.decode(&received).unwrap();
        let dec_out =
            dec_net.eval(&HashMap::from([("c".to_string(), bits_of(&received))])).unwrap();
        assert_eq!(dec_out["m"], bits_of(&expected.message), "{m:#06x}");
        assert_eq!(dec_out["uncorrectable"], vec![false], "{m:#06x}");
    }

    // Sampled equivalence for the larger searched codes.
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for (n, k) in [(40usize, 32usize), (74, 64)] {
        let config = SearchConfig::new(n, k, Capability::SecDaecTaec).unwrap();
        let spec = search(&config).spec().expect("feasible").clone();
        let codec = Codec::new(spec.clone()).unwrap();
        let prog = extract_program(&spec, Side::Encoder);
        let enc_net = Netlist::parse(&emit_encoder(&spec, &prog).unwrap().text).unwrap();
        let dec_net = Netlist::parse(&emit_decoder(&spec).unwrap().text).unwrap();
        for _ in 0..10_000 {
            let msg = BitVec::from_word(k, rng.random::<u128>());
            let codeword = codec.encode(&msg).unwrap();
            let enc_out =
                enc_net.eval(&HashMap::from([("i".to_string(), bits_of(&msg))])).unwrap();
            assert_eq!(enc_out["c"], bits_of(&codeword));

            // Damage of weight 1..=4 at random positions: a mix of
            // correctable spans and detectable multi-bit patterns.
            let mut received = codeword;
            for _ in 0..rng.random_range(1..=4usize) {
                received.flip(rng.random_range(1..=n));
            }
            let expected = codec.decode(&received).unwrap();
            let dec_out =
                dec_net.eval(&HashMap::from([("c".to_string(), bits_of(&received))])).unwrap();
            assert_eq!(dec_out["m"], bits_of(&expected.message));
            assert_eq!(
                dec_out["uncorrectable"],
                vec![expected.kind == DecodeKind::DetectedUncorrectable]
            );
        }
    }
    println!("acceptance 8 (HDL equivalence and golden stability): PASS");
}
