//! Cross-module checks: the constraint flags, the codec and the verifier
//! must agree about which codes are sound.

use secdaec::*;

/// A matrix the checker passes at some level never miscorrects within that
/// level's pattern classes.
#[test]
fn passing_constraint_flags_imply_zero_miscorrection() {
    let cases = [
        (12, 8, Capability::Sec),
        (12, 7, Capability::SecDaec),
        (14, 8, Capability::SecDaecTaec),
        (23, 16, Capability::SecDaecTaec),
    ];
    for (n, k, capability) in cases {
        let config = SearchConfig::new(n, k, capability).unwrap();
        let spec = search(&config).spec().expect("feasible size").clone();
        let report = analyze(spec.matrix());
        assert!(report.satisfies(capability), "({n},{k}) {capability}");

        let codec = Codec::new(spec).expect("passing code builds a strict table");
        let verification = verify_exhaustive(&codec, 11);
        assert!(verification.pass, "({n},{k}) {capability}");
        assert_eq!(verification.total_miscorrected(), 0, "({n},{k}) {capability}");
    }
}

/// Searched codes of every size round-trip through their codec.
#[test]
fn searched_codes_round_trip() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for (n, k) in [(12, 7), (14, 8)] {
        let config = SearchConfig::new(n, k, Capability::SecDaec).unwrap();
        let spec = search(&config).spec().unwrap().clone();
        let codec = Codec::new(spec).unwrap();
        for _ in 0..2000 {
            let msg = BitVec::from_word(k, rng.random::<u128>());
            let out = codec.decode(&codec.encode(&msg).unwrap()).unwrap();
            assert_eq!(out.kind, DecodeKind::Clean);
            assert_eq!(out.message, msg);
        }
    }
}

/// The code-file format carries searched codes losslessly.
#[test]
fn searched_code_survives_file_round_trip() {
    let config = SearchConfig::new(14, 8, Capability::SecDaecTaec).unwrap();
    let spec = search(&config).spec().unwrap().clone();
    let text = spec.to_file_string();
    let again = CodeSpec::from_file_str(spec.name(), &text).unwrap();
    assert_eq!(again.matrix(), spec.matrix());
    assert_eq!(again.layout(), spec.layout());
    assert_eq!(again.capability(), spec.capability());
}
