//! Code specifications: a check matrix bound to a codeword bit layout and a
//! correction capability, plus the built-in (23,16) triple-adjacent code.
//!
//! The layout maps each codeword position to the information or parity bit
//! stored there. The built-in code interleaves parity among the data bits;
//! positions 1..23 hold
//! `p1 i1 p2 i2 i3 i4 i5 i6 p3 i7 i8 i9 i10 p4 i11 i12 i13 p5 p6 p7 i14 i15 i16`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{CodeSpecError, Gf2Error, ParseError};
use crate::matrix::CheckMatrix;

/// What a codeword position stores: the `index`-th information bit or the
/// `index`-th parity bit (1-based within each kind).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BitRole {
    Info(usize),
    Parity(usize),
}

impl fmt::Display for BitRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitRole::Info(i) => write!(f, "I{i}"),
            BitRole::Parity(i) => write!(f, "P{i}"),
        }
    }
}

impl FromStr for BitRole {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let mut chars = s.chars();
        let kind = chars.next().ok_or(())?;
        let idx: usize = chars.as_str().parse().map_err(|_| ())?;
        if idx == 0 {
            return Err(());
        }
        match kind {
            'I' | 'i' => Ok(BitRole::Info(idx)),
            'P' | 'p' => Ok(BitRole::Parity(idx)),
            _ => Err(()),
        }
    }
}

/// Correction capability of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Capability {
    /// Single error correction.
    #[serde(rename = "SEC")]
    Sec,
    /// Single plus double-adjacent error correction.
    #[serde(rename = "DAEC")]
    SecDaec,
    /// Single, double-adjacent and triple-adjacent error correction.
    #[serde(rename = "TAEC")]
    SecDaecTaec,
}

impl Capability {
    /// Widest correctable burst: 1, 2 or 3 adjacent bits.
    pub fn max_burst(self) -> usize {
        match self {
            Capability::Sec => 1,
            Capability::SecDaec => 2,
            Capability::SecDaecTaec => 3,
        }
    }

    /// Short token used in code files: `SEC`, `DAEC` or `TAEC`.
    pub fn token(self) -> &'static str {
        match self {
            Capability::Sec => "SEC",
            Capability::SecDaec => "DAEC",
            Capability::SecDaecTaec => "TAEC",
        }
    }

    pub fn from_token(tok: &str) -> Option<Self> {
        match tok.to_ascii_uppercase().as_str() {
            "SEC" => Some(Capability::Sec),
            "DAEC" => Some(Capability::SecDaec),
            "TAEC" => Some(Capability::SecDaecTaec),
            _ => None,
        }
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Capability::Sec => "SEC",
            Capability::SecDaec => "SEC-DAEC",
            Capability::SecDaecTaec => "SEC-DAEC-TAEC",
        };
        f.write_str(name)
    }
}

/// One parity output in a shared-form encoder: the XOR of some information
/// bits and zero or more previously computed parity bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityEquation {
    /// 1-based parity index this equation defines.
    pub parity: usize,
    /// 1-based information-bit terms, ascending.
    pub info_terms: Vec<usize>,
    /// 1-based indices of parity bits reused as terms; each must be defined
    /// by an earlier equation in the plan.
    pub parity_terms: Vec<usize>,
}

/// A check matrix plus bit layout and capability: everything an encoder,
/// decoder or emitter needs to know about one code.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    name: String,
    matrix: CheckMatrix,
    layout: Vec<BitRole>,
    capability: Capability,
    shared_plan: Option<Vec<ParityEquation>>,
    /// parity = map * info; row `t` (parity bit `t+1`) packs info bit `u`
    /// at word bit `u - 1`.
    parity_map: Vec<u128>,
    /// Codeword position of info bit `t` at index `t - 1`.
    info_positions: Vec<usize>,
    /// Codeword position of parity bit `t` at index `t - 1`.
    parity_positions: Vec<usize>,
}

impl CodeSpec {
    /// Binds `matrix`, `layout` and `capability` into a code. Validates that
    /// the layout is a bijection onto info 1..k and parity 1..r, that the
    /// parity bits are solvable from the check equations, and that every
    /// basis message assembles into a word with zero syndrome.
    pub fn new(
        name: impl Into<String>,
        matrix: CheckMatrix,
        layout: Vec<BitRole>,
        capability: Capability,
    ) -> Result<Self, CodeSpecError> {
        Self::build(name.into(), matrix, layout, capability, None)
    }

    /// Like [`CodeSpec::new`], additionally recording a shared-form parity
    /// plan. The plan is checked against the matrix: flattening each
    /// equation (cancelling repeated terms mod 2) must reproduce the solved
    /// parity equations exactly.
    pub fn with_shared_plan(
        name: impl Into<String>,
        matrix: CheckMatrix,
        layout: Vec<BitRole>,
        capability: Capability,
        plan: Vec<ParityEquation>,
    ) -> Result<Self, CodeSpecError> {
        Self::build(name.into(), matrix, layout, capability, Some(plan))
    }

    fn build(
        name: String,
        matrix: CheckMatrix,
        layout: Vec<BitRole>,
        capability: Capability,
        shared_plan: Option<Vec<ParityEquation>>,
    ) -> Result<Self, CodeSpecError> {
        let n = matrix.cols();
        let r = matrix.rows();
        let k = matrix.k();
        if layout.len() != n {
            return Err(CodeSpecError::LayoutLengthMismatch { expected: n, got: layout.len() });
        }

        let mut info_positions = vec![0usize; k];
        let mut parity_positions = vec![0usize; r];
        for (pos0, role) in layout.iter().enumerate() {
            let pos = pos0 + 1;
            match *role {
                BitRole::Info(t) if t >= 1 && t <= k => {
                    if info_positions[t - 1] != 0 {
                        return Err(CodeSpecError::LayoutNotBijective {
                            detail: format!("I{t} appears more than once"),
                        });
                    }
                    info_positions[t - 1] = pos;
                }
                BitRole::Parity(t) if t >= 1 && t <= r => {
                    if parity_positions[t - 1] != 0 {
                        return Err(CodeSpecError::LayoutNotBijective {
                            detail: format!("P{t} appears more than once"),
                        });
                    }
                    parity_positions[t - 1] = pos;
                }
                role => {
                    return Err(CodeSpecError::LayoutNotBijective {
                        detail: format!("{role} is out of range for a ({n},{k}) code"),
                    });
                }
            }
        }
        // Counting argument: n slots, k + r = n distinct targets, no repeats
        // seen, so every index is covered; keep the explicit check anyway.
        if info_positions.contains(&0) || parity_positions.contains(&0) {
            return Err(CodeSpecError::LayoutNotBijective {
                detail: "some info or parity index never appears".to_string(),
            });
        }

        let parity_map = matrix
            .solve_parity_map(&parity_positions)
            .ok_or(CodeSpecError::SingularParityColumns)?;

        if let Some(plan) = &shared_plan {
            validate_plan(plan, k, r, &parity_map)?;
        }

        let spec = CodeSpec {
            name,
            matrix,
            layout,
            capability,
            shared_plan,
            parity_map,
            info_positions,
            parity_positions,
        };

        // Zero syndrome for every basis message.
        for t in 1..=k {
            let m = BitVec::unit(k, t).expect("k within range");
            let c = spec.assemble(&m, &spec.parity_for(&m)?)?;
            let syndrome = spec.matrix.mul_vec(&c).expect("assembled word has length n");
            if !syndrome.is_zero() {
                return Err(CodeSpecError::BasisCheckFailed { index: t, syndrome });
            }
        }

        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &CheckMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &[BitRole] {
        &self.layout
    }

    pub fn capability(&self) -> Capability {
        self.capability
    }

    pub fn shared_plan(&self) -> Option<&[ParityEquation]> {
        self.shared_plan.as_deref()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn r(&self) -> usize {
        self.matrix.rows()
    }

    /// Codeword position storing info bit `t`.
    pub fn info_position(&self, t: usize) -> usize {
        self.info_positions[t - 1]
    }

    /// Codeword position storing parity bit `t`.
    pub fn parity_position(&self, t: usize) -> usize {
        self.parity_positions[t - 1]
    }

    /// Solved parity equations: for parity bit `t`, the ascending info-bit
    /// indices it XORs together.
    pub fn parity_equation_terms(&self, t: usize) -> Vec<usize> {
        let row = self.parity_map[t - 1];
        (1..=self.k()).filter(|u| (row >> (u - 1)) & 1 == 1).collect()
    }

    /// Parity word for `info` via the solved equations.
    pub fn parity_for(&self, info: &BitVec) -> Result<BitVec, Gf2Error> {
        if info.len() != self.k() {
            return Err(Gf2Error::LengthMismatch { expected: self.k(), got: info.len() });
        }
        let mut p = BitVec::zeros(self.r()).expect("r within range");
        for t in 1..=self.r() {
            let parity = (self.parity_map[t - 1] & info.word()).count_ones() & 1;
            p.set(t, parity == 1);
        }
        Ok(p)
    }

    /// Places info and parity bits into a codeword per the layout.
    pub fn assemble(&self, info: &BitVec, parity: &BitVec) -> Result<BitVec, Gf2Error> {
        if info.len() != self.k() {
            return Err(Gf2Error::LengthMismatch { expected: self.k(), got: info.len() });
        }
        if parity.len() != self.r() {
            return Err(Gf2Error::LengthMismatch { expected: self.r(), got: parity.len() });
        }
        let mut c = BitVec::zeros(self.n()).expect("n within range");
        for (pos0, role) in self.layout.iter().enumerate() {
            let bit = match *role {
                BitRole::Info(t) => info.get(t),
                BitRole::Parity(t) => parity.get(t),
            };
            c.set(pos0 + 1, bit);
        }
        Ok(c)
    }

    /// Splits a codeword back into its info and parity words.
    pub fn disassemble(&self, codeword: &BitVec) -> Result<(BitVec, BitVec), Gf2Error> {
        if codeword.len() != self.n() {
            return Err(Gf2Error::LengthMismatch { expected: self.n(), got: codeword.len() });
        }
        let mut info = BitVec::zeros(self.k()).expect("k within range");
        let mut parity = BitVec::zeros(self.r()).expect("r within range");
        for (pos0, role) in self.layout.iter().enumerate() {
            let bit = codeword.get(pos0 + 1);
            match *role {
                BitRole::Info(t) => info.set(t, bit),
                BitRole::Parity(t) => parity.set(t, bit),
            }
        }
        Ok((info, parity))
    }

    /// The (23,16) SEC-DAEC-TAEC code, with its shared-form parity plan.
    pub fn builtin_2316() -> CodeSpec {
        let matrix = CheckMatrix::parse(BUILTIN_2316_MATRIX).expect("built-in matrix is valid");
        let layout = parse_layout_tokens(BUILTIN_2316_LAYOUT, 0)
            .expect("built-in layout is valid")
            .1;
        CodeSpec::with_shared_plan(
            BUILTIN_2316_NAME,
            matrix,
            layout,
            Capability::SecDaecTaec,
            builtin_2316_plan(),
        )
        .expect("built-in code is consistent")
    }

    /// Renders the code file format: matrix, then layout and capability lines.
    pub fn to_file_string(&self) -> String {
        let mut out = self.matrix.render();
        out.push_str("layout:");
        for role in &self.layout {
            out.push(' ');
            out.push_str(&role.to_string());
        }
        out.push('\n');
        out.push_str(&format!("capability: {}\n", self.capability.token()));
        out
    }

    /// Parses the code file format; `name` labels the result.
    pub fn from_file_str(name: impl Into<String>, text: &str) -> Result<Self, CodeFileError> {
        let file = CodeFile::parse(text)?;
        let (layout, capability) = match (file.layout, file.capability) {
            (Some(l), Some(c)) => (l, c),
            (None, None) => return Err(CodeFileError::Parse(ParseError::NotACodeFile)),
            _ => return Err(CodeFileError::Parse(ParseError::IncompleteCodeFile)),
        };
        CodeSpec::new(name, file.matrix, layout, capability).map_err(CodeFileError::Spec)
    }
}

/// A parsed code file: the matrix is mandatory, layout and capability lines
/// are optional so that bare matrix files can be inspected too.
#[derive(Debug)]
pub struct CodeFile {
    pub matrix: CheckMatrix,
    pub layout: Option<Vec<BitRole>>,
    pub capability: Option<Capability>,
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let (matrix, rest) = CheckMatrix::parse_prefix(text)?;
        let mut layout = None;
        let mut capability = None;
        for (line, content) in rest {
            if let Some(tokens) = content.strip_prefix("layout:") {
                layout = Some(parse_layout_tokens(tokens, line)?.1);
            } else if let Some(tok) = content.strip_prefix("capability:") {
                let tok = tok.trim();
                capability = Some(Capability::from_token(tok).ok_or_else(|| {
                    ParseError::BadCapability { line, token: tok.to_string() }
                })?);
            } else {
                return Err(ParseError::TrailingContent { line, found: content });
            }
        }
        Ok(CodeFile { matrix, layout, capability })
    }
}

/// Errors from reading a code file: either the text or the code is bad.
#[derive(Debug, thiserror::Error)]
pub enum CodeFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Spec(#[from] CodeSpecError),
}

fn parse_layout_tokens(
    tokens: &str,
    line: usize,
) -> Result<(usize, Vec<BitRole>), ParseError> {
    let mut layout = Vec::new();
    for tok in tokens.split_whitespace() {
        let role: BitRole = tok
            .parse()
            .map_err(|_| ParseError::BadLayoutToken { line, token: tok.to_string() })?;
        layout.push(role);
    }
    Ok((line, layout))
}

fn validate_plan(
    plan: &[ParityEquation],
    k: usize,
    r: usize,
    parity_map: &[u128],
) -> Result<(), CodeSpecError> {
    let mut defined = vec![false; r];
    let mut flattened = vec![0u128; r];
    if plan.len() != r {
        return Err(CodeSpecError::BadPlan {
            detail: format!("plan defines {} parity bits, code has {r}", plan.len()),
        });
    }
    for eq in plan {
        if eq.parity == 0 || eq.parity > r {
            return Err(CodeSpecError::BadPlan {
                detail: format!("parity index {} out of 1..={r}", eq.parity),
            });
        }
        if defined[eq.parity - 1] {
            return Err(CodeSpecError::BadPlan {
                detail: format!("parity {} defined twice", eq.parity),
            });
        }
        let mut flat = 0u128;
        for &t in &eq.info_terms {
            if t == 0 || t > k {
                return Err(CodeSpecError::BadPlan {
                    detail: format!("info term {t} out of 1..={k}"),
                });
            }
            flat ^= 1u128 << (t - 1);
        }
        for &t in &eq.parity_terms {
            if t == 0 || t > r || !defined[t - 1] {
                return Err(CodeSpecError::BadPlan {
                    detail: format!("parity term p{t} used before it is defined"),
                });
            }
            flat ^= flattened[t - 1];
        }
        if flat != parity_map[eq.parity - 1] {
            return Err(CodeSpecError::PlanMismatch { parity: eq.parity });
        }
        defined[eq.parity - 1] = true;
        flattened[eq.parity - 1] = flat;
    }
    Ok(())
}

const BUILTIN_2316_NAME: &str = "builtin2316";

/// The 7x23 check matrix of the built-in code.
const BUILTIN_2316_MATRIX: &str = "\
23 16
00000101101010100000111
01011010000001010000111
01010000010110101010000
10001000100010001000100
01000100010001000100010
00100010001000100010001
00010001000100010001000
";

const BUILTIN_2316_LAYOUT: &str =
    "P1 I1 P2 I2 I3 I4 I5 I6 P3 I7 I8 I9 I10 P4 I11 I12 I13 P5 P6 P7 I14 I15 I16";

/// Shared-form parity equations of the built-in encoder, in dependency
/// order: p3, p6, p4, p7 first, then p1, p2, p5 which each reuse one of them.
fn builtin_2316_plan() -> Vec<ParityEquation> {
    let eq = |parity: usize, info: &[usize], deps: &[usize]| ParityEquation {
        parity,
        info_terms: info.to_vec(),
        parity_terms: deps.to_vec(),
    };
    vec![
        eq(3, &[4, 6, 8, 10, 11, 14, 15, 16], &[]),
        eq(6, &[1, 2, 7, 9, 10, 11, 13], &[]),
        eq(4, &[1, 2, 3, 5, 12, 14, 15, 16], &[]),
        eq(7, &[2, 6, 9, 12], &[]),
        eq(1, &[3, 10, 13, 14], &[3]),
        eq(2, &[5, 8, 11, 16], &[6]),
        eq(5, &[1, 4, 7, 15], &[4]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtin_layout_places_bits_as_documented() {
        let spec = CodeSpec::builtin_2316();
        assert_eq!(spec.n(), 23);
        assert_eq!(spec.k(), 16);
        assert_eq!(spec.r(), 7);
        assert_eq!(spec.capability(), Capability::SecDaecTaec);
        // Errors on i2, i3, i4 hit printed positions 4, 5, 6.
        assert_eq!(spec.layout()[3], BitRole::Info(2));
        assert_eq!(spec.layout()[4], BitRole::Info(3));
        assert_eq!(spec.layout()[5], BitRole::Info(4));
        assert_eq!(spec.info_position(2), 4);
        assert_eq!(spec.parity_position(1), 1);
        assert_eq!(spec.parity_position(7), 20);
    }

    #[test]
    fn all_ones_message_assembles_to_the_worked_codeword() {
        let spec = CodeSpec::builtin_2316();
        let info: BitVec = "1111111111111111".parse().unwrap();
        let parity: BitVec = "0100010".parse().unwrap();
        let c = spec.assemble(&info, &parity).unwrap();
        assert_eq!(c.to_string(), "01111111011110111010111");
        assert_eq!(spec.parity_for(&info).unwrap(), parity);
    }

    #[test]
    fn zero_message_assembles_to_the_zero_codeword() {
        let spec = CodeSpec::builtin_2316();
        let info = BitVec::zeros(16).unwrap();
        let parity = BitVec::zeros(7).unwrap();
        assert!(spec.assemble(&info, &parity).unwrap().is_zero());
    }

    #[test]
    fn first_basis_message_assembles_as_derived() {
        // Oracle: evaluate the parity equations on i1=1, rest 0. Only p4, p6
        // contain i1 directly; p5 = i1 ^ ... ^ p4 cancels; p2 picks up p6.
        let spec = CodeSpec::builtin_2316();
        let info = BitVec::unit(16, 1).unwrap();
        let parity = spec.parity_for(&info).unwrap();
        assert_eq!(parity.to_string(), "0101010");
        let c = spec.assemble(&info, &parity).unwrap();
        assert_eq!(c.to_string(), "01100000000001000010000");
    }

    #[test]
    fn disassemble_recovers_the_worked_example() {
        let spec = CodeSpec::builtin_2316();
        let c: BitVec = "01111111011110111010111".parse().unwrap();
        let (info, parity) = spec.disassemble(&c).unwrap();
        assert_eq!(info.to_string(), "1111111111111111");
        assert_eq!(parity.to_string(), "0100010");

        let zero = BitVec::zeros(23).unwrap();
        let (info, parity) = spec.disassemble(&zero).unwrap();
        assert!(info.is_zero() && parity.is_zero());
    }

    #[test]
    fn assemble_rejects_wrong_lengths() {
        let spec = CodeSpec::builtin_2316();
        let short = BitVec::zeros(15).unwrap();
        let parity = BitVec::zeros(7).unwrap();
        assert!(spec.assemble(&short, &parity).is_err());
        assert!(spec.disassemble(&BitVec::zeros(22).unwrap()).is_err());
        assert!(spec.parity_for(&BitVec::zeros(3).unwrap()).is_err());
    }

    #[test]
    fn layout_must_be_a_bijection() {
        let spec = CodeSpec::builtin_2316();
        let mut layout = spec.layout().to_vec();
        layout[0] = BitRole::Info(1); // I1 now appears twice, P1 never
        let err = CodeSpec::new("bad", spec.matrix().clone(), layout, Capability::SecDaecTaec)
            .unwrap_err();
        assert!(matches!(err, CodeSpecError::LayoutNotBijective { .. }));
    }

    #[test]
    fn plan_mismatch_is_rejected() {
        let spec = CodeSpec::builtin_2316();
        let mut plan = builtin_2316_plan();
        plan[0].info_terms[0] = 5; // p3 no longer matches the matrix
        let err = CodeSpec::with_shared_plan(
            "bad",
            spec.matrix().clone(),
            spec.layout().to_vec(),
            Capability::SecDaecTaec,
            plan,
        )
        .unwrap_err();
        assert!(matches!(err, CodeSpecError::PlanMismatch { parity: 3 }));
    }

    #[test]
    fn code_file_round_trips() {
        let spec = CodeSpec::builtin_2316();
        let text = spec.to_file_string();
        let again = CodeSpec::from_file_str("builtin2316", &text).unwrap();
        assert_eq!(again.matrix(), spec.matrix());
        assert_eq!(again.layout(), spec.layout());
        assert_eq!(again.capability(), spec.capability());
    }

    #[test]
    fn bare_matrix_file_is_not_a_code_file() {
        let spec = CodeSpec::builtin_2316();
        let text = spec.matrix().render();
        assert!(matches!(
            CodeSpec::from_file_str("m", &text),
            Err(CodeFileError::Parse(ParseError::NotACodeFile))
        ));
        // ...but CodeFile::parse accepts it with no layout/capability.
        let file = CodeFile::parse(&text).unwrap();
        assert!(file.layout.is_none() && file.capability.is_none());
    }

    #[test]
    fn solved_equations_match_the_shared_plan_flattened() {
        // The five-term printed forms expand to these flattened equations.
        let spec = CodeSpec::builtin_2316();
        assert_eq!(spec.parity_equation_terms(1), vec![3, 4, 6, 8, 11, 13, 15, 16]);
        assert_eq!(spec.parity_equation_terms(2), vec![1, 2, 5, 7, 8, 9, 10, 13, 16]);
        assert_eq!(spec.parity_equation_terms(3), vec![4, 6, 8, 10, 11, 14, 15, 16]);
        assert_eq!(spec.parity_equation_terms(4), vec![1, 2, 3, 5, 12, 14, 15, 16]);
        assert_eq!(spec.parity_equation_terms(5), vec![2, 3, 4, 5, 7, 12, 14, 16]);
        assert_eq!(spec.parity_equation_terms(6), vec![1, 2, 7, 9, 10, 11, 13]);
        assert_eq!(spec.parity_equation_terms(7), vec![2, 6, 9, 12]);
    }

    proptest! {
        // disassemble is the inverse of assemble.
        #[test]
        fn assemble_disassemble_round_trip(info in any::<u16>(), parity in 0u8..=127) {
            let spec = CodeSpec::builtin_2316();
            let info = BitVec::from_word(16, info as u128);
            let parity = BitVec::from_word(7, parity as u128);
            let c = spec.assemble(&info, &parity).unwrap();
            let (i2, p2) = spec.disassemble(&c).unwrap();
            prop_assert_eq!(info, i2);
            prop_assert_eq!(parity, p2);
        }
    }
}
