//! Straight-line XOR programs: the equation systems behind an encoder's
//! parity bits or a decoder's syndrome bits, with common-subexpression
//! elimination and technology-independent cost metrics.
//!
//! Costs count 2-input XOR gates (`fan-in - 1` per node) and logic depth
//! assuming each node is computed as a balanced tree. Power is not modeled.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::error::XorError;

/// A term inside a node: another signal of the program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ref {
    /// 0-based index into the program's inputs.
    Input(usize),
    /// 0-based index into the program's temps.
    Temp(usize),
    /// 0-based index into the program's outputs (an earlier output reused
    /// as a term, as in the shared-form parity equations).
    Output(usize),
}

/// One signal definition: `name = terms[0] ^ terms[1] ^ ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorNode {
    pub name: String,
    pub terms: Vec<Ref>,
}

/// An acyclic system of XOR equations over named inputs.
///
/// Temps may reference inputs and earlier temps; outputs may additionally
/// reference earlier outputs. Node term lists never repeat a reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorProgram {
    pub inputs: Vec<String>,
    pub temps: Vec<XorNode>,
    pub outputs: Vec<XorNode>,
}

/// Which equation system to extract from a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Parity bits as flat XORs of information bits.
    Encoder,
    /// Syndrome bits as XORs of received codeword bits (one per check row).
    Syndrome,
}

/// Common-subexpression elimination policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CsePolicy {
    /// Repeatedly extract the operand pair shared by the most equations.
    GreedyPair,
    /// The fixed sharing of the built-in (23,16) encoder: p3, p6, p4 are
    /// computed once and reused inside p1, p2, p5.
    PaperShared,
}

/// Per-output cost line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputCost {
    pub name: String,
    pub term_count: usize,
    pub gates: usize,
}

/// Gate count and depth of a program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    /// Total 2-input XOR gates: sum of `fan-in - 1` over all nodes.
    pub xor2_count: usize,
    /// Max over outputs of accumulated balanced-tree depth.
    pub depth: usize,
    pub per_output: Vec<OutputCost>,
}

impl XorProgram {
    /// Checks the ordering invariants; transforms call this before
    /// returning a program.
    pub fn validate(&self) -> Result<(), XorError> {
        let bad = |detail: String| Err(XorError::BadProgram { detail });
        for (i, node) in self.temps.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &r in &node.terms {
                if !seen.insert(r) {
                    return bad(format!("temp {} repeats a term", node.name));
                }
                match r {
                    Ref::Input(j) if j < self.inputs.len() => {}
                    Ref::Temp(j) if j < i => {}
                    _ => return bad(format!("temp {} references a later signal", node.name)),
                }
            }
        }
        for (i, node) in self.outputs.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &r in &node.terms {
                if !seen.insert(r) {
                    return bad(format!("output {} repeats a term", node.name));
                }
                match r {
                    Ref::Input(j) if j < self.inputs.len() => {}
                    Ref::Temp(j) if j < self.temps.len() => {}
                    Ref::Output(j) if j < i => {}
                    _ => return bad(format!("output {} references a later signal", node.name)),
                }
            }
        }
        Ok(())
    }

    /// Evaluates the program; `inputs` in input order, returns outputs in
    /// output order.
    pub fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        assert_eq!(inputs.len(), self.inputs.len(), "input arity mismatch");
        let mut temps = Vec::with_capacity(self.temps.len());
        let mut outs: Vec<bool> = Vec::with_capacity(self.outputs.len());
        for node in &self.temps {
            let v = node
                .terms
                .iter()
                .fold(false, |acc, r| acc ^ read(r, inputs, &temps, &outs));
            temps.push(v);
        }
        for node in &self.outputs {
            let v = node
                .terms
                .iter()
                .fold(false, |acc, r| acc ^ read(r, inputs, &temps, &outs));
            outs.push(v);
        }
        outs
    }

    /// Flattens every output to its set of input indices (terms cancel in
    /// pairs mod 2), keyed by output name. Two programs are semantically
    /// equal over the same inputs iff these maps are equal.
    pub fn flatten(&self) -> BTreeMap<String, BTreeSet<usize>> {
        let mut temp_sets: Vec<BTreeSet<usize>> = Vec::with_capacity(self.temps.len());
        for node in &self.temps {
            temp_sets.push(flatten_terms(&node.terms, &temp_sets, &[]));
        }
        let mut out_sets: Vec<BTreeSet<usize>> = Vec::with_capacity(self.outputs.len());
        let mut map = BTreeMap::new();
        for node in &self.outputs {
            let set = flatten_terms(&node.terms, &temp_sets, &out_sets);
            map.insert(node.name.clone(), set.clone());
            out_sets.push(set);
        }
        map
    }

    fn ref_name(&self, r: Ref) -> &str {
        match r {
            Ref::Input(j) => &self.inputs[j],
            Ref::Temp(j) => &self.temps[j].name,
            Ref::Output(j) => &self.outputs[j].name,
        }
    }
}

fn read(r: &Ref, inputs: &[bool], temps: &[bool], outs: &[bool]) -> bool {
    match *r {
        Ref::Input(j) => inputs[j],
        Ref::Temp(j) => temps[j],
        Ref::Output(j) => outs[j],
    }
}

fn flatten_terms(
    terms: &[Ref],
    temp_sets: &[BTreeSet<usize>],
    out_sets: &[BTreeSet<usize>],
) -> BTreeSet<usize> {
    let mut acc = BTreeSet::new();
    for &r in terms {
        let other: BTreeSet<usize> = match r {
            Ref::Input(j) => BTreeSet::from([j]),
            Ref::Temp(j) => temp_sets[j].clone(),
            Ref::Output(j) => out_sets[j].clone(),
        };
        acc = acc.symmetric_difference(&other).copied().collect();
    }
    acc
}

/// One line per node, temps first: `name = a ^ b ^ c`.
impl fmt::Display for XorProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for node in self.temps.iter().chain(&self.outputs) {
            write!(f, "{} =", node.name)?;
            if node.terms.is_empty() {
                write!(f, " 0")?;
            }
            for (i, &r) in node.terms.iter().enumerate() {
                let sep = if i == 0 { " " } else { " ^ " };
                write!(f, "{sep}{}", self.ref_name(r))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Extracts the requested equation system from a code. Encoder outputs are
/// `p1..pr` over inputs `i1..ik` in fully flattened form; syndrome outputs
/// are `s1..sr` over received bits `c1..cn`.
pub fn extract_program(spec: &CodeSpec, side: Side) -> XorProgram {
    match side {
        Side::Encoder => {
            let inputs: Vec<String> = (1..=spec.k()).map(|t| format!("i{t}")).collect();
            let outputs = (1..=spec.r())
                .map(|t| XorNode {
                    name: format!("p{t}"),
                    terms: spec
                        .parity_equation_terms(t)
                        .into_iter()
                        .map(|u| Ref::Input(u - 1))
                        .collect(),
                })
                .collect();
            XorProgram { inputs, temps: Vec::new(), outputs }
        }
        Side::Syndrome => {
            let inputs: Vec<String> = (1..=spec.n()).map(|j| format!("c{j}")).collect();
            let outputs = (1..=spec.r())
                .map(|i| XorNode {
                    name: format!("s{i}"),
                    terms: spec
                        .matrix()
                        .row(i)
                        .ones()
                        .into_iter()
                        .map(|j| Ref::Input(j - 1))
                        .collect(),
                })
                .collect();
            XorProgram { inputs, temps: Vec::new(), outputs }
        }
    }
}

/// Applies a CSE policy. The result flattens to exactly the same equations
/// (checked) and never costs more 2-input gates than the input.
pub fn optimize_cse(prog: &XorProgram, policy: CsePolicy) -> Result<XorProgram, XorError> {
    prog.validate()?;
    let optimized = match policy {
        CsePolicy::GreedyPair => greedy_pair(prog.clone()),
        CsePolicy::PaperShared => paper_shared(prog)?,
    };
    optimized.validate()?;
    if optimized.flatten() != prog.flatten() {
        return Err(XorError::BadProgram {
            detail: "optimization changed the program semantics".to_string(),
        });
    }
    debug_assert!(cost(&optimized).xor2_count <= cost(prog).xor2_count);
    Ok(optimized)
}

/// Repeatedly extracts the (input-or-temp) pair contained in the most
/// nodes, until no pair appears in two nodes. Ties break on the smallest
/// pair in (kind, position) order, inputs before temps, so the result is
/// deterministic.
fn greedy_pair(mut prog: XorProgram) -> XorProgram {
    loop {
        // Count, per unordered pair, the number of nodes containing both.
        let mut counts: HashMap<(Ref, Ref), usize> = HashMap::new();
        {
            let nodes = prog.temps.iter().chain(&prog.outputs);
            for node in nodes {
                let mut shareable: Vec<Ref> = node
                    .terms
                    .iter()
                    .copied()
                    .filter(|r| !matches!(r, Ref::Output(_)))
                    .collect();
                shareable.sort_unstable();
                for (i, &a) in shareable.iter().enumerate() {
                    for &b in &shareable[i + 1..] {
                        *counts.entry((a, b)).or_insert(0) += 1;
                    }
                }
            }
        }
        let best = counts
            .into_iter()
            .filter(|&(_, count)| count >= 2)
            .min_by(|(pa, ca), (pb, cb)| cb.cmp(ca).then(pa.cmp(pb)));
        let Some(((a, b), _)) = best else {
            return prog;
        };

        // The new temp must sit before the first temp that will use it.
        let insert_at = prog
            .temps
            .iter()
            .position(|node| node.terms.contains(&a) && node.terms.contains(&b))
            .unwrap_or(prog.temps.len());

        let shift = |r: Ref| match r {
            Ref::Temp(j) if j >= insert_at => Ref::Temp(j + 1),
            other => other,
        };
        for node in prog.temps.iter_mut().chain(prog.outputs.iter_mut()) {
            for r in node.terms.iter_mut() {
                *r = shift(*r);
            }
        }
        let (a, b) = (shift(a), shift(b));

        let name = fresh_temp_name(&prog);
        prog.temps.insert(insert_at, XorNode { name, terms: vec![a, b] });
        let new_ref = Ref::Temp(insert_at);
        for node in prog.temps.iter_mut().skip(insert_at + 1).chain(prog.outputs.iter_mut()) {
            if node.terms.contains(&a) && node.terms.contains(&b) {
                node.terms.retain(|&r| r != a && r != b);
                node.terms.push(new_ref);
                node.terms.sort_unstable();
            }
        }
    }
}

fn fresh_temp_name(prog: &XorProgram) -> String {
    let taken = |name: &str| {
        prog.inputs.iter().any(|n| n == name)
            || prog.temps.iter().any(|n| n.name == name)
            || prog.outputs.iter().any(|n| n.name == name)
    };
    let mut i = prog.temps.len() + 1;
    loop {
        let name = format!("t{i}");
        if !taken(&name) {
            return name;
        }
        i += 1;
    }
}

/// Rebuilds the built-in encoder with its published sharing. Errors unless
/// `prog` is semantically the built-in (23,16) encoder program.
fn paper_shared(prog: &XorProgram) -> Result<XorProgram, XorError> {
    let builtin = CodeSpec::builtin_2316();
    let naive = extract_program(&builtin, Side::Encoder);
    if prog.inputs != naive.inputs || prog.flatten() != naive.flatten() {
        return Err(XorError::UnsupportedPolicy);
    }

    let plan = builtin.shared_plan().expect("built-in code carries its plan");
    let mut outputs: Vec<XorNode> = Vec::with_capacity(plan.len());
    for eq in plan {
        let mut terms: Vec<Ref> =
            eq.info_terms.iter().map(|&t| Ref::Input(t - 1)).collect();
        for &dep in &eq.parity_terms {
            let idx = outputs
                .iter()
                .position(|node| node.name == format!("p{dep}"))
                .expect("plan is in dependency order");
            terms.push(Ref::Output(idx));
        }
        outputs.push(XorNode { name: format!("p{}", eq.parity), terms });
    }
    Ok(XorProgram { inputs: naive.inputs, temps: Vec::new(), outputs })
}

/// Gate count and balanced-tree depth of a program.
pub fn cost(prog: &XorProgram) -> CostReport {
    let gates = |node: &XorNode| node.terms.len().saturating_sub(1);

    let mut temp_depths: Vec<usize> = Vec::with_capacity(prog.temps.len());
    for node in &prog.temps {
        temp_depths.push(node_depth(node, &temp_depths, &[]));
    }
    let mut out_depths: Vec<usize> = Vec::with_capacity(prog.outputs.len());
    let mut per_output = Vec::with_capacity(prog.outputs.len());
    for node in &prog.outputs {
        out_depths.push(node_depth(node, &temp_depths, &out_depths));
        per_output.push(OutputCost {
            name: node.name.clone(),
            term_count: node.terms.len(),
            gates: gates(node),
        });
    }

    CostReport {
        xor2_count: prog.temps.iter().chain(&prog.outputs).map(gates).sum(),
        depth: out_depths.into_iter().max().unwrap_or(0),
        per_output,
    }
}

fn node_depth(node: &XorNode, temp_depths: &[usize], out_depths: &[usize]) -> usize {
    let local = ceil_log2(node.terms.len());
    let inputs_depth = node
        .terms
        .iter()
        .map(|r| match *r {
            Ref::Input(_) => 0,
            Ref::Temp(j) => temp_depths[j],
            Ref::Output(j) => out_depths[j],
        })
        .max()
        .unwrap_or(0);
    local + inputs_depth
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn builtin_encoder() -> XorProgram {
        extract_program(&CodeSpec::builtin_2316(), Side::Encoder)
    }

    #[test]
    fn naive_encoder_costs_45_gates_at_depth_4() {
        let prog = builtin_encoder();
        let report = cost(&prog);
        // Flattened term counts 8, 9, 8, 8, 8, 7, 4 per parity bit.
        let terms: Vec<usize> = report.per_output.iter().map(|o| o.term_count).collect();
        assert_eq!(terms, vec![8, 9, 8, 8, 8, 7, 4]);
        assert_eq!(report.xor2_count, 45);
        assert_eq!(report.depth, 4); // ceil(log2(9))
    }

    #[test]
    fn naive_syndrome_costs_42_gates() {
        let prog = extract_program(&CodeSpec::builtin_2316(), Side::Syndrome);
        let report = cost(&prog);
        let terms: Vec<usize> = report.per_output.iter().map(|o| o.term_count).collect();
        assert_eq!(terms, vec![9, 9, 8, 6, 6, 6, 5]);
        assert_eq!(report.xor2_count, 42);
    }

    #[test]
    fn paper_shared_costs_35_gates() {
        let shared = optimize_cse(&builtin_encoder(), CsePolicy::PaperShared).unwrap();
        let report = cost(&shared);
        assert_eq!(report.xor2_count, 35);
        // Dependency order p3, p6, p4, p7, p1, p2, p5 with gate counts
        // 7, 6, 7, 3, 4, 4, 4 — the operator count of the printed equations.
        let gates: Vec<(String, usize)> =
            report.per_output.iter().map(|o| (o.name.clone(), o.gates)).collect();
        let expected: Vec<(String, usize)> =
            [("p3", 7), ("p6", 6), ("p4", 7), ("p7", 3), ("p1", 4), ("p2", 4), ("p5", 4)]
                .map(|(n, g)| (n.to_string(), g))
                .into();
        assert_eq!(gates, expected);
        assert!(report.xor2_count < cost(&builtin_encoder()).xor2_count);
    }

    #[test]
    fn paper_shared_is_semantically_equal_exhaustively() {
        let naive = builtin_encoder();
        let shared = optimize_cse(&naive, CsePolicy::PaperShared).unwrap();
        // Output order differs (dependency order); compare by name.
        for m in 0..=u16::MAX {
            let inputs: Vec<bool> = (0..16).map(|b| (m >> b) & 1 == 1).collect();
            let a = naive.eval(&inputs);
            let b = shared.eval(&inputs);
            for (i, node) in naive.outputs.iter().enumerate() {
                let j = shared.outputs.iter().position(|n| n.name == node.name).unwrap();
                assert_eq!(a[i], b[j], "output {} at message {m:#06x}", node.name);
            }
        }
    }

    #[test]
    fn paper_shared_rejects_other_programs() {
        let syndrome = extract_program(&CodeSpec::builtin_2316(), Side::Syndrome);
        assert_eq!(
            optimize_cse(&syndrome, CsePolicy::PaperShared).unwrap_err(),
            XorError::UnsupportedPolicy
        );
    }

    #[test]
    fn greedy_never_exceeds_naive_cost_on_the_builtin_encoder() {
        let naive = builtin_encoder();
        let optimized = optimize_cse(&naive, CsePolicy::GreedyPair).unwrap();
        assert!(cost(&optimized).xor2_count <= 45);
        assert_eq!(optimized.flatten(), naive.flatten());
    }

    #[test]
    fn greedy_shares_identical_outputs_completely() {
        let prog = XorProgram {
            inputs: vec!["a".into(), "b".into(), "c".into()],
            temps: vec![],
            outputs: vec![
                XorNode { name: "o1".into(), terms: vec![Ref::Input(0), Ref::Input(1), Ref::Input(2)] },
                XorNode { name: "o2".into(), terms: vec![Ref::Input(0), Ref::Input(1), Ref::Input(2)] },
            ],
        };
        let optimized = optimize_cse(&prog, CsePolicy::GreedyPair).unwrap();
        // One output costs 2 gates; the identical second costs nothing.
        assert_eq!(cost(&optimized).xor2_count, 2);
    }

    #[test]
    fn greedy_leaves_single_output_programs_unchanged() {
        let prog = XorProgram {
            inputs: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            temps: vec![],
            outputs: vec![XorNode {
                name: "o".into(),
                terms: vec![Ref::Input(0), Ref::Input(1), Ref::Input(2), Ref::Input(3)],
            }],
        };
        let optimized = optimize_cse(&prog, CsePolicy::GreedyPair).unwrap();
        assert_eq!(optimized, prog);
    }

    #[test]
    fn greedy_is_idempotent() {
        let once = optimize_cse(&builtin_encoder(), CsePolicy::GreedyPair).unwrap();
        let twice = optimize_cse(&once, CsePolicy::GreedyPair).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn empty_program_costs_nothing() {
        let prog = XorProgram { inputs: vec![], temps: vec![], outputs: vec![] };
        let report = cost(&prog);
        assert_eq!(report.xor2_count, 0);
        assert_eq!(report.depth, 0);
    }

    #[test]
    fn two_input_parity_is_one_gate_depth_one() {
        let prog = XorProgram {
            inputs: vec!["a".into(), "b".into()],
            temps: vec![],
            outputs: vec![XorNode { name: "p".into(), terms: vec![Ref::Input(0), Ref::Input(1)] }],
        };
        let report = cost(&prog);
        assert_eq!(report.xor2_count, 1);
        assert_eq!(report.depth, 1);
    }

    #[test]
    fn shared_form_depth_accumulates() {
        let shared = optimize_cse(&builtin_encoder(), CsePolicy::PaperShared).unwrap();
        // p2 = 4 info terms + p6 (5 terms, local depth 3) on top of p6's
        // depth 3.
        assert_eq!(cost(&shared).depth, 6);
    }

    #[test]
    fn program_dump_format() {
        let prog = XorProgram {
            inputs: vec!["i1".into(), "i2".into()],
            temps: vec![XorNode { name: "t1".into(), terms: vec![Ref::Input(0), Ref::Input(1)] }],
            outputs: vec![XorNode { name: "p1".into(), terms: vec![Ref::Temp(0), Ref::Input(0)] }],
        };
        assert_eq!(prog.to_string(), "t1 = i1 ^ i2\np1 = t1 ^ i1\n");
    }

    proptest! {
        // Greedy CSE preserves semantics on arbitrary programs.
        #[test]
        fn greedy_preserves_semantics(
            n_inputs in 2usize..7,
            term_masks in proptest::collection::vec(1u32..128, 1..6),
            samples in proptest::collection::vec(any::<u32>(), 10),
        ) {
            let inputs: Vec<String> = (0..n_inputs).map(|i| format!("x{i}")).collect();
            let outputs: Vec<XorNode> = term_masks
                .iter()
                .enumerate()
                .map(|(i, &mask)| XorNode {
                    name: format!("y{i}"),
                    terms: (0..n_inputs)
                        .filter(|b| (mask >> b) & 1 == 1)
                        .map(Ref::Input)
                        .collect(),
                })
                .collect();
            let prog = XorProgram { inputs, temps: vec![], outputs };
            let optimized = optimize_cse(&prog, CsePolicy::GreedyPair).unwrap();
            prop_assert!(cost(&optimized).xor2_count <= cost(&prog).xor2_count);
            for sample in samples {
                let bits: Vec<bool> = (0..n_inputs).map(|b| (sample >> b) & 1 == 1).collect();
                prop_assert_eq!(prog.eval(&bits), optimized.eval(&bits));
            }
        }
    }
}
