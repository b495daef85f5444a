//! Emission of synthesizable combinational HDL for encoders and decoders.
//!
//! The dialect is deliberately tiny: a module header, wire declarations and
//! continuous assignments only, so the text doubles as a gate netlist and
//! stays interpretable by [`crate::netlist`]. Identifiers are fixed:
//! `i[j]` message bits, `c[j]` codeword bits, `p[j]` parity bits, `s[j]`
//! syndrome bits, `t<j>` temporaries, `flip[j]` per-position correction
//! signals. Emission is deterministic, so output is byte-stable across
//! runs.

use crate::code::CodeSpec;
use crate::codec::SyndromeTable;
use crate::error::HdlError;
use crate::xor::{Ref, XorProgram};

/// An emitted module: its name, port summary and full text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HdlArtifact {
    pub module_name: String,
    /// (name, width) of each input port.
    pub inputs: Vec<(String, usize)>,
    /// (name, width) of each output port.
    pub outputs: Vec<(String, usize)>,
    pub text: String,
}

/// Emits the encoder for `spec` realized by `prog`, which must be an
/// encoder-side program for this code (inputs `i1..ik`, outputs a
/// permutation of `p1..pr`): one assignment per program node, then the
/// layout mapping onto the codeword vector.
pub fn emit_encoder(spec: &CodeSpec, prog: &XorProgram) -> Result<HdlArtifact, HdlError> {
    let (n, k, r) = (spec.n(), spec.k(), spec.r());
    let expected_inputs: Vec<String> = (1..=k).map(|t| format!("i{t}")).collect();
    if prog.inputs != expected_inputs {
        return Err(HdlError::ProgramMismatch {
            detail: format!("expected inputs i1..i{k}, found {:?}", prog.inputs),
        });
    }
    let mut names: Vec<&str> = prog.outputs.iter().map(|o| o.name.as_str()).collect();
    names.sort_unstable();
    let mut expected: Vec<String> = (1..=r).map(|t| format!("p{t}")).collect();
    expected.sort_unstable();
    if names != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(HdlError::ProgramMismatch {
            detail: format!("expected outputs p1..p{r}, found {names:?}"),
        });
    }

    let module_name = format!("{}_encoder", sanitize(spec.name()));
    let mut text = String::new();
    text.push_str(&format!("// {} encoder: {k}-bit message to {n}-bit codeword\n", spec.name()));
    text.push_str(&format!("module {module_name}(i, c);\n"));
    text.push_str(&format!("  input wire [{k}:1] i;\n"));
    text.push_str(&format!("  output wire [{n}:1] c;\n"));
    text.push_str(&format!("  wire [{r}:1] p;\n"));
    for node in &prog.temps {
        text.push_str(&format!("  wire {} = {};\n", node.name, render_terms(prog, &node.terms)));
    }
    for node in &prog.outputs {
        text.push_str(&format!(
            "  assign {} = {};\n",
            hdl_ident(&node.name),
            render_terms(prog, &node.terms)
        ));
    }
    for pos in 1..=n {
        let role = spec.layout()[pos - 1];
        text.push_str(&format!("  assign c[{pos}] = {};\n", role_ident(role)));
    }
    text.push_str("endmodule\n");

    Ok(HdlArtifact {
        module_name,
        inputs: vec![("i".to_string(), k)],
        outputs: vec![("c".to_string(), n)],
        text,
    })
}

/// Emits the decoder for `spec`: syndrome XOR tree per check row, one
/// AND-match term per correctable pattern, OR-combined flip signals, the
/// corrected message, and an `uncorrectable` flag raised when the syndrome
/// is non-zero but matches no pattern. Fails if the code's pattern
/// syndromes collide.
pub fn emit_decoder(spec: &CodeSpec) -> Result<HdlArtifact, HdlError> {
    let (n, k, r) = (spec.n(), spec.k(), spec.r());
    let table = SyndromeTable::build(spec)?;

    let module_name = format!("{}_decoder", sanitize(spec.name()));
    let mut text = String::new();
    text.push_str(&format!(
        "// {} decoder: corrects bursts up to {} adjacent bits\n",
        spec.name(),
        spec.capability().max_burst()
    ));
    text.push_str(&format!("module {module_name}(c, m, uncorrectable);\n"));
    text.push_str(&format!("  input wire [{n}:1] c;\n"));
    text.push_str(&format!("  output wire [{k}:1] m;\n"));
    text.push_str("  output wire uncorrectable;\n");
    text.push_str(&format!("  wire [{r}:1] s;\n"));
    text.push_str(&format!("  wire [{n}:1] flip;\n"));

    for i in 1..=r {
        let terms: Vec<String> =
            spec.matrix().row(i).ones().iter().map(|j| format!("c[{j}]")).collect();
        text.push_str(&format!("  assign s[{i}] = {};\n", terms.join(" ^ ")));
    }

    // One match term per correctable pattern, in (width, start) order.
    for (idx, (_, syndrome)) in table.entries().iter().enumerate() {
        let literals: Vec<String> = (1..=r)
            .map(|bit| {
                if syndrome.get(bit) {
                    format!("s[{bit}]")
                } else {
                    format!("~s[{bit}]")
                }
            })
            .collect();
        text.push_str(&format!("  wire t{} = {};\n", idx + 1, literals.join(" & ")));
    }

    for pos in 1..=n {
        let covering: Vec<String> = table
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, (span, _))| span.covers(pos))
            .map(|(idx, _)| format!("t{}", idx + 1))
            .collect();
        if covering.is_empty() {
            text.push_str(&format!("  assign flip[{pos}] = 1'b0;\n"));
        } else {
            text.push_str(&format!("  assign flip[{pos}] = {};\n", covering.join(" | ")));
        }
    }

    for t in 1..=k {
        let pos = spec.info_position(t);
        text.push_str(&format!("  assign m[{t}] = c[{pos}] ^ flip[{pos}];\n"));
    }

    let any_syndrome: Vec<String> = (1..=r).map(|i| format!("s[{i}]")).collect();
    let any_match: Vec<String> = (1..=table.len()).map(|i| format!("t{i}")).collect();
    text.push_str(&format!(
        "  assign uncorrectable = ({}) & ~({});\n",
        any_syndrome.join(" | "),
        any_match.join(" | ")
    ));
    text.push_str("endmodule\n");

    Ok(HdlArtifact {
        module_name,
        inputs: vec![("c".to_string(), n)],
        outputs: vec![("m".to_string(), k), ("uncorrectable".to_string(), 1)],
        text,
    })
}

fn render_terms(prog: &XorProgram, terms: &[Ref]) -> String {
    if terms.is_empty() {
        return "1'b0".to_string();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|&r| match r {
            Ref::Input(j) => hdl_ident(&prog.inputs[j]),
            Ref::Temp(j) => prog.temps[j].name.clone(),
            Ref::Output(j) => hdl_ident(&prog.outputs[j].name),
        })
        .collect();
    parts.join(" ^ ")
}

/// `p3` -> `p[3]`, `i14` -> `i[14]`; temporaries (`t` prefix) and names
/// without a digit suffix stay as they are.
fn hdl_ident(name: &str) -> String {
    if name.starts_with('t') {
        return name.to_string();
    }
    let split = name.find(|ch: char| ch.is_ascii_digit());
    match split {
        Some(at) if at > 0 && name[at..].chars().all(|ch| ch.is_ascii_digit()) => {
            format!("{}[{}]", &name[..at], &name[at..])
        }
        _ => name.to_string(),
    }
}

fn role_ident(role: crate::code::BitRole) -> String {
    match role {
        crate::code::BitRole::Info(t) => format!("i[{t}]"),
        crate::code::BitRole::Parity(t) => format!("p[{t}]"),
    }
}

fn sanitize(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|ch| if ch.is_ascii_alphanumeric() || ch == '_' { ch } else { '_' })
        .collect();
    if out.chars().next().is_none_or(|ch| ch.is_ascii_digit()) {
        out.insert(0, '_');
    }
    out
}
